#pragma once

// Slow, obviously-correct reference implementations used to check the
// library, plus the random graphs they are compared on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "commkit/graph.hpp"
#include "commkit/partition.hpp"

namespace oracle {

using commkit::Edge;
using commkit::Graph;
using commkit::NodeId;
using commkit::Partition;

/// The toy graph used throughout the examples: 1-2, 1-3, 2-3, 3-4, 4-5.
inline Graph toy() { return Graph::from_labeled_edges({{"1", "2"}, {"1", "3"}, {"2", "3"}, {"3", "4"}, {"4", "5"}}); }

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v});
  return Graph(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v});
  return Graph(leaves + 1, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 1; v < n; ++v) e.push_back({v - 1, v});
  return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v < n; ++v) e.push_back({v, static_cast<NodeId>((v + 1) % n)});
  return Graph(n, e);
}

/// G(n, p) with labels "1".."n". Without `keep_isolated`, nodes left
/// without edges are dropped (and the rest relabelled densely).
inline Graph random_graph(std::mt19937_64& rng, std::size_t max_nodes = 12, bool keep_isolated = true) {
  std::uniform_int_distribution<std::size_t> nd(2, max_nodes);
  std::uniform_real_distribution<double> pd(0.15, 0.85);
  const std::size_t n = nd(rng);
  const double p = pd(rng);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  if (edges.empty()) edges.push_back({0, 1});
  std::vector<NodeId> remap(n, 0);
  std::size_t count = n;
  if (!keep_isolated) {
    std::vector<char> used(n, 0);
    for (Edge e : edges) used[e.u] = used[e.v] = 1;
    count = 0;
    for (NodeId u = 0; u < n; ++u)
      if (used[u]) remap[u] = static_cast<NodeId>(count++);
    for (Edge& e : edges) e = {remap[e.u], remap[e.v]};
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < count; ++i) labels.push_back(std::to_string(i + 1));
  return Graph(count, edges, labels);
}

/// A suite of graphs reproducible from `seed`.
inline std::vector<Graph> random_suite(std::uint64_t seed, std::size_t count, std::size_t max_nodes = 12,
                                       bool keep_isolated = true) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_graph(rng, max_nodes, keep_isolated));
  return out;
}

inline std::set<NodeId> neighbor_set(const Graph& g, NodeId u) {
  std::set<NodeId> s;
  for (Edge e : g.edges()) {
    if (e.u == u) s.insert(e.v);
    if (e.v == u) s.insert(e.u);
  }
  return s;
}

/// All-pairs hop distances by Floyd-Warshall; -1 when unreachable.
inline std::vector<std::vector<int>> distances(const Graph& g) {
  const std::size_t n = g.node_count();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (Edge e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (int& x : row)
      if (x >= inf) x = -1;
  return d;
}

/// Every shortest s-t path, as node sequences, by depth-first search
/// constrained to the distance layers.
inline std::vector<std::vector<NodeId>> shortest_paths(const Graph& g, const std::vector<std::vector<int>>& d,
                                                       NodeId s, NodeId t) {
  std::vector<std::vector<NodeId>> out;
  if (d[s][t] < 0) return out;
  std::vector<NodeId> cur{s};
  std::function<void(NodeId)> walk = [&](NodeId x) {
    if (x == t) {
      out.push_back(cur);
      return;
    }
    for (NodeId y : neighbor_set(g, x)) {
      if (d[s][y] == d[s][x] + 1 && d[y][t] == d[x][t] - 1) {
        cur.push_back(y);
        walk(y);
        cur.pop_back();
      }
    }
  };
  walk(s);
  return out;
}

/// Edge betweenness by enumerating every shortest path of every unordered
/// pair. Aligned with g.edges().
inline std::vector<double> edge_betweenness(const Graph& g) {
  const auto d = distances(g);
  std::map<std::pair<NodeId, NodeId>, double> credit;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    for (NodeId t = s + 1; t < g.node_count(); ++t) {
      const auto paths = shortest_paths(g, d, s, t);
      for (const auto& p : paths)
        for (std::size_t i = 1; i < p.size(); ++i)
          credit[{std::min(p[i - 1], p[i]), std::max(p[i - 1], p[i])}] += 1.0 / static_cast<double>(paths.size());
    }
  }
  std::vector<double> out;
  for (Edge e : g.edges()) out.push_back(credit[{e.u, e.v}]);
  return out;
}

/// Node betweenness (interior nodes only, unordered pairs) by enumeration.
inline std::vector<double> node_betweenness(const Graph& g) {
  const auto d = distances(g);
  std::vector<double> out(g.node_count(), 0.0);
  for (NodeId s = 0; s < g.node_count(); ++s) {
    for (NodeId t = s + 1; t < g.node_count(); ++t) {
      const auto paths = shortest_paths(g, d, s, t);
      for (const auto& p : paths)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) out[p[i]] += 1.0 / static_cast<double>(paths.size());
    }
  }
  return out;
}

/// Component count by reachability.
inline std::size_t component_count(const Graph& g) {
  const auto d = distances(g);
  std::set<std::vector<int>> classes;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    std::vector<int> reach;
    for (std::size_t v = 0; v < g.node_count(); ++v)
      if (d[u][v] >= 0) reach.push_back(static_cast<int>(v));
    classes.insert(reach);
  }
  return classes.size();
}

/// Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j).
inline double modularity(const Graph& g, const Partition& p) {
  const std::size_t n = g.node_count();
  const double m2 = 2.0 * static_cast<double>(g.edge_count());
  double q = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (p.community_of(i) != p.community_of(j)) continue;
      const double a = i != j && g.has_edge(i, j) ? 1.0 : 0.0;
      q += a - static_cast<double>(g.degree(i) * g.degree(j)) / m2;
    }
  return q / m2;
}

inline std::vector<std::set<NodeId>> communities(const Partition& p) {
  std::vector<std::set<NodeId>> out(p.community_count());
  for (NodeId v = 0; v < p.node_count(); ++v) out[p.community_of(v)].insert(v);
  return out;
}

/// Mutual information in bits from explicit set intersections.
inline double mutual_information(const Partition& x, const Partition& y) {
  const double n = static_cast<double>(x.node_count());
  double j = 0.0;
  for (const auto& a : communities(x)) {
    for (const auto& b : communities(y)) {
      std::vector<NodeId> both;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
      if (both.empty()) continue;
      const double pij = static_cast<double>(both.size()) / n;
      const double pi = static_cast<double>(a.size()) / n;
      const double pj = static_cast<double>(b.size()) / n;
      j += pij * std::log2(pij / (pi * pj));
    }
  }
  return j;
}

inline double entropy(const Partition& p) {
  const double n = static_cast<double>(p.node_count());
  double h = 0.0;
  for (const auto& c : communities(p)) {
    const double pr = static_cast<double>(c.size()) / n;
    h -= pr * std::log2(pr);
  }
  return h;
}

/// Random partition of n nodes into at most `k` labelled groups.
inline Partition random_partition(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<std::size_t> d(0, k - 1);
  std::vector<std::size_t> raw(n);
  for (auto& r : raw) r = d(rng);
  return Partition(raw);
}

// ---- text encodings for format-equivalence tests ----------------------------

inline std::string to_gml(const Graph& g) {
  std::string s = "graph [\n  directed 0\n";
  for (NodeId u = 0; u < g.node_count(); ++u) s += "  node [ id " + g.label(u) + " ]\n";
  for (Edge e : g.edges()) s += "  edge [ source " + g.label(e.u) + " target " + g.label(e.v) + " ]\n";
  return s + "]\n";
}

/// Pajek numbering follows node ids (id i → vertex i+1).
inline std::string to_pajek(const Graph& g) {
  std::string s = "*Vertices " + std::to_string(g.node_count()) + "\n";
  for (NodeId u = 0; u < g.node_count(); ++u) s += std::to_string(u + 1) + " \"" + g.label(u) + "\"\n";
  s += "*Edges\n";
  for (Edge e : g.edges()) s += std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + "\n";
  return s;
}

/// Edges as label pairs, for comparing graphs whose node ids differ.
inline std::set<std::pair<std::string, std::string>> labeled_edges(const Graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (Edge e : g.edges()) {
    auto a = g.label(e.u), b = g.label(e.v);
    if (b < a) std::swap(a, b);
    out.insert({a, b});
  }
  return out;
}

} // namespace oracle

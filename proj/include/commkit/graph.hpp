#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "commkit/error.hpp"

namespace commkit {

/// Dense node index, 0..n-1 in first-seen order of the input.
using NodeId = std::uint32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

constexpr Edge make_edge(NodeId a, NodeId b) noexcept {
  return a < b ? Edge{a, b} : Edge{b, a};
}

struct ComponentLabeling {
  std::vector<std::uint32_t> component; // per node
  std::size_t count = 0;
};

/// Immutable simple undirected graph with a label table.
///
/// Adjacency lists are sorted, so neighbourhood intersections are linear
/// merges. Edges are kept in lexicographic order, which is also the
/// tie-break order used by the divisive engine.
class Graph {
public:
  Graph() = default;

  /// Builds a graph over `n` nodes. Parallel edges collapse; a self-loop or
  /// an endpoint >= n raises. Missing labels default to the decimal id.
  Graph(std::size_t n, std::span<const Edge> edges,
        std::vector<std::string> labels = {})
      : labels_(std::move(labels)), adjacency_(n) {
    if (labels_.empty()) {
      labels_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
    }
    if (labels_.size() != n)
      throw Error(ErrorCode::InvalidConfig, "label table size differs from node count");
    edges_.reserve(edges.size());
    for (Edge e : edges) {
      if (e.u >= n || e.v >= n)
        throw Error(ErrorCode::NodeNotFound, "edge endpoint out of range");
      if (e.u == e.v)
        throw Error(ErrorCode::InvalidPair, "self-loop on node " + labels_[e.u]);
      edges_.push_back(make_edge(e.u, e.v));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (Edge e : edges_) {
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  }

  /// Convenience for small literal graphs: labels are interned in
  /// first-seen order.
  static Graph from_labeled_edges(
      std::initializer_list<std::pair<std::string_view, std::string_view>> pairs,
      std::initializer_list<std::string_view> isolated = {}) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    auto intern = [&](std::string_view label) {
      auto [it, inserted] = index.emplace(std::string(label), static_cast<NodeId>(labels.size()));
      if (inserted) labels.emplace_back(label);
      return it->second;
    };
    std::vector<Edge> edges;
    for (auto [a, b] : pairs) {
      NodeId u = intern(a);
      NodeId v = intern(b);
      edges.push_back({u, v});
    }
    for (auto label : isolated) intern(label);
    const std::size_t n = labels.size(); // argument evaluation order is unspecified
    return Graph(n, edges, std::move(labels));
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return adjacency_.empty(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::string> labels() const noexcept { return labels_; }

  const std::string& label(NodeId u) const {
    check_node(u);
    return labels_[u];
  }

  std::optional<NodeId> find_node(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<NodeId>(it - labels_.begin());
  }

  std::size_t degree(NodeId u) const {
    check_node(u);
    return adjacency_[u].size();
  }

  std::span<const NodeId> neighbors(NodeId u) const {
    check_node(u);
    return adjacency_[u];
  }

  bool contains(NodeId u) const noexcept { return u < adjacency_.size(); }

  bool has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  /// Γ(u) ∩ Γ(v), sorted.
  std::vector<NodeId> common_neighborhood(NodeId u, NodeId v) const {
    check_pair(u, v);
    std::vector<NodeId> out;
    std::set_intersection(adjacency_[u].begin(), adjacency_[u].end(),
                          adjacency_[v].begin(), adjacency_[v].end(),
                          std::back_inserter(out));
    return out;
  }

  std::size_t common_neighbor_count(NodeId u, NodeId v) const {
    check_pair(u, v);
    return intersection_size(adjacency_[u], adjacency_[v]);
  }

  /// Number of triangles through the existing edge (u, v).
  std::size_t triangles_on_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    if (u == v || !has_edge(u, v))
      throw Error(ErrorCode::EdgeNotFound,
                  "(" + labels_[u] + ", " + labels_[v] + ") is not an edge");
    return intersection_size(adjacency_[u], adjacency_[v]);
  }

  /// Copy of this graph without `e`; node set and labels are unchanged.
  Graph without_edge(Edge e) const {
    e = make_edge(e.u, e.v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
      throw Error(ErrorCode::EdgeNotFound, "cannot remove a non-edge");
    Graph out;
    out.labels_ = labels_;
    out.adjacency_ = adjacency_;
    out.edges_ = edges_;
    out.edges_.erase(out.edges_.begin() + (it - edges_.begin()));
    auto drop = [](std::vector<NodeId>& list, NodeId x) {
      list.erase(std::lower_bound(list.begin(), list.end(), x));
    };
    drop(out.adjacency_[e.u], e.v);
    drop(out.adjacency_[e.v], e.u);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  static std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        ++count;
        ++i;
        ++j;
      }
    }
    return count;
  }

  void check_node(NodeId u) const {
    if (u >= adjacency_.size())
      throw Error(ErrorCode::NodeNotFound, "node id " + std::to_string(u) + " not in graph");
  }

  void check_pair(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    if (u == v) throw Error(ErrorCode::InvalidPair, "pair endpoints must differ");
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
};

/// Component ids are assigned in increasing order of each component's
/// smallest node id.
inline ComponentLabeling connected_components(const Graph& g) {
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  ComponentLabeling out;
  out.component.assign(g.node_count(), unset);
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < g.node_count(); ++start) {
    if (out.component[start] != unset) continue;
    const auto id = static_cast<std::uint32_t>(out.count++);
    out.component[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      for (NodeId y : g.neighbors(x)) {
        if (out.component[y] == unset) {
          out.component[y] = id;
          stack.push_back(y);
        }
      }
    }
  }
  return out;
}

/// BFS hop counts from `source`; std::nullopt marks unreachable nodes.
inline std::vector<std::optional<std::uint32_t>> shortest_path_lengths(const Graph& g, NodeId source) {
  if (!g.contains(source))
    throw Error(ErrorCode::NodeNotFound, "source node not in graph");
  std::vector<std::optional<std::uint32_t>> dist(g.node_count());
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    NodeId x = queue.front();
    queue.pop_front();
    for (NodeId y : g.neighbors(x)) {
      if (!dist[y]) {
        dist[y] = *dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

} // namespace commkit

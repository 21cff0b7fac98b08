#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "commkit/error.hpp"
#include "commkit/graph.hpp"

namespace commkit {

enum class MetricId { Betweenness, Radicchi, CN, AA, RA, PA, JA, SO, SA, HD, HP, LLHN };

/// Which extreme of the score the divisive engine removes.
enum class Orientation { RemoveMax, RemoveMin };

inline constexpr std::array<MetricId, 12> all_metrics = {
    MetricId::Betweenness, MetricId::Radicchi, MetricId::CN, MetricId::AA,
    MetricId::RA,          MetricId::PA,       MetricId::JA, MetricId::SO,
    MetricId::SA,          MetricId::HD,       MetricId::HP, MetricId::LLHN};

/// The ten neighbourhood similarity indices.
inline constexpr std::array<MetricId, 10> similarity_metrics = {
    MetricId::CN, MetricId::AA, MetricId::RA, MetricId::PA, MetricId::JA,
    MetricId::SO, MetricId::SA, MetricId::HD, MetricId::HP, MetricId::LLHN};

constexpr Orientation orientation(MetricId m) noexcept {
  return m == MetricId::Betweenness ? Orientation::RemoveMax : Orientation::RemoveMin;
}

/// True when an edge's score depends only on its endpoints' neighbourhoods.
constexpr bool is_local(MetricId m) noexcept { return m != MetricId::Betweenness; }

/// Lower-case identifier used on the command line and in reports.
constexpr std::string_view metric_name(MetricId m) noexcept {
  switch (m) {
  case MetricId::Betweenness: return "betweenness";
  case MetricId::Radicchi: return "radicchi";
  case MetricId::CN: return "cn";
  case MetricId::AA: return "aa";
  case MetricId::RA: return "ra";
  case MetricId::PA: return "pa";
  case MetricId::JA: return "ja";
  case MetricId::SO: return "so";
  case MetricId::SA: return "sa";
  case MetricId::HD: return "hd";
  case MetricId::HP: return "hp";
  case MetricId::LLHN: return "llhn";
  }
  return "?";
}

/// Short upper-case code as used in comparison tables (GN, RAD, CN, ...).
constexpr std::string_view metric_code(MetricId m) noexcept {
  switch (m) {
  case MetricId::Betweenness: return "GN";
  case MetricId::Radicchi: return "RAD";
  case MetricId::CN: return "CN";
  case MetricId::AA: return "AA";
  case MetricId::RA: return "RA";
  case MetricId::PA: return "PA";
  case MetricId::JA: return "JA";
  case MetricId::SO: return "SO";
  case MetricId::SA: return "SA";
  case MetricId::HD: return "HD";
  case MetricId::HP: return "HP";
  case MetricId::LLHN: return "LLHN";
  }
  return "?";
}

/// Accepts the identifier or the table code, case-insensitively.
inline std::optional<MetricId> parse_metric(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (MetricId m : all_metrics) {
    std::string code;
    for (char c : metric_code(m)) code.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == metric_name(m) || lower == code) return m;
  }
  return std::nullopt;
}

struct EdgeScore {
  Edge edge;
  double value = 0.0;
  bool excluded = false; // Radicchi pendant edge; value is meaningless

  friend bool operator==(const EdgeScore&, const EdgeScore&) = default;
};

/// One score per edge, aligned with Graph::edges().
using EdgeScores = std::vector<EdgeScore>;

namespace detail {

/// Index of every adjacency slot's edge in Graph::edges().
inline std::vector<std::vector<std::uint32_t>> adjacency_edge_index(const Graph& g) {
  std::vector<std::vector<std::uint32_t>> index(g.node_count());
  auto edges = g.edges();
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      auto it = std::lower_bound(edges.begin(), edges.end(), make_edge(u, v));
      index[u].push_back(static_cast<std::uint32_t>(it - edges.begin()));
    }
  }
  return index;
}

/// Single-source shortest-path counting with dependency back-propagation.
/// `edge_credit`/`node_credit` receive this source's contribution only.
class BrandesWorkspace {
public:
  BrandesWorkspace(const Graph& g, const std::vector<std::vector<std::uint32_t>>& edge_index)
      : g_(g), edge_index_(edge_index), dist_(g.node_count()), sigma_(g.node_count()),
        delta_(g.node_count()) {
    order_.reserve(g.node_count());
  }

  void run(NodeId source, std::span<double> edge_credit, std::span<double> node_credit) {
    std::fill(dist_.begin(), dist_.end(), -1);
    std::fill(sigma_.begin(), sigma_.end(), 0.0);
    std::fill(delta_.begin(), delta_.end(), 0.0);
    order_.clear();

    dist_[source] = 0;
    sigma_[source] = 1.0;
    std::size_t head = 0;
    order_.push_back(source);
    while (head < order_.size()) {
      NodeId x = order_[head++];
      for (NodeId y : g_.neighbors(x)) {
        if (dist_[y] < 0) {
          dist_[y] = dist_[x] + 1;
          order_.push_back(y);
        }
        if (dist_[y] == dist_[x] + 1) sigma_[y] += sigma_[x];
      }
    }

    // Predecessors of w are the neighbours one hop closer to the source.
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      NodeId w = *it;
      auto nbrs = g_.neighbors(w);
      for (std::size_t slot = 0; slot < nbrs.size(); ++slot) {
        NodeId v = nbrs[slot];
        if (dist_[v] != dist_[w] - 1) continue;
        double credit = sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
        if (!edge_credit.empty()) edge_credit[edge_index_[w][slot]] += credit;
        delta_[v] += credit;
      }
      if (!node_credit.empty() && w != source) node_credit[w] += delta_[w];
    }
  }

private:
  const Graph& g_;
  const std::vector<std::vector<std::uint32_t>>& edge_index_;
  std::vector<std::int64_t> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<NodeId> order_;
};

/// Sums per-source Brandes credit in source order. Sources are processed
/// in batches across `workers` threads; each batch is reduced sequentially
/// so the result is bit-identical for any worker count.
inline void brandes_accumulate(const Graph& g, unsigned workers, std::vector<double>* edge_total,
                               std::vector<double>* node_total) {
  const std::size_t n = g.node_count();
  const std::size_t m = g.edge_count();
  const auto edge_index = adjacency_edge_index(g);
  if (edge_total) edge_total->assign(m, 0.0);
  if (node_total) node_total->assign(n, 0.0);
  workers = std::max(1u, workers);

  const std::size_t edge_width = edge_total ? m : 0;
  const std::size_t node_width = node_total ? n : 0;
  const std::size_t batch = workers == 1 ? 1 : static_cast<std::size_t>(workers) * 4;
  std::vector<double> edge_buf(batch * edge_width);
  std::vector<double> node_buf(batch * node_width);

  auto work = [&](std::size_t first, std::size_t count, unsigned lane) {
    BrandesWorkspace ws(g, edge_index);
    for (std::size_t i = lane; i < count; i += workers) {
      std::span<double> eb(edge_buf.data() + i * edge_width, edge_width);
      std::span<double> nb(node_buf.data() + i * node_width, node_width);
      std::fill(eb.begin(), eb.end(), 0.0);
      std::fill(nb.begin(), nb.end(), 0.0);
      ws.run(static_cast<NodeId>(first + i), eb, nb);
    }
  };

  for (std::size_t first = 0; first < n; first += batch) {
    const std::size_t count = std::min(batch, n - first);
    if (workers == 1) {
      work(first, count, 0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned lane = 1; lane < workers; ++lane) pool.emplace_back(work, first, count, lane);
      work(first, count, 0);
    }
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t e = 0; e < edge_width; ++e) (*edge_total)[e] += edge_buf[i * edge_width + e];
      for (std::size_t v = 0; v < node_width; ++v) (*node_total)[v] += node_buf[i * node_width + v];
    }
  }
}

inline std::size_t union_size(const Graph& g, NodeId u, NodeId v, std::size_t common) {
  return g.degree(u) + g.degree(v) - common;
}

} // namespace detail

/// Edge betweenness over unordered node pairs: each pair hands one unit of
/// credit, split evenly among its shortest paths, to the edges on them.
/// O(|V|·|E|) via one BFS and back-propagation per source.
inline EdgeScores edge_betweenness(const Graph& g, unsigned workers = 1) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "edge betweenness of an empty graph");
  std::vector<double> total;
  detail::brandes_accumulate(g, workers, &total, nullptr);
  EdgeScores out;
  out.reserve(g.edge_count());
  auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) out.push_back({edges[i], total[i] / 2.0, false});
  return out;
}

/// Radicchi edge clustering (z + 1) / min(k_u - 1, k_v - 1). Pendant edges
/// have a zero denominator and come back excluded.
inline EdgeScore radicchi_coefficient(const Graph& g, NodeId u, NodeId v) {
  const std::size_t z = g.triangles_on_edge(u, v);
  const std::size_t denom = std::min(g.degree(u), g.degree(v)) - 1;
  if (denom == 0) return {make_edge(u, v), 0.0, true};
  return {make_edge(u, v), static_cast<double>(z + 1) / static_cast<double>(denom), false};
}

inline double score_cn(const Graph& g, NodeId u, NodeId v) {
  return static_cast<double>(g.common_neighbor_count(u, v));
}

/// Adamic-Adar with the natural logarithm. A shared neighbour always has
/// degree >= 2, so the logarithm is positive.
inline double score_aa(const Graph& g, NodeId u, NodeId v) {
  double s = 0.0;
  for (NodeId z : g.common_neighborhood(u, v)) s += 1.0 / std::log(static_cast<double>(g.degree(z)));
  return s;
}

inline double score_ra(const Graph& g, NodeId u, NodeId v) {
  double s = 0.0;
  for (NodeId z : g.common_neighborhood(u, v)) s += 1.0 / static_cast<double>(g.degree(z));
  return s;
}

inline double score_pa(const Graph& g, NodeId u, NodeId v) {
  if (u == v) throw Error(ErrorCode::InvalidPair, "pair endpoints must differ");
  return static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v));
}

// The normalised indices below score 0 whenever their denominator vanishes.

inline double score_jaccard(const Graph& g, NodeId u, NodeId v) {
  const std::size_t common = g.common_neighbor_count(u, v);
  const std::size_t uni = detail::union_size(g, u, v, common);
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

inline double score_sorensen(const Graph& g, NodeId u, NodeId v) {
  const std::size_t common = g.common_neighbor_count(u, v);
  const std::size_t sum = g.degree(u) + g.degree(v);
  return sum == 0 ? 0.0 : 2.0 * static_cast<double>(common) / static_cast<double>(sum);
}

inline double score_salton(const Graph& g, NodeId u, NodeId v) {
  const std::size_t common = g.common_neighbor_count(u, v);
  const std::size_t prod = g.degree(u) * g.degree(v);
  return prod == 0 ? 0.0 : static_cast<double>(common) / std::sqrt(static_cast<double>(prod));
}

inline double score_hub_depressed(const Graph& g, NodeId u, NodeId v) {
  const std::size_t common = g.common_neighbor_count(u, v);
  const std::size_t hi = std::max(g.degree(u), g.degree(v));
  return hi == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(hi);
}

inline double score_hub_promoted(const Graph& g, NodeId u, NodeId v) {
  const std::size_t common = g.common_neighbor_count(u, v);
  const std::size_t lo = std::min(g.degree(u), g.degree(v));
  return lo == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(lo);
}

inline double score_llhn(const Graph& g, NodeId u, NodeId v) {
  const std::size_t common = g.common_neighbor_count(u, v);
  const std::size_t prod = g.degree(u) * g.degree(v);
  return prod == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(prod);
}

/// Scores one pair with a local metric. Radicchi requires an existing edge;
/// the similarity indices accept any pair of distinct nodes.
inline EdgeScore score_pair(MetricId metric, const Graph& g, NodeId u, NodeId v) {
  const Edge e = make_edge(u, v);
  switch (metric) {
  case MetricId::Betweenness:
    throw Error(ErrorCode::InvalidConfig, "betweenness is a global metric, not a pair score");
  case MetricId::Radicchi: return radicchi_coefficient(g, u, v);
  case MetricId::CN: return {e, score_cn(g, u, v)};
  case MetricId::AA: return {e, score_aa(g, u, v)};
  case MetricId::RA: return {e, score_ra(g, u, v)};
  case MetricId::PA: return {e, score_pa(g, u, v)};
  case MetricId::JA: return {e, score_jaccard(g, u, v)};
  case MetricId::SO: return {e, score_sorensen(g, u, v)};
  case MetricId::SA: return {e, score_salton(g, u, v)};
  case MetricId::HD: return {e, score_hub_depressed(g, u, v)};
  case MetricId::HP: return {e, score_hub_promoted(g, u, v)};
  case MetricId::LLHN: return {e, score_llhn(g, u, v)};
  }
  throw Error(ErrorCode::InvalidConfig, "unknown metric");
}

/// Scores every edge of `g`.
inline EdgeScores score_edges(const Graph& g, MetricId metric, unsigned workers = 1) {
  if (metric == MetricId::Betweenness) return edge_betweenness(g, workers);
  EdgeScores out;
  out.reserve(g.edge_count());
  for (Edge e : g.edges()) out.push_back(score_pair(metric, g, e.u, e.v));
  return out;
}

/// Local clustering 2·m_i / (k_i·(k_i − 1)); 0 when k_i <= 1.
inline double node_clustering(const Graph& g, NodeId i) {
  const std::size_t k = g.degree(i);
  if (k <= 1) return 0.0;
  auto nbrs = g.neighbors(i);
  std::size_t links = 0;
  for (std::size_t a = 0; a < nbrs.size(); ++a)
    for (std::size_t b = a + 1; b < nbrs.size(); ++b)
      if (g.has_edge(nbrs[a], nbrs[b])) ++links;
  return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

/// Node betweenness over unordered pairs, endpoints excluded, unnormalised.
inline std::vector<double> node_betweenness(const Graph& g, unsigned workers = 1) {
  std::vector<double> total;
  detail::brandes_accumulate(g, workers, nullptr, &total);
  for (double& x : total) x /= 2.0;
  return total;
}

/// (n − 1) / Σ d(u, v) over nodes reachable from u; 0 for an isolated node.
inline std::vector<double> closeness_centrality(const Graph& g) {
  std::vector<double> out(g.node_count(), 0.0);
  if (g.node_count() < 2) return out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    std::uint64_t sum = 0;
    for (const auto& d : shortest_path_lengths(g, u))
      if (d) sum += *d;
    if (sum > 0) out[u] = static_cast<double>(g.node_count() - 1) / static_cast<double>(sum);
  }
  return out;
}

/// Principal adjacency eigenvector, unit Euclidean norm.
///
/// Iterates on A + I, which shares A's eigenvectors but has a strictly
/// dominant eigenvalue on bipartite graphs as well. Stops when successive
/// iterates differ by < 1e-10 in the infinity norm or after 10000 steps.
inline std::vector<double> eigenvector_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (int iter = 0; iter < 10000; ++iter) {
    for (NodeId u = 0; u < n; ++u) {
      double s = x[u];
      for (NodeId v : g.neighbors(u)) s += x[v];
      next[u] = s;
    }
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      diff = std::max(diff, std::abs(next[i] - x[i]));
    }
    x.swap(next);
    if (diff < 1e-10) break;
  }
  return x;
}

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double degree_avg = 0.0;
  double clustering_coef_avg = 0.0;
  double avg_path_length = 0.0;
  double closeness_avg = 0.0;
  double eigenvector_avg = 0.0;
  double betweenness_avg = 0.0;
  /// False when avg_path_length was taken over reachable pairs only.
  bool connected = true;
};

inline GraphStats graph_stats(const Graph& g) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "statistics of an empty graph");
  GraphStats s;
  const std::size_t n = g.node_count();
  s.node_count = n;
  s.edge_count = g.edge_count();
  s.degree_avg = 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(n);

  double cc = 0.0;
  for (NodeId u = 0; u < n; ++u) cc += node_clustering(g, u);
  s.clustering_coef_avg = cc / static_cast<double>(n);

  std::uint64_t dist_sum = 0;
  std::uint64_t pairs = 0;
  for (NodeId u = 0; u < n; ++u) {
    auto dist = shortest_path_lengths(g, u);
    for (NodeId v = u + 1; v < n; ++v) {
      if (dist[v]) {
        dist_sum += *dist[v];
        ++pairs;
      }
    }
  }
  s.connected = pairs == static_cast<std::uint64_t>(n) * (n - 1) / 2;
  s.avg_path_length = pairs == 0 ? 0.0 : static_cast<double>(dist_sum) / static_cast<double>(pairs);

  auto mean = [n](const std::vector<double>& xs) {
    double t = 0.0;
    for (double x : xs) t += x;
    return t / static_cast<double>(n);
  };
  s.closeness_avg = mean(closeness_centrality(g));
  s.eigenvector_avg = mean(eigenvector_centrality(g));
  s.betweenness_avg = mean(node_betweenness(g));
  return s;
}

} // namespace commkit

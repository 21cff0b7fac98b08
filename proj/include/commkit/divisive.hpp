#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "commkit/error.hpp"
#include "commkit/graph.hpp"
#include "commkit/metrics.hpp"
#include "commkit/partition.hpp"

namespace commkit {

enum class RecomputePolicy {
  Full,         // rescore every edge after each removal
  Neighborhood, // rescore only edges touching the removed edge's closed neighbourhood
};

struct RunConfig {
  MetricId metric = MetricId::Betweenness;
  /// Stop once this many components exist; std::nullopt runs until no
  /// eligible edge remains.
  std::optional<std::size_t> target_k;
  RecomputePolicy policy = RecomputePolicy::Full;
  unsigned workers = 1; // betweenness only
};

enum class StopReason {
  TargetReached,
  EdgesExhausted,
  Deadlock, // only excluded (pendant) Radicchi edges remain
};

constexpr std::string_view to_string(StopReason r) noexcept {
  switch (r) {
  case StopReason::TargetReached: return "TargetReached";
  case StopReason::EdgesExhausted: return "EdgesExhausted";
  case StopReason::Deadlock: return "DeadlockStop";
  }
  return "?";
}

struct Removal {
  Edge edge;
  double score = 0.0;
  std::size_t components_after = 0;

  friend bool operator==(const Removal&, const Removal&) = default;
};

/// Ordered log of edge removals over a base graph.
struct Dendrogram {
  std::shared_ptr<const Graph> base;
  std::size_t initial_components = 0;
  std::vector<Removal> removals;
  StopReason stop_reason = StopReason::EdgesExhausted;

  std::size_t final_components() const noexcept {
    return removals.empty() ? initial_components : removals.back().components_after;
  }
};

/// Equal within a relative 1e-10, so ties survive summation-order noise and
/// positive rescaling of every score.
inline bool scores_tie(double a, double b) noexcept {
  return a == b || std::abs(a - b) <= 1e-10 * std::max(std::abs(a), std::abs(b));
}

/// Index of the edge to remove: the extreme score in the metric's
/// orientation, skipping excluded edges, ties to the lexicographically
/// smallest edge. `scores` must be sorted by edge.
inline std::optional<std::size_t> select_removal(const EdgeScores& scores, Orientation dir) {
  std::optional<double> best;
  for (const auto& s : scores) {
    if (s.excluded) continue;
    if (!best || (dir == Orientation::RemoveMax ? s.value > *best : s.value < *best)) best = s.value;
  }
  if (!best) return std::nullopt;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (!scores[i].excluded && scores_tie(scores[i].value, *best)) return i;
  return std::nullopt;
}

namespace detail {

/// Rescores after `removed` left `before`, reusing cached scores for edges
/// whose endpoints lie outside the removed edge's closed neighbourhood.
inline EdgeScores rescore_neighborhood(const Graph& before, const Graph& after, Edge removed,
                                       const EdgeScores& cached, MetricId metric) {
  std::vector<char> touched(after.node_count(), 0);
  touched[removed.u] = touched[removed.v] = 1;
  for (NodeId x : before.neighbors(removed.u)) touched[x] = 1;
  for (NodeId x : before.neighbors(removed.v)) touched[x] = 1;

  EdgeScores out;
  out.reserve(after.edge_count());
  std::size_t j = 0;
  for (Edge e : after.edges()) {
    while (cached[j].edge != e) ++j;
    if (touched[e.u] || touched[e.v])
      out.push_back(score_pair(metric, after, e.u, e.v));
    else
      out.push_back(cached[j]);
  }
  return out;
}

} // namespace detail

/// Hierarchical divisive clustering: repeatedly score the current edges,
/// remove the extreme one, and log the resulting component count.
inline Dendrogram run_divisive(const Graph& g, const RunConfig& cfg) {
  if (g.edge_count() == 0) throw Error(ErrorCode::InvalidConfig, "graph has no edges to remove");
  if (cfg.target_k) {
    if (*cfg.target_k < 1) throw Error(ErrorCode::InvalidConfig, "target k must be positive");
    if (*cfg.target_k > g.node_count())
      throw Error(ErrorCode::InvalidConfig, "target k " + std::to_string(*cfg.target_k) +
                                                " exceeds node count " + std::to_string(g.node_count()));
  }
  if (cfg.policy == RecomputePolicy::Neighborhood && !is_local(cfg.metric))
    throw Error(ErrorCode::InvalidConfig, "neighborhood recompute requires a local metric");

  Dendrogram d;
  d.base = std::make_shared<const Graph>(g);
  d.initial_components = connected_components(g).count;

  const Orientation dir = orientation(cfg.metric);
  Graph current = g;
  std::size_t components = d.initial_components;
  EdgeScores scores = score_edges(current, cfg.metric, cfg.workers);

  while (true) {
    if (cfg.target_k && components >= *cfg.target_k) {
      d.stop_reason = StopReason::TargetReached;
      break;
    }
    if (current.edge_count() == 0) {
      d.stop_reason = StopReason::EdgesExhausted;
      break;
    }
    auto pick = select_removal(scores, dir);
    if (!pick) {
      d.stop_reason = StopReason::Deadlock;
      break;
    }
    const EdgeScore chosen = scores[*pick];
    Graph next = current.without_edge(chosen.edge);
    components = connected_components(next).count;
    d.removals.push_back({chosen.edge, chosen.value, components});

    if (cfg.policy == RecomputePolicy::Neighborhood)
      scores = detail::rescore_neighborhood(current, next, chosen.edge, scores, cfg.metric);
    current = std::move(next);
    if (cfg.policy == RecomputePolicy::Full) scores = score_edges(current, cfg.metric, cfg.workers);
  }
  return d;
}

namespace detail {

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

} // namespace detail

/// Component partition at the first point of the removal sequence where
/// exactly `k` components exist; k = 1 is the whole node set.
inline Partition partition_at_k(const Dendrogram& d, std::size_t k) {
  const Graph& g = *d.base;
  if (k == 0) throw Error(ErrorCode::KNotReached, "k must be positive");
  if (k == 1) return Partition::single(g.node_count());
  if (k > d.final_components())
    throw Error(ErrorCode::KNotReached, "dendrogram reaches only " + std::to_string(d.final_components()) +
                                            " communities, asked for " + std::to_string(k));
  std::size_t prefix = 0; // removals applied
  if (k != d.initial_components) {
    auto it = std::find_if(d.removals.begin(), d.removals.end(),
                           [k](const Removal& r) { return r.components_after == k; });
    if (it == d.removals.end())
      throw Error(ErrorCode::KNotReached, "k = " + std::to_string(k) + " is never reached");
    prefix = static_cast<std::size_t>(it - d.removals.begin()) + 1;
  }

  std::vector<Edge> removed;
  removed.reserve(prefix);
  for (std::size_t i = 0; i < prefix; ++i) removed.push_back(d.removals[i].edge);
  std::sort(removed.begin(), removed.end());

  std::vector<std::size_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (Edge e : g.edges()) {
    if (std::binary_search(removed.begin(), removed.end(), e)) continue;
    auto a = detail::find_root(parent, e.u);
    auto b = detail::find_root(parent, e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> raw(g.node_count());
  for (std::size_t v = 0; v < raw.size(); ++v) raw[v] = detail::find_root(parent, v);
  return Partition(raw);
}

} // namespace commkit

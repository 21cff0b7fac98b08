#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "commkit/divisive.hpp"
#include "commkit/error.hpp"
#include "commkit/graph.hpp"
#include "commkit/partition.hpp"

namespace commkit {

/// Newman modularity Σ_r (e_rr − a_r²), with e_rr the fraction of edges
/// inside community r and a_r the fraction of edge endpoints attached to it.
inline double modularity(const Graph& g, const Partition& p) {
  if (p.node_count() != g.node_count())
    throw Error(ErrorCode::PartitionMismatch, "partition covers " + std::to_string(p.node_count()) +
                                                  " nodes, graph has " + std::to_string(g.node_count()));
  if (g.edge_count() == 0) throw Error(ErrorCode::UndefinedModularity, "graph has no edges");
  const double m = static_cast<double>(g.edge_count());
  std::vector<double> inside(p.community_count(), 0.0);
  std::vector<double> degree(p.community_count(), 0.0);
  for (Edge e : g.edges()) {
    const auto cu = p.community_of(e.u);
    const auto cv = p.community_of(e.v);
    if (cu == cv) inside[cu] += 1.0;
    degree[cu] += 1.0;
    degree[cv] += 1.0;
  }
  double q = 0.0;
  for (std::size_t r = 0; r < inside.size(); ++r) {
    const double a = degree[r] / (2.0 * m);
    q += inside[r] / m - a * a;
  }
  return q;
}

/// Shannon entropy of community sizes, in bits.
inline double entropy(const Partition& p) {
  const double n = static_cast<double>(p.node_count());
  double h = 0.0;
  for (std::size_t size : p.community_sizes()) {
    if (size == 0) continue;
    const double pr = static_cast<double>(size) / n;
    h -= pr * std::log2(pr);
  }
  return h;
}

/// Joint membership counts n_ij = |X_i ∩ Y_j|.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t total = 0;
  std::vector<std::size_t> counts; // row-major

  std::size_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }

  std::vector<std::size_t> row_sums() const {
    std::vector<std::size_t> out(rows, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out[i] += at(i, j);
    return out;
  }

  std::vector<std::size_t> col_sums() const {
    std::vector<std::size_t> out(cols, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out[j] += at(i, j);
    return out;
  }
};

inline ContingencyTable contingency(const Partition& x, const Partition& y) {
  if (x.node_count() != y.node_count())
    throw Error(ErrorCode::PartitionMismatch, "partitions cover different node sets (" +
                                                  std::to_string(x.node_count()) + " vs " +
                                                  std::to_string(y.node_count()) + " nodes)");
  ContingencyTable t;
  t.rows = x.community_count();
  t.cols = y.community_count();
  t.total = x.node_count();
  t.counts.assign(t.rows * t.cols, 0);
  for (NodeId v = 0; v < x.node_count(); ++v) ++t.counts[x.community_of(v) * t.cols + y.community_of(v)];
  return t;
}

/// Mutual information J(X, Y) in bits; empty cells contribute nothing.
inline double mutual_information(const Partition& x, const Partition& y) {
  const ContingencyTable t = contingency(x, y);
  if (t.total == 0) return 0.0;
  const double n = static_cast<double>(t.total);
  const auto rs = t.row_sums();
  const auto cs = t.col_sums();
  double j = 0.0;
  for (std::size_t a = 0; a < t.rows; ++a) {
    for (std::size_t b = 0; b < t.cols; ++b) {
      const std::size_t nij = t.at(a, b);
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      // P(i,j) / (P(i)P(j)) = n·n_ij / (|X_i|·|Y_j|)
      j += pij * std::log2(n * static_cast<double>(nij) /
                           (static_cast<double>(rs[a]) * static_cast<double>(cs[b])));
    }
  }
  return std::max(0.0, j);
}

/// NMI = 2J / (H(X) + H(Y)); two single-community partitions give 1.
inline double nmi(const Partition& x, const Partition& y) {
  const double j = mutual_information(x, y);
  const double h = entropy(x) + entropy(y);
  if (h == 0.0) return 1.0;
  return std::clamp(2.0 * j / h, 0.0, 1.0);
}

struct CurvePoint {
  std::size_t k = 0;
  double q = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Modularity per community count, k strictly increasing.
struct ModularityCurve {
  std::vector<CurvePoint> points;
};

/// Modularity of the dendrogram's partition at every k in
/// 2..min(k_max, final_components) that the removal sequence visits.
inline ModularityCurve modularity_sweep(const Graph& g, const Dendrogram& d, std::size_t k_max) {
  ModularityCurve curve;
  const std::size_t top = std::min(k_max, d.final_components());
  for (std::size_t k = std::max<std::size_t>(2, d.initial_components); k <= top; ++k)
    curve.points.push_back({k, modularity(g, partition_at_k(d, k))});
  return curve;
}

/// Highest point of the curve. With `include_unsplit`, the undivided graph
/// (k = 1, Q = 0) competes too, so a curve that never rises above zero
/// reports k = 1. Ties go to the smaller k.
inline CurvePoint max_modularity(const ModularityCurve& curve, bool include_unsplit = true) {
  std::optional<CurvePoint> best;
  if (include_unsplit) best = CurvePoint{1, 0.0};
  for (const auto& pt : curve.points)
    if (!best || pt.q > best->q) best = pt;
  if (!best) throw Error(ErrorCode::InsufficientCurve, "empty modularity curve");
  return *best;
}

namespace detail {

/// Piecewise-linear Q over the recorded points, held flat outside them.
inline double curve_value(const ModularityCurve& c, double k) {
  const auto& pts = c.points;
  if (k <= static_cast<double>(pts.front().k)) return pts.front().q;
  if (k >= static_cast<double>(pts.back().k)) return pts.back().q;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double k1 = static_cast<double>(pts[i].k);
    if (k <= k1) {
      const double k0 = static_cast<double>(pts[i - 1].k);
      const double t = (k - k0) / (k1 - k0);
      return pts[i - 1].q + t * (pts[i].q - pts[i - 1].q);
    }
  }
  return pts.back().q;
}

} // namespace detail

/// Lagged second difference at `k`:
///   (Q(k) − Q(k − w)) − (Q(k + w) − Q(k)),
/// i.e. how much the gain just before k exceeds the gain just after it.
inline double elbow_drop(const ModularityCurve& curve, double k, std::size_t window) {
  if (curve.points.empty()) throw Error(ErrorCode::InsufficientCurve, "empty modularity curve");
  const double w = static_cast<double>(window);
  const double q = detail::curve_value(curve, k);
  return (q - detail::curve_value(curve, k - w)) - (detail::curve_value(curve, k + w) - q);
}

/// Sliding-window elbow: the recorded k with the largest elbow_drop.
/// Ties go to the smallest k.
inline CurvePoint elbow_select(const ModularityCurve& curve, std::size_t window) {
  if (curve.points.size() < 2)
    throw Error(ErrorCode::InsufficientCurve, "elbow selection needs at least two curve points");
  if (window == 0) throw Error(ErrorCode::InvalidConfig, "elbow window must be positive");
  std::optional<double> best_drop;
  CurvePoint best;
  for (const auto& pt : curve.points) {
    const double drop = elbow_drop(curve, static_cast<double>(pt.k), window);
    if (!best_drop || drop > *best_drop + 1e-12) {
      best_drop = drop;
      best = pt;
    }
  }
  return best;
}

} // namespace commkit

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "commkit/graph.hpp"

namespace commkit {

/// Assignment of every node to exactly one community.
///
/// Ids are canonical: dense 0..count-1, numbered in order of each
/// community's smallest member. Two partitions describing the same grouping
/// therefore compare equal regardless of how the input labelled them.
class Partition {
public:
  Partition() = default;

  /// `raw` may use arbitrary community labels; they are renumbered.
  explicit Partition(std::span<const std::size_t> raw) { assign(raw); }
  explicit Partition(const std::vector<std::size_t>& raw) { assign(raw); }

  explicit Partition(const ComponentLabeling& components) {
    std::vector<std::size_t> raw(components.component.begin(), components.component.end());
    assign(raw);
  }

  static Partition single(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

  static Partition singletons(std::size_t n) {
    std::vector<std::size_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = i;
    return Partition(raw);
  }

  std::size_t node_count() const noexcept { return community_.size(); }
  std::size_t community_count() const noexcept { return count_; }
  std::uint32_t community_of(NodeId u) const { return community_.at(u); }
  std::span<const std::uint32_t> assignment() const noexcept { return community_; }

  std::vector<std::size_t> community_sizes() const {
    std::vector<std::size_t> sizes(count_, 0);
    for (auto c : community_) ++sizes[c];
    return sizes;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

private:
  void assign(std::span<const std::size_t> raw) {
    std::unordered_map<std::size_t, std::uint32_t> renumber;
    community_.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto [it, inserted] = renumber.emplace(raw[i], static_cast<std::uint32_t>(renumber.size()));
      community_[i] = it->second;
    }
    count_ = renumber.size();
  }

  std::vector<std::uint32_t> community_;
  std::size_t count_ = 0;
};

} // namespace commkit

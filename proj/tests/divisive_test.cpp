#include <gtest/gtest.h>

#include "commkit/divisive.hpp"
#include "commkit/evaluation.hpp"
#include "commkit/io.hpp"
#include "oracles.hpp"
#include "test_data.hpp"

using namespace commkit;

namespace {

NodeId id(const Graph& g, std::string_view label) { return *g.find_node(label); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no commkit::Error thrown";
  return ErrorCode::InvalidConfig;
}

RunConfig config(MetricId m, std::optional<std::size_t> k = std::nullopt) {
  RunConfig c;
  c.metric = m;
  c.target_k = k;
  return c;
}

} // namespace

TEST(RunDivisive, ToyRadicchiFirstRemoval) {
  const Graph t = oracle::toy();
  const auto d = run_divisive(t, config(MetricId::Radicchi, 2));
  ASSERT_EQ(d.removals.size(), 1u);
  EXPECT_EQ(d.removals[0].edge, make_edge(id(t, "3"), id(t, "4")));
  EXPECT_EQ(d.removals[0].score, 1.0);
  EXPECT_EQ(d.removals[0].components_after, 2u);
  EXPECT_EQ(d.stop_reason, StopReason::TargetReached);
}

TEST(RunDivisive, ToyBetweennessFirstRemoval) {
  const Graph t = oracle::toy();
  const auto d = run_divisive(t, config(MetricId::Betweenness, 2));
  ASSERT_EQ(d.removals.size(), 1u);
  EXPECT_EQ(d.removals[0].edge, make_edge(id(t, "3"), id(t, "4")));
  EXPECT_EQ(d.removals[0].score, 6.0);
}

TEST(RunDivisive, StarDeadlocksImmediately) {
  const Graph s = Graph::from_labeled_edges({{"c", "x"}, {"c", "y"}, {"c", "z"}});
  const auto d = run_divisive(s, config(MetricId::Radicchi));
  EXPECT_TRUE(d.removals.empty());
  EXPECT_EQ(d.stop_reason, StopReason::Deadlock);
  EXPECT_EQ(to_string(d.stop_reason), "DeadlockStop");
}

TEST(RunDivisive, RunsToEdgelessWithoutTarget) {
  const Graph t = oracle::toy();
  const auto d = run_divisive(t, config(MetricId::Betweenness));
  EXPECT_EQ(d.removals.size(), t.edge_count());
  EXPECT_EQ(d.final_components(), 5u);
  EXPECT_EQ(d.stop_reason, StopReason::EdgesExhausted);
}

TEST(RunDivisive, ComponentsNeverDecrease) {
  const Graph g = read_graph_file(test_data::path("karate.gml")).graph;
  for (MetricId m : all_metrics) {
    const auto d = run_divisive(g, config(m));
    std::size_t prev = d.initial_components;
    for (const auto& r : d.removals) {
      EXPECT_TRUE(r.components_after == prev || r.components_after == prev + 1) << metric_name(m);
      prev = r.components_after;
    }
  }
}

TEST(RunDivisive, NeighborhoodPolicyMatchesFull) {
  const Graph g = read_graph_file(test_data::path("karate.gml")).graph;
  for (MetricId m : all_metrics) {
    if (!is_local(m)) continue;
    RunConfig full = config(m), local = config(m);
    local.policy = RecomputePolicy::Neighborhood;
    EXPECT_EQ(run_divisive(g, full).removals, run_divisive(g, local).removals) << metric_name(m);
  }
}

TEST(RunDivisive, Errors) {
  const Graph t = oracle::toy();
  EXPECT_EQ(code_of([&] { (void)run_divisive(t, config(MetricId::JA, 6)); }), ErrorCode::InvalidConfig);
  RunConfig bad = config(MetricId::Betweenness);
  bad.policy = RecomputePolicy::Neighborhood;
  EXPECT_EQ(code_of([&] { (void)run_divisive(t, bad); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { (void)run_divisive(Graph(3, {}), config(MetricId::JA)); }), ErrorCode::InvalidConfig);
}

TEST(SelectRemoval, TieGoesToSmallestEdge) {
  const EdgeScores s = {{{0, 3}, 1.0, false}, {{1, 2}, 1.0 + 1e-12, false}, {{2, 3}, 2.0, false}};
  EXPECT_EQ(select_removal(s, Orientation::RemoveMin), 0u);
  const EdgeScores e = {{{0, 1}, 0.0, true}};
  EXPECT_FALSE(select_removal(e, Orientation::RemoveMin).has_value());
}

TEST(PartitionAtK, Examples) {
  const Graph t = oracle::toy();
  const auto d = run_divisive(t, config(MetricId::Radicchi, 2));
  EXPECT_EQ(partition_at_k(d, 1).community_count(), 1u);
  const Partition p = partition_at_k(d, 2);
  EXPECT_EQ(p, Partition(std::vector<std::size_t>{0, 0, 0, 1, 1}));
  EXPECT_EQ(code_of([&] { (void)partition_at_k(d, 3); }), ErrorCode::KNotReached);
}

TEST(PartitionAtK, KarateBetweennessFiveCommunities) {
  const Graph g = read_graph_file(test_data::path("karate.gml")).graph;
  const auto d = run_divisive(g, config(MetricId::Betweenness, 5));
  const Partition p = partition_at_k(d, 5);
  EXPECT_EQ(p.community_count(), 5u);
  EXPECT_NEAR(modularity(g, p), 0.401, 0.005);
}

TEST(PartitionAtK, HasExactlyKCommunities) {
  const Graph g = read_graph_file(test_data::path("lesmis.gml")).graph;
  const auto d = run_divisive(g, config(MetricId::SA));
  for (std::size_t k = 1; k <= d.final_components(); ++k) EXPECT_EQ(partition_at_k(d, k).community_count(), k);
}

TEST(PartitionAtK, BelowInitialComponentsIsNotReached) {
  const Graph g = Graph::from_labeled_edges({{"a", "b"}, {"b", "c"}, {"d", "e"}, {"e", "f"}, {"g", "h"}});
  const auto d = run_divisive(g, config(MetricId::Betweenness));
  EXPECT_EQ(d.initial_components, 3u);
  EXPECT_EQ(partition_at_k(d, 1).community_count(), 1u);
  EXPECT_EQ(code_of([&] { (void)partition_at_k(d, 2); }), ErrorCode::KNotReached);
  EXPECT_EQ(partition_at_k(d, 3), Partition(connected_components(g)));
}

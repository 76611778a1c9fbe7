#include "decflow/robust_core.hpp"

#include <gtest/gtest.h>

#include "decflow/oracles.hpp"
#include "decflow/testutil.hpp"

using namespace decflow;

namespace {

// Drives a DynGraph, its trivial compressed view, and a RobustCore together.
struct Harness {
  DynGraph g;
  UnitCompressed unit;
  RobustCore rc;

  Harness(DynGraph graph, std::vector<VertexId> k_init, double D, std::uint64_t seed,
          RobustCoreParams params = {}, std::vector<std::string>* trace = nullptr)
      : g(std::move(graph)),
        unit(g),
        rc(&g, std::move(k_init), D, &unit.hypergraph(), 1.0, seed, params, trace) {}

  std::vector<VertexId> delete_edge(VertexId u, VertexId v) {
    g.delete_edge(u, v);
    auto evicted = rc.on_g_edge_deleted(u, v);
    if (auto id = unit.on_delete(u, v)) {
      auto more = rc.on_hyperedge_removed(*id);
      evicted.insert(evicted.end(), more.begin(), more.end());
    }
    return evicted;
  }
};

void expect_invariants(const DynGraph& g, const RobustCore& rc,
                       const std::vector<VertexId>& k_init, double D,
                       const RobustCoreParams& params) {
  std::set<VertexId> kset(k_init.begin(), k_init.end());
  // Scattered: every evicted initial vertex sees few initial vertices within 2D.
  for (VertexId v : k_init) {
    if (rc.core().count(v)) continue;
    auto ball = g.bounded_ball({v}, 2.0 * D);
    std::size_t in_k = 0;
    for (auto& [w, d] : ball)
      if (kset.count(w)) ++in_k;
    EXPECT_LE(static_cast<double>(in_k),
              (1.0 - params.delta_scatter) * static_cast<double>(k_init.size()) + 1e-9)
        << "vertex " << v;
  }
  // Low stretch: diam(K) <= str * D per BFS oracle.
  for (VertexId u : rc.core()) {
    auto ball = g.bounded_ball({u}, params.str * D);
    for (VertexId w : rc.core()) EXPECT_TRUE(ball.count(w)) << "pair " << u << " " << w;
  }
  // Capacity budget.
  EXPECT_LE(rc.kappa().total(), rc.cap_budget() + 1e-6);
}

}  // namespace

TEST(RobustCore, K6PhaseCompletesWithFullSurvivorSet) {
  auto g = testutil::complete_graph(6);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  Harness h(g, K, 1.0, 7);
  EXPECT_FALSE(h.rc.terminated());
  EXPECT_EQ(h.rc.core().size(), 6u);
  EXPECT_EQ(h.rc.pruned_survivors().size(), 6u);
  EXPECT_EQ(h.rc.phases(), 1);
}

TEST(RobustCore, SingletonStaysPut) {
  auto g = testutil::complete_graph(4);
  Harness h(g, {2}, 1.0, 9);
  EXPECT_EQ(h.rc.core().size(), 1u);
  auto evicted = h.delete_edge(2, 3);
  EXPECT_TRUE(evicted.empty());
  EXPECT_EQ(h.rc.core().size(), 1u);
}

TEST(RobustCore, DumbbellDoublesBridgeCapacity) {
  auto g = testutil::dumbbell(5);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  std::vector<std::string> trace;
  RobustCoreParams params;
  Harness h(g, K, 2.0, 13, params, &trace);
  // The two cliques cannot host a witness without capacities growing at the
  // bottleneck, so at least one doubling step must appear in the trace.
  EXPECT_GT(h.rc.doublings(), 0);
  bool saw_doubling = false;
  for (auto& line : trace)
    if (line.rfind("double", 0) == 0) saw_doubling = true;
  EXPECT_TRUE(saw_doubling);
}

TEST(RobustCore, FarAwayDeletionIsANoOp) {
  // Core clique {1..5} plus a far island out of the 32 D lg n ball.
  auto edges = testutil::complete_graph(5).undirected_edges();
  edges.push_back({50, 51, 1.0});
  edges.push_back({51, 52, 1.0});
  auto g = DynGraph::build(edges);
  std::vector<VertexId> K{1, 2, 3, 4, 5};
  Harness h(g, K, 1.0, 17);
  auto before_kappa = h.rc.kappa().total();
  auto evicted = h.delete_edge(50, 51);
  EXPECT_TRUE(evicted.empty());
  EXPECT_EQ(h.rc.core().size(), 5u);
  EXPECT_DOUBLE_EQ(h.rc.kappa().total(), before_kappa);
}

TEST(RobustCore, FullDisconnectionEmptiesViaScattered) {
  auto g = testutil::complete_graph(6);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  RobustCoreParams params;
  Harness h(g, K, 1.0, 23, params);
  std::vector<VertexId> evicted_all;
  auto edges = h.g.undirected_edges();
  for (auto& [u, v, w] : edges) {
    auto ev = h.delete_edge(u, v);
    evicted_all.insert(evicted_all.end(), ev.begin(), ev.end());
    expect_invariants(h.g, h.rc, K, 1.0, params);
  }
  EXPECT_TRUE(h.rc.core().empty());
  EXPECT_TRUE(h.rc.terminated());
  EXPECT_EQ(evicted_all.size(), 6u);
}

TEST(RobustCore, KappaMonotoneAndBudgeted) {
  Rng rng(31);
  auto g = testutil::complete_graph(8);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  RobustCoreParams params;
  Harness h(g, K, 1.0, 31, params);
  std::map<VertexId, double> prev;
  for (auto& [v, x] : h.rc.kappa().val_z) prev[v] = h.rc.kappa().value(v);
  int steps = 0;
  while (!h.rc.terminated() && h.g.num_edges() > 0 && steps < 40) {
    auto cur = h.g.undirected_edges();
    auto [u, v, w] = cur[rng.uniform_int(0, cur.size() - 1)];
    h.delete_edge(u, v);
    ++steps;
    for (auto& [vert, x] : h.rc.kappa().val_z) {
      double now = h.rc.kappa().value(vert);
      if (prev.count(vert)) EXPECT_GE(now + 1e-12, prev[vert]) << "vertex " << vert;
      prev[vert] = now;
    }
    EXPECT_LE(h.rc.kappa().total(), h.rc.cap_budget() + 1e-6);
  }
}

// Random deletion sequences on small cores: both output properties hold
// after every update, per the BFS oracle.
TEST(RobustCore, PropertiesHoldUnderRandomDeletions) {
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    auto g = testutil::random_connected_graph(rng, 10, 22, 1.0);
    double D = 2.0;
    auto ballmap = g.bounded_ball({1}, D);
    std::vector<VertexId> K;
    for (auto& [v, d] : ballmap) K.push_back(v);
    if (K.size() < 3) continue;
    RobustCoreParams params;
    Harness h(g, K, D, 100 + trial, params);
    expect_invariants(h.g, h.rc, K, D, params);
    for (int step = 0; step < 25 && h.g.num_edges() > 0 && !h.rc.terminated(); ++step) {
      auto cur = h.g.undirected_edges();
      auto [u, v, w] = cur[rng.uniform_int(0, cur.size() - 1)];
      h.delete_edge(u, v);
      expect_invariants(h.g, h.rc, K, D, params);
    }
  }
}

TEST(RobustCore, PhaseCountStaysBounded) {
  Rng rng(51);
  auto g = testutil::complete_graph(8);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  RobustCoreParams params;
  Harness h(g, K, 1.0, 61, params);
  while (!h.rc.terminated() && h.g.num_edges() > 0) {
    auto cur = h.g.undirected_edges();
    auto [u, v, w] = cur[rng.uniform_int(0, cur.size() - 1)];
    h.delete_edge(u, v);
  }
  EXPECT_LE(h.rc.phases(), 40);
}

TEST(UnitCompressedView, TracksUnitEdges) {
  auto g = DynGraph::build({{1, 2, 1.0}, {2, 3, 2.0}, {3, 4, 1.0}});
  UnitCompressed uc(g);
  EXPECT_EQ(uc.hypergraph().edges().size(), 2u);  // the weight-2 edge is out
  EXPECT_TRUE(uc.hypergraph().adjacent(1, 2));
  EXPECT_FALSE(uc.hypergraph().adjacent(2, 3));
  auto id = uc.on_delete(1, 2);
  EXPECT_TRUE(id.has_value());
  EXPECT_FALSE(uc.hypergraph().adjacent(1, 2));
  EXPECT_FALSE(uc.on_delete(2, 3).has_value());
}

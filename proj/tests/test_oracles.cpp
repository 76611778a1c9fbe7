#include "decflow/oracles.hpp"

#include <gtest/gtest.h>

#include "decflow/testutil.hpp"

using namespace decflow;
using oracle::Rat;

TEST(Rat, Arithmetic) {
  Rat a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rat(1, 2));
  EXPECT_EQ(a - b, Rat(1, 6));
  EXPECT_EQ(a * b, Rat(1, 18));
  EXPECT_EQ(a / b, Rat(2));
  EXPECT_LT(b, a);
  EXPECT_EQ(Rat::from_double(0.75), Rat(3, 4));
}

TEST(OracleDijkstra, UnitPath) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  auto d = oracle::dijkstra(g, {1});
  EXPECT_DOUBLE_EQ(d[1], 0);
  EXPECT_DOUBLE_EQ(d[2], 1);
  EXPECT_DOUBLE_EQ(d[3], 2);
}

TEST(OracleDijkstra, WeightedTriangle) {
  auto g = DynGraph::build({{1, 2, 5}, {2, 3, 1}, {1, 3, 1}});
  auto d = oracle::dijkstra(g, {1});
  EXPECT_DOUBLE_EQ(d[2], 2);  // 1-3-2 beats direct edge
}

TEST(OracleMaxFlow, SingleBottleneck) {
  // s - v - t with u(v) = 3.
  FlowInstance inst;
  inst.g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  inst.g.set_vertex_cap(2, 3.0);
  inst.s = 1;
  inst.t = 3;
  auto r = oracle::max_flow(inst);
  EXPECT_DOUBLE_EQ(r.value, 3.0);
}

TEST(OracleMaxFlow, K4UnitInternalCaps) {
  // K4 on {1..4}, terminals 1 and 4; internal vertices 2,3 have unit caps,
  // and the direct edge 1-4 adds one more unit: exhaustively, two internal
  // vertex-disjoint paths + the direct edge give 3. To match the spec's
  // two-disjoint-paths setting, drop the direct edge.
  auto g = testutil::complete_graph(4);
  g.delete_edge(1, 4);
  FlowInstance inst;
  inst.g = g;
  inst.g.set_vertex_cap(2, 1.0);
  inst.g.set_vertex_cap(3, 1.0);
  inst.s = 1;
  inst.t = 4;
  auto r = oracle::max_flow(inst);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
}

// Menger: max flow with unit vertex capacities equals the exhaustive minimum
// vertex cut, on random graphs small enough for exhaustive search.
TEST(OracleMaxFlow, MengerOnRandomGraphs) {
  Rng rng(42);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testutil::random_graph(rng, 9, 14, 1.0);
    VertexId s = 1, t = 9;
    if (!g.has_vertex(s) || !g.has_vertex(t)) continue;
    if (g.has_edge(s, t)) continue;  // cut must separate non-adjacent terminals
    FlowInstance inst;
    inst.g = g;
    for (VertexId v : g.vertices())
      if (v != s && v != t) inst.g.set_vertex_cap(v, 1.0);
    inst.s = s;
    inst.t = t;
    auto r = oracle::max_flow(inst);
    // Exhaustive minimum vertex cut separating s from t.
    std::vector<VertexId> internal;
    for (VertexId v : g.vertices())
      if (v != s && v != t) internal.push_back(v);
    int best = static_cast<int>(internal.size()) + 1;
    int n = static_cast<int>(internal.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      int size = __builtin_popcount(mask);
      if (size >= best) continue;
      // BFS from s avoiding masked vertices.
      std::set<VertexId> blocked;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) blocked.insert(internal[i]);
      std::set<VertexId> seen{s};
      std::vector<VertexId> stack{s};
      bool reach = false;
      while (!stack.empty() && !reach) {
        VertexId v = stack.back();
        stack.pop_back();
        for (auto& [w, len] : g.neighbors(v)) {
          if (w == t) {
            reach = true;
            break;
          }
          if (!blocked.count(w) && seen.insert(w).second) stack.push_back(w);
        }
      }
      if (!reach) best = size;
    }
    EXPECT_NEAR(r.value, best, kEps) << "trial " << trial;
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(OracleMbcf, ZeroBudgetPositiveCosts) {
  FlowInstance inst;
  inst.g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  inst.g.set_vertex_cap(2, 3.0);
  inst.g.set_vertex_cost(2, 1.0);
  inst.s = 1;
  inst.t = 3;
  inst.budget = 0.0;
  auto r = oracle::mbcf(inst);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(OracleMbcf, LargeBudgetIsMaxFlow) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = testutil::random_vertex_instance(rng, 8, 12, 6, 3, 0);
    inst.budget = 1e6;
    auto mf = oracle::max_flow(inst);
    auto bc = oracle::mbcf(inst);
    EXPECT_NEAR(bc.value, mf.value, kEps) << "trial " << trial;
  }
}

// Budget-constrained optimum vs exhaustive path-based LP on a tiny instance:
// enumerate all simple s-t paths and solve the path LP by brute force over a
// grid refined around vertex capacities (exact for this instance family).
TEST(OracleMbcf, MatchesPathEnumerationTinyInstance) {
  // Two routes: 1-2-4 (cap 2, cost 1 per unit) and 1-3-4 (cap 3, cost 2/unit).
  FlowInstance inst;
  inst.g = DynGraph::build({{1, 2, 1}, {2, 4, 1}, {1, 3, 1}, {3, 4, 1}});
  inst.g.set_vertex_cap(2, 2.0);
  inst.g.set_vertex_cap(3, 3.0);
  inst.g.set_vertex_cost(2, 1.0);
  inst.g.set_vertex_cost(3, 2.0);
  inst.s = 1;
  inst.t = 4;
  // OPT(budget): send f1 <= 2 at cost 1, f2 <= 3 at cost 2; max f1+f2 s.t.
  // f1 + 2 f2 <= budget.
  for (double budget : {0.0, 1.0, 2.0, 3.0, 5.0, 8.0, 100.0}) {
    inst.budget = budget;
    double f1 = std::min(2.0, budget);
    double f2 = std::min(3.0, (budget - f1) / 2.0);
    double expect = f1 + f2;
    auto r = oracle::mbcf(inst);
    EXPECT_NEAR(r.value, expect, kEps) << "budget " << budget;
    EXPECT_LE(r.cost, budget + kEps);
  }
}

TEST(OracleSparseCut, K5HasNoSparseCut) {
  auto g = testutil::complete_graph(5);
  std::set<VertexId> X(g.vertices().begin(), g.vertices().end());
  std::map<VertexId, double> kappa;
  for (VertexId v : g.vertices()) kappa[v] = 1.0;
  auto cut = oracle::sparse_cut(g, X, kappa, 0.5);
  EXPECT_FALSE(cut.has_value());
}

TEST(OracleSparseCut, DumbbellBridgeIsMinimal) {
  auto g = testutil::dumbbell(5);
  std::set<VertexId> X(g.vertices().begin(), g.vertices().end());
  std::map<VertexId, double> kappa;
  for (VertexId v : g.vertices()) kappa[v] = 1.0;
  auto cut = oracle::sparse_cut(g, X, kappa, 1.0);
  ASSERT_TRUE(cut.has_value());
  // Optimal separator is one bridge endpoint; 4 clique vertices on one side.
  EXPECT_EQ(cut->S.size(), 1u);
  EXPECT_EQ(cut->l_side, 4);
}

TEST(OracleSparseCut, SingletonXHasNoCut) {
  auto g = testutil::complete_graph(4);
  std::map<VertexId, double> kappa;
  for (VertexId v : g.vertices()) kappa[v] = 1.0;
  auto cut = oracle::sparse_cut(g, {1}, kappa, 10.0);
  EXPECT_FALSE(cut.has_value());
}

TEST(OracleConductance, CompleteVsPath) {
  std::vector<VertexId> vs{1, 2, 3, 4, 5, 6};
  std::vector<std::tuple<VertexId, VertexId, double>> k6, path;
  for (int u = 1; u <= 6; ++u)
    for (int v = u + 1; v <= 6; ++v) k6.push_back({u, v, 1.0});
  for (int v = 1; v < 6; ++v) path.push_back({v, v + 1, 1.0});
  EXPECT_GT(oracle::min_conductance(vs, k6), 0.4);
  EXPECT_LT(oracle::min_conductance(vs, path), 0.3);
}

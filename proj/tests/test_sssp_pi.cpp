#include "decflow/sssp_pi.hpp"

#include <gtest/gtest.h>

#include "decflow/oracles.hpp"
#include "decflow/testutil.hpp"

using namespace decflow;

namespace {

std::map<SsspPi::EdgeKey, int> uniform_sigma(const DynGraph& g, int val) {
  std::map<SsspPi::EdgeKey, int> sigma;
  for (auto& [u, v, w] : g.undirected_edges()) sigma[EsTree::key(u, v)] = val;
  return sigma;
}

}  // namespace

TEST(SsspPi, SinglePathThroughWeightedVertex) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  std::map<VertexId, double> w{{1, 0.0}, {2, 3.0}, {3, 0.0}};
  SsspPi h(&g, 1, 3, w, uniform_sigma(g, 1), 0.1, 4);
  EXPECT_NEAR(h.distance(), 3.0, kEps);
  auto p = h.path();
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (SsspPi::EdgeKey{1, 2}));
  EXPECT_EQ(p[1], (SsspPi::EdgeKey{2, 3}));
  EXPECT_NEAR(h.path_weight(), 3.0, kEps);
}

TEST(SsspPi, PicksCheaperRoute) {
  // Route via 2 costs 3; via 4,5 costs 10.
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {1, 4, 1}, {4, 5, 1}, {5, 3, 1}});
  std::map<VertexId, double> w{{2, 3.0}, {4, 5.0}, {5, 5.0}};
  SsspPi h(&g, 1, 3, w, uniform_sigma(g, 1), 0.1, 4);
  EXPECT_NEAR(h.distance(), 3.0, kEps);
  auto p = h.path();
  EXPECT_EQ(p.size(), 2u);  // through vertex 2
}

TEST(SsspPi, AllZeroWeights) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  SsspPi h(&g, 1, 3, {}, uniform_sigma(g, 2), 0.1, 4);
  EXPECT_NEAR(h.distance(), 0.0, kEps);
  EXPECT_NEAR(h.path_weight(), 0.0, kEps);
  EXPECT_EQ(h.path().size(), 2u);
}

TEST(SsspPi, OffPathIncreaseKeepsPath) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {1, 4, 1}, {4, 3, 1}});
  std::map<VertexId, double> w{{2, 1.0}, {4, 5.0}};
  SsspPi h(&g, 1, 3, w, uniform_sigma(g, 1), 0.1, 4);
  auto before = h.path();
  h.increase_vertex_weight(4, 9.0);
  EXPECT_EQ(h.path(), before);
  EXPECT_NEAR(h.distance(), 1.0, kEps);
}

TEST(SsspPi, IncreasePastAlternativeSwitchesRoute) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {1, 4, 1}, {4, 3, 1}});
  std::map<VertexId, double> w{{2, 1.0}, {4, 5.0}};
  SsspPi h(&g, 1, 3, w, uniform_sigma(g, 1), 0.1, 4);
  h.increase_vertex_weight(2, 50.0);
  EXPECT_NEAR(h.distance(), 5.0, kEps);
  auto p = h.path();
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (SsspPi::EdgeKey{1, 4}));
  // A sentinel-sized increase effectively excludes the route for good.
  h.increase_vertex_weight(2, 1e12);
  EXPECT_NEAR(h.distance(), 5.0, kEps);
}

TEST(SsspPi, ThresholdQueries) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  std::map<SsspPi::EdgeKey, int> sigma{{{1, 2}, 1}, {{2, 3}, 3}, {{3, 4}, 2}};
  SsspPi h(&g, 1, 4, {{2, 1.0}, {3, 1.0}}, sigma, 0.1, 3);
  EXPECT_TRUE(h.threshold_subpath(0).empty());
  auto s2 = h.threshold_subpath(2);
  ASSERT_EQ(s2.size(), 2u);
  EXPECT_EQ(h.threshold_subpath(3).size(), 3u);
  EXPECT_EQ(h.min_path_steadiness(), 1);
}

TEST(SsspPi, AllHighSteadinessGivesEmptyBelow) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  SsspPi h(&g, 1, 3, {{2, 1.0}}, uniform_sigma(g, 4), 0.1, 4);
  EXPECT_TRUE(h.threshold_subpath(3).empty());
  EXPECT_EQ(h.threshold_subpath(4).size(), 2u);
}

TEST(SsspPi, DisconnectedQueriesError) {
  auto g = DynGraph::build({{1, 2, 1}, {3, 4, 1}});
  SsspPi h(&g, 1, 4, {}, uniform_sigma(g, 1), 0.1, 4);
  EXPECT_FALSE(h.connected());
  EXPECT_THROW(h.threshold_subpath(1), Error);
  EXPECT_THROW(h.path(), Error);
}

// Decremental runs: the path weight stays within (1+eps) of the
// vertex-weighted Dijkstra oracle after every update, the path is simple,
// and threshold queries nest.
TEST(SsspPi, OracleSandwichUnderDecrementalRuns) {
  Rng rng(111);
  for (int trial = 0; trial < 6; ++trial) {
    auto g = testutil::random_connected_graph(rng, 14, 30, 2.0);
    std::map<VertexId, double> w;
    for (VertexId v : g.vertices()) w[v] = static_cast<double>(rng.uniform_int(0, 6));
    VertexId s = 1, t = 14;
    w[s] = 0;
    w[t] = 0;
    int tau = 4;
    std::map<SsspPi::EdgeKey, int> sigma;
    for (auto& [u, v, wt] : g.undirected_edges())
      sigma[EsTree::key(u, v)] = static_cast<int>(rng.uniform_int(1, tau));
    double eps = 0.1;
    SsspPi h(&g, s, t, w, sigma, eps, tau);
    for (int step = 0; step < 30; ++step) {
      // Mix vertex-weight increases with edge deletions.
      if (rng.uniform01() < 0.5 && g.num_edges() > 0) {
        auto cur = g.undirected_edges();
        auto [u, v, wt] = cur[rng.uniform_int(0, cur.size() - 1)];
        g.delete_edge(u, v);
        h.on_delete(u, v);
      } else {
        VertexId v;
        do {
          v = static_cast<VertexId>(rng.uniform_int(1, 14));
        } while (v == s || v == t);
        w[v] += static_cast<double>(rng.uniform_int(1, 3));
        h.increase_vertex_weight(v, w[v]);
      }
      auto exact = oracle::dijkstra_vertex_weighted(g, s, w);
      if (exact[t] == kInf) {
        EXPECT_FALSE(h.connected());
        break;
      }
      ASSERT_TRUE(h.connected());
      EXPECT_NEAR(h.distance(), exact[t], 1e-7) << "step " << step;
      double pw = h.path_weight();
      EXPECT_GE(pw + 1e-7, exact[t]);
      EXPECT_LE(pw, (1.0 + eps) * exact[t] + 1e-7);
      // beta = 1: no repeated edges on the path.
      auto p = h.path();
      std::set<SsspPi::EdgeKey> seen;
      for (auto& e : p) EXPECT_TRUE(seen.insert(EsTree::key(e.first, e.second)).second);
      // Threshold nesting against the fixed path.
      std::size_t prev = 0;
      for (int j = 1; j <= tau; ++j) {
        auto sel = h.threshold_subpath(j);
        EXPECT_GE(sel.size(), prev);
        prev = sel.size();
        for (auto& e : sel) EXPECT_NE(std::find(p.begin(), p.end(), e), p.end());
      }
      EXPECT_EQ(prev, p.size());
    }
  }
}

#include "decflow/es_tree.hpp"

#include <gtest/gtest.h>

#include "decflow/oracles.hpp"
#include "decflow/testutil.hpp"

using namespace decflow;

namespace {

std::map<VertexId, double> bounded_oracle(const DynGraph& g, const std::vector<VertexId>& src,
                                          double d) {
  auto exact = oracle::dijkstra(g, src);
  std::map<VertexId, double> out;
  for (auto& [v, dist] : exact)
    if (dist <= d + kEps) out[v] = dist;
  return out;
}

void expect_matches_oracle(const DynGraph& g, const EsTree& t, const std::vector<VertexId>& src) {
  auto want = bounded_oracle(g, src, t.depth());
  for (VertexId v : g.vertices()) {
    if (want.count(v)) {
      ASSERT_TRUE(t.in_ball(v)) << "vertex " << v << " missing";
      EXPECT_NEAR(t.level(v), want[v], kEps) << "vertex " << v;
    } else {
      EXPECT_FALSE(t.in_ball(v)) << "vertex " << v << " should be outside";
    }
  }
}

// Path consistency: the tree path to every reachable vertex is simple and
// its weight equals the level.
void expect_path_consistency(const DynGraph& g, const EsTree& t) {
  for (auto& [v, lev] : t.ball()) {
    auto path = t.tree_path(v);
    double w = 0;
    std::set<VertexId> seen;
    VertexId prev = -1;
    for (auto& [a, b] : path) {
      if (prev != -1) EXPECT_EQ(a, prev);
      w += g.edge_weight(a, b);
      EXPECT_TRUE(seen.insert(b).second) << "repeated vertex " << b;
      prev = b;
    }
    EXPECT_NEAR(w, lev, kEps * std::max(1.0, lev)) << "vertex " << v;
  }
}

}  // namespace

TEST(EsTree, InitPath) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  EsTree t(&g, {1}, 10.0);
  EXPECT_DOUBLE_EQ(t.level(1), 0);
  EXPECT_DOUBLE_EQ(t.level(2), 1);
  EXPECT_DOUBLE_EQ(t.level(3), 2);
}

TEST(EsTree, DepthCutoff) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  EsTree t(&g, {1}, 1.0);
  EXPECT_EQ(t.level(3), kInf);
  EXPECT_FALSE(t.in_ball(3));
}

TEST(EsTree, InitMatchesOracleOnRandomGraphs) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testutil::random_graph(rng, 30, 60, 5.0);
    double d = rng.uniform_int(2, 20);
    EsTree t(&g, {1}, d);
    expect_matches_oracle(g, t, {1});
  }
}

TEST(EsTree, DeleteTreeEdgeOnPath) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}});
  EsTree t(&g, {1}, 10.0);
  g.delete_edge(1, 2);
  t.on_delete(1, 2);
  EXPECT_EQ(t.level(2), kInf);
  EXPECT_EQ(t.level(3), kInf);
}

TEST(EsTree, DeleteNonTreeEdgeKeepsLevels) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 1, 1}});
  EsTree t(&g, {1}, 10.0);
  // 2-3 is not on any shortest path tree edge from 1 (levels 0,1,2,1).
  g.delete_edge(2, 3);
  t.on_delete(2, 3);
  EXPECT_DOUBLE_EQ(t.level(2), 1);
  EXPECT_DOUBLE_EQ(t.level(3), 2);
  EXPECT_DOUBLE_EQ(t.level(4), 1);
}

TEST(EsTree, RandomDeletionSequenceMatchesOracle) {
  Rng rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    auto g = testutil::random_connected_graph(rng, 20, 45, 4.0);
    double d = rng.uniform_int(3, 25);
    EsTree t(&g, {1}, d);
    for (int step = 0; step < 50 && g.num_edges() > 0; ++step) {
      auto edges = g.undirected_edges();
      auto [u, v, w] = edges[rng.uniform_int(0, edges.size() - 1)];
      if (rng.uniform01() < 0.7) {
        g.delete_edge(u, v);
        t.on_delete(u, v);
      } else {
        g.increase_weight(u, v, w + rng.uniform_int(1, 3));
        t.on_increase(u, v);
      }
      expect_matches_oracle(g, t, {1});
      expect_path_consistency(g, t);
    }
  }
}

TEST(EsTree, LevelsNeverDecrease) {
  Rng rng(31);
  auto g = testutil::random_connected_graph(rng, 25, 50, 4.0);
  EsTree t(&g, {1, 2}, 30.0);
  std::map<VertexId, double> prev;
  for (VertexId v : g.vertices()) prev[v] = t.level(v);
  for (int step = 0; step < 60 && g.num_edges() > 0; ++step) {
    auto edges = g.undirected_edges();
    auto [u, v, w] = edges[rng.uniform_int(0, edges.size() - 1)];
    g.delete_edge(u, v);
    t.on_delete(u, v);
    for (VertexId x : g.vertices()) {
      EXPECT_GE(t.level(x) + kEps, prev[x]) << "vertex " << x;
      prev[x] = t.level(x);
    }
  }
}

TEST(EsTree, MultiSourceViaDummyRootAndSourceRemoval) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  EsTree t(&g, {1, 4}, 10.0);
  EXPECT_DOUBLE_EQ(t.level(2), 1);
  EXPECT_DOUBLE_EQ(t.level(3), 1);
  t.remove_source(4);
  EXPECT_DOUBLE_EQ(t.level(3), 2);
  EXPECT_DOUBLE_EQ(t.level(4), 3);
  auto exact = oracle::dijkstra(g, {1});
  for (VertexId v : g.vertices()) EXPECT_NEAR(t.level(v), exact[v], kEps);
}

TEST(EsTree, ThresholdSubpathEmptyFast) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  std::map<EsTree::EdgeKey, int> sigma;
  for (auto& [u, v, w] : g.undirected_edges()) sigma[EsTree::key(u, v)] = 5;
  EsTree t(&g, {1}, 10.0, &sigma);
  EXPECT_TRUE(t.threshold_subpath(4, 4).empty());
  EXPECT_EQ(t.threshold_subpath(4, 5).size(), 3u);
}

TEST(EsTree, ThresholdSubpathMixed) {
  auto g = DynGraph::build({{1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  std::map<EsTree::EdgeKey, int> sigma{
      {{1, 2}, 1}, {{2, 3}, 3}, {{3, 4}, 3}};
  EsTree t(&g, {1}, 10.0, &sigma);
  auto sel = t.threshold_subpath(4, 2);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0], (EsTree::EdgeKey{1, 2}));
  EXPECT_THROW(t.threshold_subpath(99, 1), Error);
}

// Threshold nesting: sigma_{<=j1} is a sub-multiset of sigma_{<=j2} for
// j1 <= j2, and both of the full path.
TEST(EsTree, ThresholdNesting) {
  Rng rng(47);
  auto g = testutil::random_connected_graph(rng, 15, 30, 3.0);
  std::map<EsTree::EdgeKey, int> sigma;
  for (auto& [u, v, w] : g.undirected_edges())
    sigma[EsTree::key(u, v)] = static_cast<int>(rng.uniform_int(1, 4));
  EsTree t(&g, {1}, 50.0, &sigma);
  for (VertexId v : g.vertices()) {
    if (!t.in_ball(v)) continue;
    auto full = t.tree_path(v);
    std::size_t prev = 0;
    for (int j = 1; j <= 4; ++j) {
      auto sel = t.threshold_subpath(v, j);
      EXPECT_GE(sel.size(), prev);
      EXPECT_LE(sel.size(), full.size());
      for (auto& e : sel)
        EXPECT_NE(std::find(full.begin(), full.end(), e), full.end());
      prev = sel.size();
    }
  }
}

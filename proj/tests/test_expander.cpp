#include "decflow/expander.hpp"

#include <gtest/gtest.h>

#include "decflow/oracles.hpp"
#include "decflow/testutil.hpp"

using namespace decflow;

namespace {

Hypergraph from_graph(const DynGraph& g) {
  Hypergraph h;
  for (VertexId v : g.vertices()) h.add_vertex(v);
  for (auto& [u, v, w] : g.undirected_edges()) h.add_edge({u, v});
  return h;
}

CapacityFn uniform_kappa(const DynGraph& g, double val, std::int64_t z = 4) {
  CapacityFn k;
  k.z = z;
  for (VertexId v : g.vertices()) k.set(v, val);
  return k;
}

void expect_congestion_at_most(const std::vector<EmbPath>& paths, const CapacityFn& kappa,
                               double c) {
  std::map<VertexId, double> load;
  for (auto& p : paths)
    for (VertexId v : p.vertices) load[v] += static_cast<double>(p.val_z) / kappa.z;
  for (auto& [v, x] : load) EXPECT_LE(x, c * kappa.value(v) + 1e-9) << "vertex " << v;
}

}  // namespace

TEST(CutPlayer, TwoVerticesForcedSplit) {
  Rng rng(1);
  auto [A, B] = cut_player_round({1, 2}, {}, rng);
  EXPECT_EQ(A.size(), 1u);
  EXPECT_EQ(B.size(), 1u);
}

TEST(CutPlayer, FourIsolatedVertices) {
  Rng rng(2);
  auto [A, B] = cut_player_round({1, 2, 3, 4}, {}, rng);
  EXPECT_EQ(A.size(), 2u);
  EXPECT_EQ(B.size(), 2u);
}

TEST(CutPlayer, SizesAlwaysNearHalf) {
  Rng rng(3);
  for (int n : {2, 3, 5, 8, 13}) {
    std::vector<VertexId> vs;
    for (int i = 1; i <= n; ++i) vs.push_back(i);
    auto [A, B] = cut_player_round(vs, {}, rng);
    EXPECT_LE(A.size(), B.size());
    EXPECT_GE(static_cast<int>(A.size()), n / 2 - 1);
    EXPECT_GE(static_cast<int>(B.size()), n / 2 - 1);
  }
}

// After R rounds with exact matchings on K8 terminals, the union of the
// matchings should have min cut at least phi * min-degree.
TEST(CutPlayer, MatchingUnionExpandsOnK8) {
  Rng rng(11);
  auto g = testutil::complete_graph(8);
  auto h = from_graph(g);
  auto kappa = uniform_kappa(g, 2.0);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  int rounds = static_cast<int>(std::ceil(4 * std::log2(8)));
  std::vector<std::tuple<VertexId, VertexId, double>> acc;
  for (int r = 0; r < rounds; ++r) {
    auto [A, B] = cut_player_round(K, acc, rng);
    auto res = embed_matching(h, A, B, kappa, 0.0);
    ASSERT_FALSE(res.cut.has_value());
    EXPECT_NEAR(res.matching_value, static_cast<double>(A.size()), 1e-9);
    for (auto& p : res.paths)
      acc.push_back({p.a, p.b, static_cast<double>(p.val_z) / kappa.z});
  }
  std::map<VertexId, double> deg;
  for (auto& [u, v, w] : acc) {
    deg[u] += w;
    deg[v] += w;
  }
  double mind = kInf;
  for (auto& [v, d] : deg) mind = std::min(mind, d);
  double phi = 1.0 / 20.0;
  EXPECT_GE(oracle::min_conductance(K, acc) * mind, phi * mind);
}

TEST(EmbedMatching, PerfectMatchingOnK44) {
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int a = 1; a <= 4; ++a)
    for (int b = 5; b <= 8; ++b) edges.push_back({a, b, 1.0});
  auto g = DynGraph::build(edges);
  auto h = from_graph(g);
  auto kappa = uniform_kappa(g, 2.0);
  auto res = embed_matching(h, {1, 2, 3, 4}, {5, 6, 7, 8}, kappa, 0.0);
  ASSERT_FALSE(res.cut.has_value());
  EXPECT_NEAR(res.matching_value, 4.0, 1e-9);
  expect_congestion_at_most(res.paths, kappa, 1.0);
  for (auto& p : res.paths) {
    EXPECT_LE(p.a, 4);
    EXPECT_GE(p.b, 5);
    std::set<VertexId> seen(p.vertices.begin(), p.vertices.end());
    EXPECT_EQ(seen.size(), p.vertices.size());
  }
}

TEST(EmbedMatching, CutThroughSingleSeparator) {
  // A = {1..4} fans into 10; 10 connects to B = {5..8}; kappa(10) = 2 caps
  // the crossing flow, so a sparse cut with S = {10} must come back.
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int a = 1; a <= 4; ++a) edges.push_back({a, 10, 1.0});
  for (int b = 5; b <= 8; ++b) edges.push_back({10, b, 1.0});
  auto g = DynGraph::build(edges);
  auto h = from_graph(g);
  auto kappa = uniform_kappa(g, 2.0);
  auto res = embed_matching(h, {1, 2, 3, 4}, {5, 6, 7, 8}, kappa, 0.1);
  ASSERT_TRUE(res.cut.has_value());
  const auto& cut = *res.cut;
  EXPECT_EQ(cut.S, std::vector<VertexId>{10});
  std::set<VertexId> A{1, 2, 3, 4}, B{5, 6, 7, 8};
  std::size_t la = 0, rb = 0;
  for (VertexId v : cut.L) la += A.count(v);
  for (VertexId v : cut.R) rb += B.count(v);
  double mn = static_cast<double>(std::min(la, rb));
  EXPECT_GE(mn, 0.1 * 4);
  EXPECT_LE(cut.kappa_s, 2 * mn + 1e-9);
  for (VertexId l : cut.L)
    for (VertexId r : cut.R) EXPECT_FALSE(h.adjacent(l, r));
}

TEST(EmbedMatching, EpsZeroMatchesIffFlowFull) {
  Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    auto g = testutil::random_connected_graph(rng, 10, 18, 1.0);
    auto h = from_graph(g);
    auto kappa = uniform_kappa(g, 2.0);
    std::vector<VertexId> vs(g.vertices().begin(), g.vertices().end());
    std::vector<VertexId> A(vs.begin(), vs.begin() + 4);
    std::vector<VertexId> B(vs.begin() + 4, vs.begin() + 8);
    FlowInstance probe;
    VertexId ss = 1000, tt = 1001;
    auto edges = g.undirected_edges();
    for (VertexId a : A) edges.push_back({ss, a, 1.0});
    for (VertexId b : B) edges.push_back({tt, b, 1.0});
    probe.g = DynGraph::build(edges);
    for (VertexId v : g.vertices()) probe.g.set_vertex_cap(v, kappa.value(v));
    probe.s = ss;
    probe.t = tt;
    for (VertexId a : A) probe.edge_cap[FlowInstance::key(ss, a)] = 1.0;
    for (VertexId b : B) probe.edge_cap[FlowInstance::key(tt, b)] = 1.0;
    auto mf = oracle::max_flow(probe);
    auto res = embed_matching(h, A, B, kappa, 0.0);
    if (!res.cut) {
      EXPECT_NEAR(res.matching_value, static_cast<double>(A.size()), 1e-9);
      EXPECT_GE(mf.value + 1e-9, static_cast<double>(A.size()));
      expect_congestion_at_most(res.paths, kappa, 1.0);
    } else {
      EXPECT_LT(mf.value, static_cast<double>(A.size()) - 1e-9);
    }
  }
}

TEST(EmbedWitness, WitnessOnK8IsExpander) {
  Rng rng(31);
  auto g = testutil::complete_graph(8);
  auto h = from_graph(g);
  auto kappa = uniform_kappa(g, 2.0);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  auto res = embed_witness(h, K, kappa, rng);
  ASSERT_TRUE(res.witness.has_value());
  const auto& w = *res.witness;
  EXPECT_FALSE(w.degraded);
  EXPECT_GE(w.vertices.size(), static_cast<std::size_t>((1.0 - 0.34) * 8));
  double cond = oracle::min_conductance(w.vertices, w.weighted_edges());
  EXPECT_GE(cond, 0.05 / 6.0);
  double total = 0;
  for (auto& [a, b, wt] : w.weighted_edges()) total += wt;
  EXPECT_LE(total, 4.0 * 8 * std::log2(8));
  std::map<VertexId, double> load;
  for (auto& p : w.paths)
    for (VertexId v : p.vertices) load[v] += static_cast<double>(p.val_z) / kappa.z;
  for (auto& [v, x] : load) EXPECT_LE(x, 4.0 * kappa.value(v) * std::log2(8) + 1e-9);
}

TEST(EmbedWitness, DumbbellReturnsBalancedSparseCut) {
  Rng rng(37);
  auto g = testutil::dumbbell(5);
  auto h = from_graph(g);
  auto kappa = uniform_kappa(g, 2.0);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  WitnessParams params;
  params.eps_wit = 0.1;
  auto res = embed_witness(h, K, kappa, rng, params);
  ASSERT_TRUE(res.cut.has_value());
  const auto& cut = *res.cut;
  std::set<VertexId> kset(K.begin(), K.end());
  std::size_t lk = 0, rk = 0;
  for (VertexId v : cut.L) lk += kset.count(v);
  for (VertexId v : cut.R) rk += kset.count(v);
  EXPECT_LE(lk, rk);
  EXPECT_GE(static_cast<double>(lk) + 1e-9, params.eps_wit * K.size());
  EXPECT_LE(cut.kappa_s, 2.0 * lk + 1e-9);
  for (VertexId l : cut.L)
    for (VertexId r : cut.R) EXPECT_FALSE(h.adjacent(l, r));
}

TEST(EmbedWitness, SingletonShortCircuits) {
  Rng rng(3);
  auto g = testutil::complete_graph(3);
  auto h = from_graph(g);
  auto kappa = uniform_kappa(g, 2.0);
  auto res = embed_witness(h, {1}, kappa, rng);
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_TRUE(res.witness->paths.empty());
}

TEST(EmbedWitness, ContractsOnSeededRandomGraphs) {
  Rng rng(41);
  int cut_branch = 0, witness_branch = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testutil::random_connected_graph(rng, 10, 16, 1.0);
    auto h = from_graph(g);
    auto kappa = uniform_kappa(g, 2.0);
    std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
    WitnessParams params;
    auto res = embed_witness(h, K, kappa, rng, params);
    std::set<VertexId> kset(K.begin(), K.end());
    if (res.cut) {
      ++cut_branch;
      std::size_t lk = 0, rk = 0;
      for (VertexId v : res.cut->L) lk += kset.count(v);
      for (VertexId v : res.cut->R) rk += kset.count(v);
      EXPECT_LE(lk, rk);
      EXPECT_GE(static_cast<double>(lk) + 1e-9, params.eps_wit * K.size()) << "trial " << trial;
      EXPECT_LE(res.cut->kappa_s, 2.0 * lk + 1e-9) << "trial " << trial;
      for (VertexId l : res.cut->L)
        for (VertexId r : res.cut->R) EXPECT_FALSE(h.adjacent(l, r));
    } else {
      ++witness_branch;
      const auto& w = *res.witness;
      std::map<VertexId, double> load;
      for (auto& p : w.paths) {
        for (VertexId v : p.vertices) load[v] += static_cast<double>(p.val_z) / kappa.z;
        std::set<VertexId> seen(p.vertices.begin(), p.vertices.end());
        EXPECT_EQ(seen.size(), p.vertices.size());
      }
      int rounds = static_cast<int>(std::ceil(4 * std::log2(K.size())));
      for (auto& [v, x] : load)
        EXPECT_LE(x, rounds * kappa.value(v) + 1e-9) << "trial " << trial;
      if (w.vertices.size() >= 2 && w.vertices.size() <= 12 && !w.degraded) {
        double cond = oracle::min_conductance(w.vertices, w.weighted_edges());
        EXPECT_GE(cond, params.phi / 6.0) << "trial " << trial;
      }
    }
  }
  EXPECT_GT(witness_branch, 0);
}

TEST(Prune, NoDeletionsKeepsEverything) {
  std::vector<VertexId> vs{1, 2, 3, 4, 5, 6};
  std::vector<std::tuple<VertexId, VertexId, std::int64_t>> edges;
  for (int u = 1; u <= 6; ++u)
    for (int v = u + 1; v <= 6; ++v) edges.push_back({u, v, 1});
  Pruner p(vs, edges, 0.2);
  EXPECT_EQ(p.X().size(), 6u);
  EXPECT_DOUBLE_EQ(p.vol_pruned(), 0.0);
}

TEST(Prune, IsolatingAVertexPeelsIt) {
  std::vector<VertexId> vs{1, 2, 3, 4, 5, 6};
  std::vector<std::tuple<VertexId, VertexId, std::int64_t>> edges;
  for (int u = 1; u <= 6; ++u)
    for (int v = u + 1; v <= 6; ++v) edges.push_back({u, v, 1});
  double phi = 0.2;
  Pruner p(vs, edges, phi);
  int i = 0;
  for (int v = 2; v <= 6; ++v) {
    p.on_delete(1, v);
    ++i;
    EXPECT_LE(p.vol_pruned(), 8.0 * i / phi + 1e-9);
  }
  EXPECT_FALSE(p.X().count(1));
  EXPECT_EQ(p.X().size(), 5u);
}

TEST(Prune, FewDeletionsKeepHalfOnK8) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<VertexId> vs;
    std::vector<std::tuple<VertexId, VertexId, std::int64_t>> edges;
    for (int v = 1; v <= 8; ++v) vs.push_back(v);
    for (int u = 1; u <= 8; ++u)
      for (int v = u + 1; v <= 8; ++v) edges.push_back({u, v, 1});
    double phi = 0.25;
    Pruner p(vs, edges, phi);
    int budget = static_cast<int>(phi * 8 / 16.0) + 1;
    std::set<std::pair<int, int>> deleted;
    for (int i = 0; i < budget; ++i) {
      int u, v;
      do {
        u = static_cast<int>(rng.uniform_int(1, 8));
        v = static_cast<int>(rng.uniform_int(1, 8));
      } while (u == v || deleted.count({std::min(u, v), std::max(u, v)}));
      deleted.insert({std::min(u, v), std::max(u, v)});
      p.on_delete(u, v);
      EXPECT_GE(p.X().size(), 4u) << "trial " << trial;
      EXPECT_LE(p.vol_pruned(), 8.0 * p.deletions() / phi + 1e-9);
    }
  }
}

TEST(CertifyCore, K5IsACore) {
  auto g = testutil::complete_graph(5);
  std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
  auto r = certify_core(g, K, 1.0, 0.5);
  EXPECT_FALSE(r.scattered);
  EXPECT_EQ(r.core.size(), 5u);
}

TEST(CertifyCore, TwoDistantCliquesAreScattered) {
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int u = 1; u <= 5; ++u)
    for (int v = u + 1; v <= 5; ++v) edges.push_back({u, v, 1.0});
  for (int u = 6; u <= 10; ++u)
    for (int v = u + 1; v <= 10; ++v) edges.push_back({u, v, 1.0});
  int prev = 5;
  for (int i = 0; i < 100; ++i) {
    edges.push_back({prev, 100 + i, 1.0});
    prev = 100 + i;
  }
  edges.push_back({prev, 6, 1.0});
  auto g = DynGraph::build(edges);
  std::vector<VertexId> K;
  for (int v = 1; v <= 10; ++v) K.push_back(v);
  auto r = certify_core(g, K, 1.0, 0.5);
  EXPECT_TRUE(r.scattered);
  for (VertexId v : K) {
    auto ball = g.bounded_ball({v}, 1.0);
    int in_k = 0;
    for (auto& [w, d] : ball)
      if (w <= 10) ++in_k;
    EXPECT_LE(in_k, (1.0 - 0.5 / 2) * 10);
  }
}

TEST(CertifyCore, SingletonIsACore) {
  auto g = testutil::complete_graph(3);
  auto r = certify_core(g, {2}, 1.0, 0.5);
  EXPECT_FALSE(r.scattered);
  EXPECT_EQ(r.core, std::vector<VertexId>{2});
}

// Whichever branch returns is verified by brute-force ball enumeration.
TEST(CertifyCore, DichotomyOnSeededGraphs) {
  Rng rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = testutil::random_graph(rng, 18, 26, 3.0);
    std::vector<VertexId> K;
    for (VertexId v : g.vertices())
      if (rng.uniform01() < 0.5) K.push_back(v);
    if (K.size() < 2) continue;
    double d = rng.uniform_int(1, 4);
    double eps = 0.5;
    auto r = certify_core(g, K, d, eps);
    std::set<VertexId> kset(K.begin(), K.end());
    double lgn = std::log2(static_cast<double>(g.num_vertices()));
    if (r.scattered) {
      for (VertexId v : K) {
        auto ball = g.bounded_ball({v}, d);
        int in_k = 0;
        for (auto& [w, dd] : ball)
          if (kset.count(w)) ++in_k;
        EXPECT_LE(static_cast<double>(in_k), (1.0 - eps / 2) * K.size() + 1e-9)
            << "trial " << trial << " v " << v;
      }
    } else {
      EXPECT_GE(static_cast<double>(r.core.size()), (1.0 - eps) * K.size() - 1e-9)
          << "trial " << trial;
      for (VertexId u : r.core) {
        auto ball = g.bounded_ball({u}, 16.0 * d * lgn);
        for (VertexId w : r.core)
          EXPECT_TRUE(ball.count(w)) << "trial " << trial << " pair " << u << "," << w;
      }
    }
  }
}

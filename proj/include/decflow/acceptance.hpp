#pragma once

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "decflow/emulator.hpp"
#include "decflow/oracles.hpp"
#include "decflow/pipeline.hpp"
#include "decflow/testutil.hpp"

// The acceptance suites: every headline property checked against the
// brute-force oracles, one outcome per suite. Trial counts are parameters
// so the CLI can run scaled-down versions; the defaults match the shipped
// acceptance test binary.

namespace decflow::accept {

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string ratio(int ok, int total) {
  std::ostringstream os;
  os << ok << "/" << total;
  return os.str();
}

}  // namespace detail

// 1. SSSP sandwich: layered estimates obey dist <= est <= (1+eps_final) dist
// against the Dijkstra oracle after every update; bounded total runtime.
inline Outcome sssp_sandwich(std::uint64_t seed = 1, int pairs = 200, int max_updates = 500,
                             double time_budget_s = 300.0) {
  Outcome out{"sssp-sandwich"};
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  long long checks = 0, violations = 0;
  for (int pair = 0; pair < pairs; ++pair) {
    int n = static_cast<int>(rng.uniform_int(20, 200));
    int m = static_cast<int>(rng.uniform_int(n, 5 * n / 2));
    auto g = testutil::random_connected_graph(rng, n, m, 4.0);
    LayeredParams params;
    params.levels = 2;
    params.eps = 0.1;
    params.seed = seed * 1000003 + pair;
    LayeredSssp sssp(&g, {1}, params);
    double bound = 1.0 + sssp.eps_final();
    int updates = static_cast<int>(
        std::min<std::int64_t>(max_updates, static_cast<std::int64_t>(g.num_edges()) - 1));
    for (int step = 0; step < updates && g.num_edges() > 0; ++step) {
      auto edges = g.undirected_edges();
      auto [u, v, w] = edges[rng.uniform_int(0, edges.size() - 1)];
      sssp.apply({UpdateOp::kDelete, u, v, 0.0});
      auto exact = oracle::dijkstra(g, {1});
      for (VertexId x : g.vertices()) {
        if (!sssp.emulator().v_init().count(x)) continue;
        if (exact[x] == kInf) continue;
        double est = sssp.estimate(x);
        ++checks;
        if (est + 1e-7 < exact[x] || est > bound * exact[x] + 1e-7) ++violations;
      }
    }
  }
  double secs =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count() /
      1000.0;
  std::ostringstream os;
  os << pairs << " pairs, " << checks << " estimate checks, " << violations << " violations, "
     << fmt_num(secs) << "s";
  out.detail = os.str();
  out.pass = violations == 0 && secs < time_budget_s;
  return out;
}

// 2. ES-tree exactness: levels equal bounded Dijkstra after every update.
inline Outcome es_exactness(std::uint64_t seed = 2, int runs = 500) {
  Outcome out{"es-exactness"};
  Rng rng(seed);
  long long checks = 0, mism = 0;
  for (int run = 0; run < runs; ++run) {
    int n = static_cast<int>(rng.uniform_int(8, 40));
    auto g = testutil::random_graph(rng, n, 2 * n, 5.0);
    double d = static_cast<double>(rng.uniform_int(2, 30));
    EsTree t(&g, {1}, d);
    int steps = static_cast<int>(rng.uniform_int(5, 25));
    for (int step = 0; step < steps && g.num_edges() > 0; ++step) {
      auto edges = g.undirected_edges();
      auto [u, v, w] = edges[rng.uniform_int(0, edges.size() - 1)];
      if (rng.uniform01() < 0.8) {
        g.delete_edge(u, v);
        t.on_delete(u, v);
      } else {
        g.increase_weight(u, v, w + rng.uniform_int(1, 3));
        t.on_increase(u, v);
      }
      auto exact = oracle::dijkstra(g, {1});
      for (VertexId x : g.vertices()) {
        ++checks;
        double want = exact[x] <= d + kEps ? exact[x] : kInf;
        double got = t.level(x);
        bool same = (want == kInf && got == kInf) ||
                    (want != kInf && got != kInf && std::abs(want - got) <= 1e-9);
        if (!same) ++mism;
      }
    }
  }
  out.detail = std::to_string(runs) + " runs, " + std::to_string(checks) + " checks, " +
               std::to_string(mism) + " mismatches";
  out.pass = mism == 0;
  return out;
}

// 3. RobustCore: Scattered + low stretch per BFS oracle after every update,
// kappa monotone and within budget.
inline Outcome robust_core_properties(std::uint64_t seed = 3, int runs = 100) {
  Outcome out{"robust-core"};
  Rng rng(seed);
  int violations = 0, done = 0;
  for (int run = 0; run < runs; ++run) {
    auto g = testutil::random_connected_graph(rng, static_cast<int>(rng.uniform_int(10, 24)),
                                              static_cast<int>(rng.uniform_int(20, 40)), 1.0);
    double big_d = static_cast<double>(rng.uniform_int(1, 3));
    auto ball = g.bounded_ball({1}, big_d);
    std::vector<VertexId> k_init;
    for (auto& [v, dd] : ball) k_init.push_back(v);
    if (k_init.size() < 6 || k_init.size() > 20) continue;
    ++done;
    RobustCoreParams params;
    UnitCompressed unit(g);
    RobustCore rc(&g, k_init, big_d, &unit.hypergraph(), 1.0, seed * 31 + run, params);
    std::set<VertexId> kset(k_init.begin(), k_init.end());
    std::map<VertexId, double> prev_kappa;
    auto check = [&]() {
      for (VertexId v : k_init) {
        if (rc.core().count(v)) continue;
        auto b = g.bounded_ball({v}, 2.0 * big_d);
        std::size_t in_k = 0;
        for (auto& [w, dd] : b)
          if (kset.count(w)) ++in_k;
        if (static_cast<double>(in_k) >
            (1.0 - params.delta_scatter) * static_cast<double>(k_init.size()) + 1e-9)
          ++violations;
      }
      for (VertexId u : rc.core()) {
        auto b = g.bounded_ball({u}, params.str * big_d);
        for (VertexId w : rc.core())
          if (!b.count(w)) ++violations;
      }
      for (auto& [v, x] : rc.kappa().val_z) {
        double now = rc.kappa().value(v);
        auto it = prev_kappa.find(v);
        if (it != prev_kappa.end() && now + 1e-12 < it->second) ++violations;
        prev_kappa[v] = now;
      }
      if (rc.kappa().total() > rc.cap_budget() + 1e-6) ++violations;
    };
    check();
    int steps = static_cast<int>(rng.uniform_int(10, 30));
    for (int step = 0; step < steps && g.num_edges() > 0 && !rc.terminated(); ++step) {
      auto edges = g.undirected_edges();
      auto [u, v, w] = edges[rng.uniform_int(0, edges.size() - 1)];
      g.delete_edge(u, v);
      rc.on_g_edge_deleted(u, v);
      if (auto id = unit.on_delete(u, v)) rc.on_hyperedge_removed(*id);
      check();
    }
  }
  out.detail = std::to_string(done) + " runs, " + std::to_string(violations) + " violations";
  out.pass = violations == 0 && done >= runs / 2;
  return out;
}

// 4. CertifyCore dichotomy, verified by brute-force ball enumeration.
inline Outcome certify_core_dichotomy(std::uint64_t seed = 4, int runs = 200) {
  Outcome out{"certify-core"};
  Rng rng(seed);
  int violations = 0, done = 0;
  for (int run = 0; run < runs; ++run) {
    int n = static_cast<int>(rng.uniform_int(8, 50));
    auto g = testutil::random_graph(rng, n, 2 * n, 3.0);
    std::vector<VertexId> K;
    for (VertexId v : g.vertices())
      if (rng.uniform01() < 0.5) K.push_back(v);
    if (K.size() < 2) continue;
    ++done;
    double d = static_cast<double>(rng.uniform_int(1, 4));
    double eps = rng.uniform(0.2, 0.8);
    auto r = certify_core(g, K, d, eps);
    std::set<VertexId> kset(K.begin(), K.end());
    double lgn = std::log2(static_cast<double>(g.num_vertices()));
    if (r.scattered) {
      for (VertexId v : K) {
        auto ball = g.bounded_ball({v}, d);
        std::size_t in_k = 0;
        for (auto& [w, dd] : ball)
          if (kset.count(w)) ++in_k;
        if (static_cast<double>(in_k) > (1.0 - eps / 2) * K.size() + 1e-9) ++violations;
      }
    } else {
      if (static_cast<double>(r.core.size()) < (1.0 - eps) * K.size() - 1e-9) ++violations;
      for (VertexId u : r.core) {
        auto ball = g.bounded_ball({u}, 16.0 * d * lgn);
        for (VertexId w : r.core)
          if (!ball.count(w)) ++violations;
      }
    }
  }
  out.detail = std::to_string(done) + " runs, " + std::to_string(violations) + " violations";
  out.pass = violations == 0 && done >= runs / 2;
  return out;
}

// 5. EmbedWitness contracts: exact cut inequalities; witness congestion and
// weight by accumulation; exhaustive expansion up to 12 witness vertices.
inline Outcome embed_witness_contracts(std::uint64_t seed = 5, int runs = 100) {
  Outcome out{"embed-witness"};
  Rng rng(seed);
  int violations = 0, cuts = 0, witnesses = 0;
  for (int run = 0; run < runs; ++run) {
    int n = static_cast<int>(rng.uniform_int(6, 14));
    auto g = testutil::random_connected_graph(rng, n, n + static_cast<int>(rng.uniform_int(0, n)),
                                              1.0);
    Hypergraph h;
    for (VertexId v : g.vertices()) h.add_vertex(v);
    for (auto& [u, v, w] : g.undirected_edges()) h.add_edge({u, v});
    CapacityFn kappa;
    kappa.z = 4;
    for (VertexId v : g.vertices()) kappa.set(v, 2.0);
    std::vector<VertexId> K(g.vertices().begin(), g.vertices().end());
    WitnessParams params;
    Rng local(seed * 77 + run);
    auto res = embed_witness(h, K, kappa, local, params);
    std::set<VertexId> kset(K.begin(), K.end());
    if (res.cut) {
      ++cuts;
      std::size_t lk = 0, rk = 0;
      for (VertexId v : res.cut->L) lk += kset.count(v);
      for (VertexId v : res.cut->R) rk += kset.count(v);
      if (lk > rk) ++violations;
      if (static_cast<double>(lk) + 1e-9 < params.eps_wit * K.size()) ++violations;
      if (res.cut->kappa_s > 2.0 * lk + 1e-9) ++violations;
      for (VertexId l : res.cut->L)
        for (VertexId r : res.cut->R)
          if (h.adjacent(l, r)) ++violations;
    } else {
      ++witnesses;
      const auto& w = *res.witness;
      std::map<VertexId, double> load;
      double total_weight = 0;
      for (auto& p : w.paths) {
        for (VertexId v : p.vertices) load[v] += static_cast<double>(p.val_z) / kappa.z;
        total_weight += static_cast<double>(p.val_z) / kappa.z;
        std::set<VertexId> seen(p.vertices.begin(), p.vertices.end());
        if (seen.size() != p.vertices.size()) ++violations;
      }
      int rounds = static_cast<int>(std::ceil(params.rounds_factor * std::log2(K.size())));
      for (auto& [v, x] : load)
        if (x > rounds * kappa.value(v) + 1e-9) ++violations;
      if (total_weight > 4.0 * K.size() * std::log2(std::max<double>(2.0, K.size())) + 1e-9)
        ++violations;
      if (w.vertices.size() >= 2 && w.vertices.size() <= 12) {
        double cond = oracle::min_conductance(w.vertices, w.weighted_edges());
        if (cond < params.phi / 6.0 - 1e-12) ++violations;
      }
    }
  }
  std::ostringstream os;
  os << runs << " runs (" << cuts << " cuts, " << witnesses << " witnesses), " << violations
     << " violations";
  out.detail = os.str();
  out.pass = violations == 0 && witnesses > 0;
  return out;
}

// 6. MWU feasibility: the scaled estimator is capacity- and cost-feasible on
// every run, in both modes.
inline Outcome mwu_feasibility(std::uint64_t seed = 6, int runs_per_mode = 50) {
  Outcome out{"mwu-feasibility"};
  Rng rng(seed);
  int ok = 0, total = 0;
  for (int run = 0; run < runs_per_mode; ++run) {
    auto inst = testutil::random_vertex_instance(
        rng, static_cast<int>(rng.uniform_int(5, 10)), static_cast<int>(rng.uniform_int(8, 16)),
        8, 3, static_cast<double>(rng.uniform_int(5, 80)));
    for (auto mode : {MwuParams::kPractical, MwuParams::kTheory}) {
      MwuParams p;
      p.mode = mode;
      p.eps = mode == MwuParams::kTheory ? 0.4 : 0.05;
      p.seed = seed * 131 + run;
      MwuSolver solver(inst, p);
      solver.run();
      auto scaled = solver.scaled();
      auto feas = check_feasible(inst, scaled, 1.0);
      ++total;
      if (feas.capacity_ok && feas.cost_ok) ++ok;
    }
  }
  out.detail = detail::ratio(ok, total) + " feasible";
  out.pass = ok == total;
  return out;
}

// 7. Estimator statistics: per-iteration conditional unbiasedness by
// Monte-Carlo on frozen states, and end-of-run coupling within capacity.
inline Outcome estimator_stats(std::uint64_t seed = 7, int frozen_states = 10,
                               int mc_samples = 100000, int coupling_runs = 200) {
  Outcome out{"estimator-stats"};
  Rng rng(seed);
  int mean_failures = 0;
  for (int state = 0; state < frozen_states; ++state) {
    auto inst = testutil::random_vertex_instance(rng, 7, 12, 8, 3, 2000.0);
    for (VertexId v : inst.g.vertices()) {
      if (v == inst.s || v == inst.t) continue;
      inst.g.set_vertex_cap(v, static_cast<double>(rng.uniform_int(100, 400)));
    }
    MwuParams p;
    p.eps = 0.05;
    p.seed = seed * 17 + state;
    MwuSolver solver(inst, p);
    int warm = static_cast<int>(rng.uniform_int(5, 60));
    for (int i = 0; i < warm && solver.step(); ++i) {
    }
    if (solver.done()) continue;
    auto ideal = solver.ideal_increment();
    std::map<VertexId, double> sum, sumsq;
    Rng mc(seed * 97 + state);
    for (int i = 0; i < mc_samples; ++i) {
      auto inc = solver.simulate_increment(mc);
      for (auto& [v, target] : ideal) {
        double got = inc.count(v) ? inc[v] : 0.0;
        sum[v] += got;
        sumsq[v] += got * got;
      }
    }
    for (auto& [v, target] : ideal) {
      double mean = sum[v] / mc_samples;
      double var = std::max(0.0, sumsq[v] / mc_samples - mean * mean);
      double se = std::sqrt(var / mc_samples);
      if (std::abs(mean - target) > 3 * se + 1e-9) ++mean_failures;
    }
  }
  int coupled = 0;
  for (int run = 0; run < coupling_runs; ++run) {
    int n = static_cast<int>(rng.uniform_int(5, 10));
    int m = n + static_cast<int>(rng.uniform_int(2, 10));
    auto inst = testutil::random_vertex_instance(rng, n, m, 8, 3, 2000.0);
    for (VertexId v : inst.g.vertices()) {
      if (v == inst.s || v == inst.t) continue;
      inst.g.set_vertex_cap(v, static_cast<double>(rng.uniform_int(40, 200)));
    }
    MwuParams p;
    p.eps = 0.05;
    p.seed = seed * 53 + run;
    p.track_ideal = true;
    MwuSolver solver(inst, p);
    solver.run();
    auto in_hat = solver.flow_estimate().in_flows();
    auto in_ideal = solver.ideal_flow().in_flows();
    bool good = true;
    for (VertexId v : inst.g.vertices()) {
      if (v == inst.s || v == inst.t) continue;
      double a = in_hat.count(v) ? in_hat[v] : 0.0;
      double b = in_ideal.count(v) ? in_ideal[v] : 0.0;
      if (std::abs(a - b) > inst.g.vertex_cap(v) + 1e-9) good = false;
    }
    if (good) ++coupled;
  }
  std::ostringstream os;
  os << mean_failures << " unbiasedness failures over " << frozen_states << " states; coupling "
     << detail::ratio(coupled, coupling_runs);
  out.detail = os.str();
  out.pass = mean_failures == 0 &&
             coupled >= static_cast<int>(std::ceil(0.99 * coupling_runs));
  return out;
}

// 8. Capacity fitting: the three fitted-instance inequalities plus the
// preserved-optimum gate against the exact oracle.
inline Outcome capacity_fitting(std::uint64_t seed = 8, int runs = 50) {
  Outcome out{"capacity-fitting"};
  Rng rng(seed);
  int done = 0, bad_ineq = 0, bad_opt = 0;
  while (done < runs) {
    auto inst = testutil::random_vertex_instance(
        rng, static_cast<int>(rng.uniform_int(5, 8)), static_cast<int>(rng.uniform_int(7, 12)),
        6, 3, static_cast<double>(rng.uniform_int(8, 50)));
    auto opt = oracle::mbcf(inst);
    if (opt.value <= 0) continue;
    ++done;
    PipelineParams params;
    params.eps = 0.05;
    params.seed = seed * 19 + done;
    double u_bar = opt.value * rng.uniform(0.5, 1.0);
    auto fit = capacity_fit(inst, 0.05, u_bar, params);
    if (!fit.check.all()) ++bad_ineq;
    auto opt_fit = oracle::mbcf(fit.inst);
    if (opt_fit.value + 1e-6 < 0.9 * opt.value) ++bad_opt;
  }
  std::ostringstream os;
  os << done << " runs, " << bad_ineq << " inequality violations, " << bad_opt
     << " optimum-gate misses";
  out.detail = os.str();
  out.pass = bad_ineq == 0 && bad_opt == 0;
  return out;
}

// 9. End-to-end flow: exact feasibility on every run; at least half the
// exact optimum on >= 95% of runs; median gap reported.
inline Outcome end_to_end_flow(std::uint64_t seed = 9, int runs = 50) {
  Outcome out{"end-to-end-flow"};
  Rng rng(seed);
  int done = 0, infeasible = 0, below_gate = 0;
  std::vector<double> gaps;
  while (done < runs) {
    auto inst = testutil::random_vertex_instance(
        rng, static_cast<int>(rng.uniform_int(5, 10)), static_cast<int>(rng.uniform_int(7, 14)),
        6, 3, 1.0);
    auto probe_mf = oracle::max_flow(inst);
    if (probe_mf.value <= 0) continue;
    ++done;
    PipelineParams params;
    params.eps = 0.05;
    params.seed = seed * 23 + done;
    auto res = min_cost_flow(inst, 0.05, params);
    if (!res.run.feasible) {
      ++infeasible;
      continue;
    }
    FlowInstance at_budget = inst;
    at_budget.budget = res.budget;
    auto feas = check_feasible(at_budget, res.run.flow, 1.0);
    if (!feas.capacity_ok || !feas.cost_ok || !feas.conservation_ok) ++infeasible;
    auto opt = oracle::mbcf(at_budget);
    if (opt.value > 0) {
      double gap = res.run.value / opt.value;
      gaps.push_back(gap);
      if (gap + 1e-9 < 0.5) ++below_gate;
    }
  }
  std::sort(gaps.begin(), gaps.end());
  double median = gaps.empty() ? 0.0 : gaps[gaps.size() / 2];
  std::ostringstream os;
  os << done << " runs, " << infeasible << " infeasible, " << below_gate
     << " below the 0.5 gate, median value/OPT " << fmt_num(median);
  out.detail = os.str();
  out.pass = infeasible == 0 &&
             below_gate <= static_cast<int>(std::floor(0.05 * done));
  return out;
}

// 10. Reductions round-trip: mapped flows feasible and near-optimal; the
// crude approximator bracket always holds.
inline Outcome reductions_roundtrip(std::uint64_t seed = 10, int runs = 100) {
  Outcome out{"reductions-roundtrip"};
  Rng rng(seed);
  int done = 0, bad_bracket = 0, bad_map = 0;
  double eps = 0.25;
  while (done < runs) {
    auto inst = testutil::random_mixed_instance(
        rng, static_cast<int>(rng.uniform_int(6, 9)), 24, 4, 2,
        static_cast<double>(rng.uniform_int(4, 40)));
    if (inst.g.num_edges() < 16) continue;
    auto opt = oracle::mbcf(inst);
    double u_tilde = crude_approx_opt(inst);
    int m = static_cast<int>(inst.g.num_edges());
    ++done;
    if (u_tilde > opt.value + 1e-7 ||
        u_tilde + 1e-9 < opt.value / (2.0 * m * m) - 1e-7)
      ++bad_bracket;
    if (opt.value <= 0) continue;
    auto red = to_vertex_capacitated(inst, eps);
    auto opt_red = oracle::mbcf(red.inst);
    auto mapped = map_flow_back(red.inst, opt_red.flow, red.map);
    auto feas = check_feasible(inst, mapped, 1e3);
    bool edge_ok = true;
    for (auto& [e, x] : mapped.f)
      if (x > inst.ecap(e.first, e.second) + 1e-6) edge_ok = false;
    if (!feas.capacity_ok || !feas.cost_ok || !feas.conservation_ok || !edge_ok) {
      ++bad_map;
      continue;
    }
    double val = mapped.value(inst.t);
    if (val + 1e-6 < (1.0 - eps) * (1.0 - eps) * opt.value) ++bad_map;
  }
  std::ostringstream os;
  os << done << " runs, " << bad_bracket << " bracket misses, " << bad_map << " bad mappings";
  out.detail = os.str();
  out.pass = bad_bracket == 0 && bad_map == 0;
  return out;
}

// 11. Determinism: identical seeds give byte-identical run reports.
inline Outcome determinism(std::uint64_t seed = 11) {
  Outcome out{"determinism"};
  Rng rng(seed);
  auto inst = testutil::random_vertex_instance(rng, 7, 12, 6, 3, 30.0);
  auto report = [&](std::uint64_t s) {
    PipelineParams params;
    params.eps = 0.05;
    params.seed = s;
    auto res = mbcf(inst, 0.05, params);
    std::ostringstream os;
    os << "value " << fmt_num(res.value) << " cost " << fmt_num(res.cost) << " ubar "
       << fmt_num(res.u_bar) << " guesses " << res.guesses;
    for (auto& [e, x] : res.flow.f) os << " f " << e.first << " " << e.second << " " << fmt_num(x);
    return os.str();
  };
  std::string a = report(42), b = report(42), c = report(43);
  out.pass = a == b;
  out.detail = a == b ? (a == c ? "identical (seed-insensitive!)" : "byte-identical across reruns")
                      : "reports differ for the same seed";
  return out;
}

// Runs a named suite (or all) at a trial-count scale factor.
inline std::vector<Outcome> run_suites(const std::string& which, std::uint64_t seed,
                                       double scale = 1.0) {
  auto n = [&](int base) { return std::max(1, static_cast<int>(base * scale)); };
  std::vector<Outcome> results;
  auto want = [&](const char* name) { return which == "all" || which == name; };
  if (want("sssp-sandwich")) results.push_back(sssp_sandwich(seed + 1, n(200)));
  if (want("es-exactness")) results.push_back(es_exactness(seed + 2, n(500)));
  if (want("robust-core")) results.push_back(robust_core_properties(seed + 3, n(100)));
  if (want("certify-core")) results.push_back(certify_core_dichotomy(seed + 4, n(200)));
  if (want("embed-witness")) results.push_back(embed_witness_contracts(seed + 5, n(100)));
  if (want("mwu-feasibility")) results.push_back(mwu_feasibility(seed + 6, n(50)));
  if (want("estimator-stats"))
    results.push_back(estimator_stats(seed + 7, n(10), n(100000), n(200)));
  if (want("capacity-fitting")) results.push_back(capacity_fitting(seed + 8, n(50)));
  if (want("end-to-end-flow")) results.push_back(end_to_end_flow(seed + 9, n(50)));
  if (want("reductions-roundtrip")) results.push_back(reductions_roundtrip(seed + 10, n(100)));
  if (want("determinism")) results.push_back(determinism(seed + 11));
  return results;
}

inline bool known_suite(const std::string& name) {
  static const std::vector<std::string> kNames = {
      "all",          "sssp-sandwich",  "es-exactness",      "robust-core",
      "certify-core", "embed-witness",  "mwu-feasibility",   "estimator-stats",
      "capacity-fitting", "end-to-end-flow", "reductions-roundtrip", "determinism"};
  for (auto& n : kNames)
    if (n == name) return true;
  return false;
}

}  // namespace decflow::accept

// Batch command-line front end: decremental SSSP runs over update files,
// approximate min-cost flow / MBCF, and the acceptance suites.
//
// Exit codes: 0 ok, 1 invariant violation, 2 usage or parse error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "decflow/acceptance.hpp"
#include "decflow/emulator.hpp"
#include "decflow/graph_io.hpp"
#include "decflow/oracles.hpp"
#include "decflow/pipeline.hpp"

using namespace decflow;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DECFLOW_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

int run_sssp(const std::string& graph_file, const std::string& updates_file, VertexId source,
             double eps, int levels, const std::string& backend, bool verify,
             std::uint64_t seed) {
  auto g = read_graph_file(graph_file);
  DECFLOW_CHECK(g.has_vertex(source), "source vertex " << source << " not in the graph");
  std::vector<UpdateOp> ops;
  if (!updates_file.empty()) ops = read_updates_file(updates_file);

  double max_stretch = 1.0;
  long long checks = 0;
  auto verify_step = [&](auto estimate_of, const std::set<VertexId>& scope) {
    auto exact = oracle::dijkstra(g, {source});
    for (VertexId v : g.vertices()) {
      if (!scope.empty() && !scope.count(v)) continue;
      double est = estimate_of(v);
      if (exact[v] == kInf) continue;
      ++checks;
      DECFLOW_CHECK(est + 1e-7 >= exact[v],
                    "estimate below true distance at vertex " << v);
      if (exact[v] > 0) max_stretch = std::max(max_stretch, est / exact[v]);
    }
  };

  if (backend == "es") {
    EsTree tree(&g, {source}, kInf);
    auto est = [&](VertexId v) { return tree.level(v); };
    if (verify) verify_step(est, {});
    for (auto& op : ops) {
      if (op.kind == UpdateOp::kDelete) {
        g.delete_edge(op.u, op.v);
        tree.on_delete(op.u, op.v);
      } else {
        g.increase_weight(op.u, op.v, op.weight);
        tree.on_increase(op.u, op.v);
      }
      if (verify) verify_step(est, {});
    }
    std::cout << "backend es\nupdates " << ops.size() << "\n";
    for (VertexId v : g.vertices())
      std::cout << "d " << v << " " << fmt_num(tree.level(v)) << "\n";
  } else {
    LayeredParams params;
    params.levels = levels;
    params.eps = eps;
    params.seed = seed;
    LayeredSssp sssp(&g, {source}, params);
    auto est = [&](VertexId v) { return sssp.estimate(v); };
    if (verify) verify_step(est, sssp.emulator().v_init());
    for (auto& op : ops) {
      sssp.apply(op);
      if (verify) verify_step(est, sssp.emulator().v_init());
    }
    std::cout << "backend layered\nlevels " << levels << "\nupdates " << ops.size() << "\n";
    for (VertexId v : g.vertices()) {
      if (!sssp.emulator().v_init().count(v)) continue;
      std::cout << "d " << v << " " << fmt_num(sssp.estimate(v)) << "\n";
    }
    if (verify) {
      double bound = 1.0 + sssp.eps_final();
      std::cout << "max-stretch " << fmt_num(max_stretch) << " bound " << fmt_num(bound) << " ("
                << checks << " checks)\n";
      if (max_stretch > bound + 1e-7) return 1;
      return 0;
    }
  }
  if (verify) std::cout << "max-stretch " << fmt_num(max_stretch) << " (" << checks
                        << " checks)\n";
  return 0;
}

int run_flow(const std::string& graph_file, VertexId s, VertexId t, double eps, double budget,
             bool has_budget, const std::string& mode, std::uint64_t seed, bool oracle_gap,
             const std::string& dump_file) {
  auto g = read_graph_file(graph_file);
  DECFLOW_CHECK(g.has_vertex(s) && g.has_vertex(t), "terminals missing from the graph");
  FlowInstance inst;
  inst.g = std::move(g);
  inst.s = s;
  inst.t = t;
  PipelineParams params;
  params.eps = eps;
  params.seed = seed;
  params.mwu.mode = mode == "theory" ? MwuParams::kTheory : MwuParams::kPractical;

  MbcfResult result;
  double used_budget = 0.0;
  if (has_budget) {
    inst.budget = budget;
    result = mbcf(inst, eps, params);
    used_budget = budget;
  } else {
    auto res = min_cost_flow(inst, eps, params);
    result = res.run;
    used_budget = res.budget;
    std::cout << "budget-candidates " << res.candidates << "\nbudget-probes " << res.probes
              << "\n";
  }
  inst.budget = used_budget;
  auto feas = check_feasible(inst, result.flow, 1.0);
  std::cout << "mode " << mode << "\nseed " << seed << "\n";
  std::cout << "value " << fmt_num(result.value) << "\ncost " << fmt_num(result.cost)
            << "\nbudget " << fmt_num(used_budget) << "\n";
  std::cout << "feasible-capacity " << (feas.capacity_ok ? 1 : 0) << "\nfeasible-cost "
            << (feas.cost_ok ? 1 : 0) << "\nfeasible-conservation "
            << (feas.conservation_ok ? 1 : 0) << "\n";
  if (oracle_gap) {
    DECFLOW_CHECK(inst.g.num_vertices() <= 60, "--oracle needs a small instance");
    auto opt = oracle::mbcf(inst);
    double gap = opt.value > 0 ? result.value / opt.value : 1.0;
    std::cout << "oracle-opt " << fmt_num(opt.value) << "\noracle-gap " << fmt_num(gap) << "\n";
  }
  if (!dump_file.empty()) {
    std::ofstream out(dump_file);
    for (auto& [e, x] : result.flow.f)
      out << "f " << e.first << " " << e.second << " " << fmt_num(x) << "\n";
  }
  if (!feas.capacity_ok || !feas.cost_ok || !feas.conservation_ok) return 1;
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, double scale) {
  if (!accept::known_suite(suite)) {
    std::cerr << "unknown suite '" << suite << "'\n";
    return 2;
  }
  auto results = accept::run_suites(suite, seed, scale);
  bool all = true;
  for (auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decremental shortest paths and approximate min-cost flow"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();

  auto* sssp = app.add_subcommand("sssp", "run decremental SSSP over an update stream");
  sssp->add_option("--seed", seed, "PRNG seed (env DECFLOW_SEED)");
  std::string graph_file, updates_file, backend = "layered";
  VertexId source = 1;
  double eps = 0.1;
  int levels = 2;
  bool verify = false;
  sssp->add_option("graph", graph_file, "graph file")->required();
  sssp->add_option("--updates", updates_file, "update stream file");
  sssp->add_option("--source", source, "source vertex");
  sssp->add_option("--eps", eps, "accuracy parameter");
  sssp->add_option("--levels", levels, "layer count");
  sssp->add_option("--backend", backend, "layered|es")->check(CLI::IsMember({"layered", "es"}));
  sssp->add_flag("--verify", verify, "cross-check every step against the oracle");

  auto* flow = app.add_subcommand("flow", "approximate min-cost flow / MBCF");
  std::string flow_graph, mode = "practical", dump_file;
  VertexId fs = 0, ft = 0;
  double feps = 0.05, budget = 0.0;
  bool oracle_gap = false;
  flow->add_option("graph", flow_graph, "graph file")->required();
  flow->add_option("--source", fs, "source vertex")->required();
  flow->add_option("--sink", ft, "sink vertex")->required();
  flow->add_option("--eps", feps, "accuracy parameter");
  auto* budget_opt = flow->add_option("--budget", budget, "cost budget (run plain MBCF)");
  flow->add_option("--mode", mode, "theory|practical")
      ->check(CLI::IsMember({"theory", "practical"}));
  flow->add_flag("--oracle", oracle_gap, "report the exact-oracle gap (small instances)");
  flow->add_option("--dump-flow", dump_file, "write per-edge flow records here");
  flow->add_option("--seed", seed, "PRNG seed (env DECFLOW_SEED)");

  auto* verify_cmd = app.add_subcommand("verify", "run acceptance suites");
  std::string suite = "all";
  double scale = 1.0;
  verify_cmd->add_option("suite", suite, "suite name or 'all'");
  verify_cmd->add_option("--scale", scale, "trial-count scale factor");
  verify_cmd->add_option("--seed", seed, "PRNG seed (env DECFLOW_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sssp->parsed())
      return run_sssp(graph_file, updates_file, source, eps, levels, backend, verify, seed);
    if (flow->parsed())
      return run_flow(flow_graph, fs, ft, feps, budget, budget_opt->count() > 0, mode, seed,
                      oracle_gap, dump_file);
    if (verify_cmd->parsed()) return run_verify(suite, seed, scale);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "decflow/mwu.hpp"
#include "decflow/reductions.hpp"

namespace decflow {

// ---------------------------------------------------------------------------
// Real-valued Dinic on an explicit arc list; used for the exact max-flow
// routine that stands in for the approximate edge-capacitated solver in the
// excess-routing step (it satisfies the same <= 2x relaxed-capacity
// contract by construction).

namespace pipedetail {

struct RArc {
  int to;
  double cap;
  int rev;
};

class RealDinic {
 public:
  int add_node() {
    adj_.emplace_back();
    return static_cast<int>(adj_.size()) - 1;
  }
  int add_arc(int from, int to, double cap) {
    adj_[from].push_back({to, cap, static_cast<int>(adj_[to].size())});
    adj_[to].push_back({from, 0.0, static_cast<int>(adj_[from].size()) - 1});
    return static_cast<int>(adj_[from].size()) - 1;
  }
  double run(int s, int t) {
    double total = 0;
    for (;;) {
      if (!bfs(s, t)) break;
      it_.assign(adj_.size(), 0);
      for (;;) {
        double pushed = dfs(s, t, kInf);
        if (pushed <= 1e-12) break;
        total += pushed;
      }
    }
    return total;
  }
  double flow_on(int v, int i) const {
    const auto& a = adj_[v][i];
    return adj_[a.to][a.rev].cap;
  }
  std::vector<std::vector<RArc>>& arcs() { return adj_; }

 private:
  bool bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto& a : adj_[v])
        if (a.cap > 1e-12 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          q.push(a.to);
        }
    }
    return level_[t] >= 0;
  }
  double dfs(int v, int t, double limit) {
    if (v == t) return limit;
    for (int& i = it_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      auto& a = adj_[v][i];
      if (a.cap <= 1e-12 || level_[a.to] != level_[v] + 1) continue;
      double got = dfs(a.to, t, std::min(limit, a.cap));
      if (got > 1e-12) {
        a.cap -= got;
        adj_[a.to][a.rev].cap += got;
        return got;
      }
    }
    return 0;
  }
  std::vector<std::vector<RArc>> adj_;
  std::vector<int> level_;
  std::vector<int> it_;
};

}  // namespace pipedetail

// ---------------------------------------------------------------------------
// Capacity fitting: repeatedly halve the capacity of every vertex whose
// pseudo-optimal in-flow stays at or below half its capacity.

struct PipelineParams {
  MwuParams mwu;
  double eps = 0.05;
  int j_max_cap = 12;           // practical-mode bound on fitting rounds
  double solver_eps_floor = 0.02;  // practical-mode floor on the per-round accuracy
  std::uint64_t seed = 1;
};

struct FitCheck {
  bool caps_below = true, neighborhood_ok = true, budget_ok = true;
  bool all() const { return caps_below && neighborhood_ok && budget_ok; }
};

struct FittedInstance {
  FlowInstance inst;  // the split graph with fitted capacities
  std::map<VertexId, std::pair<VertexId, VertexId>> relay;
  int rounds = 0;
  double eps_solver = 0.0;
  std::vector<std::vector<VertexId>> halved;  // per-round halving sets
  FitCheck check;
};

// One pseudo-solver invocation: a fresh estimator MWU run. Practical mode
// uses the feasibility-tight rescale (the worst-case divisor is loose by a
// near-constant factor and would mislead the halving rule).
inline PseudoFlow solve_pseudo_opt(const FlowInstance& inst, double eps, MwuParams base,
                                   std::uint64_t seed) {
  base.eps = eps;
  base.seed = seed;
  base.track_ideal = false;
  MwuSolver solver(inst, base);
  solver.run();
  return base.mode == MwuParams::kPractical ? solver.scaled_tight() : solver.scaled();
}

inline FitCheck check_fitted(const FlowInstance& original, const FittedInstance& fit);

inline FittedInstance capacity_fit(const FlowInstance& g, double eps, double u_bar,
                                   const PipelineParams& params) {
  // The halving arithmetic needs (2 - 16 eps) > 1; theory mode keeps the
  // stricter 1/64 bound.
  DECFLOW_CHECK(eps > 0 && eps < 1.0 / 16.0, "capacity_fit: eps out of (0, 1/16)");
  if (params.mwu.mode == MwuParams::kTheory)
    DECFLOW_CHECK(eps < 1.0 / 64.0, "capacity_fit: theory mode needs eps < 1/64");
  const double m = static_cast<double>(g.g.num_edges());
  auto split = edge_split(g);

  int j_max = static_cast<int>(
      std::floor(std::log(2.0 * std::pow(m, 11) / eps) / std::log(2.0 - 16.0 * eps)));
  double eps_solver = eps / (20.0 * std::max(1, j_max));
  if (params.mwu.mode == MwuParams::kPractical) {
    j_max = std::min(j_max, params.j_max_cap);
    eps_solver = std::max(eps / (20.0 * std::max(1, j_max)), params.solver_eps_floor);
  }

  FittedInstance out;
  out.relay = split.relay;
  out.inst = split.inst;
  out.rounds = j_max + 1;
  out.eps_solver = eps_solver;
  for (VertexId v : out.inst.g.vertices()) {
    if (v == out.inst.s || v == out.inst.t) continue;
    out.inst.g.set_vertex_cap(v, std::min(out.inst.g.vertex_cap(v), 2.0 * u_bar));
  }
  Rng seeder(params.seed);
  for (int j = 0; j <= j_max; ++j) {
    auto flow = solve_pseudo_opt(out.inst, eps_solver, params.mwu, seeder.next_u64());
    auto in = flow.in_flows();
    std::vector<VertexId> halved;
    for (VertexId v : out.inst.g.vertices()) {
      if (v == out.inst.s || v == out.inst.t) continue;
      double u = out.inst.g.vertex_cap(v);
      double iv = in.count(v) ? in[v] : 0.0;
      if (iv <= u / 2.0 + kEps) {
        out.inst.g.set_vertex_cap(v, u / 2.0);
        halved.push_back(v);
      }
    }
    out.halved.push_back(std::move(halved));
  }
  out.check = check_fitted(g, out);
  return out;
}

// The three fitted-instance inequalities, checked against the pre-split
// original instance.
inline FitCheck check_fitted(const FlowInstance& original, const FittedInstance& fit) {
  FitCheck r;
  // u''(v) <= u'(v) for originals; relays were capped at the max capacity.
  for (VertexId v : original.g.vertices()) {
    if (v == original.s || v == original.t) continue;
    if (fit.inst.g.vertex_cap(v) > original.g.vertex_cap(v) + kEps) r.caps_below = false;
  }
  // Sum of fitted relay capacities around each original vertex.
  std::map<VertexId, double> nbr_sum;
  for (auto& [ve, pr] : fit.relay) {
    double u = fit.inst.g.vertex_cap(ve);
    nbr_sum[pr.first] += u;
    nbr_sum[pr.second] += u;
  }
  for (auto& [v, s] : nbr_sum) {
    if (v == original.s || v == original.t) continue;
    if (s > 18.0 * original.g.vertex_cap(v) + kEps) r.neighborhood_ok = false;
  }
  double total = 0;
  for (VertexId v : fit.inst.g.vertices()) {
    if (v == fit.inst.s || v == fit.inst.t) continue;
    total += fit.inst.g.vertex_cap(v) * fit.inst.g.vertex_cost(v);
  }
  if (total > 18.0 * original.budget + kEps) r.budget_ok = false;
  return r;
}

// ---------------------------------------------------------------------------
// Mapping a split-graph pseudo-flow back: cancel anti-parallel flow, balance
// every relay vertex by reducing flow (incoming against surplus, outgoing
// against deficit; x-side first), then collapse relays onto original edges.
// In-flows only ever decrease.

inline PseudoFlow route_back_excess(const PseudoFlow& g_hat,
                                    const std::map<VertexId, std::pair<VertexId, VertexId>>& relay) {
  // Net out anti-parallel pairs.
  std::map<std::pair<VertexId, VertexId>, double> net;
  for (auto& [e, x] : g_hat.f) {
    auto rev = std::make_pair(e.second, e.first);
    auto it = net.find(rev);
    if (it != net.end()) {
      double c = std::min(it->second, x);
      it->second -= c;
      if (it->second <= kEps) net.erase(it);
      if (x - c > kEps) net[e] += x - c;
    } else if (x > kEps) {
      net[e] += x;
    }
  }
  auto get = [&](VertexId a, VertexId b) {
    auto it = net.find({a, b});
    return it == net.end() ? 0.0 : it->second;
  };
  PseudoFlow out;
  for (auto& [ve, pr] : relay) {
    auto [x, y] = pr;
    double a = get(x, ve), b = get(y, ve);  // in
    double c = get(ve, y), d = get(ve, x);  // out
    double ex = (a + b) - (c + d);
    if (ex > 0) {
      // Surplus: return it to x first, then y.
      double r = std::min(ex, a);
      a -= r;
      ex -= r;
      b -= std::min(ex, b);
    } else if (ex < 0) {
      // Deficit (the estimator may under-fill the incoming side): trim the
      // outgoing side, x first.
      double need = -ex;
      double r = std::min(need, d);
      d -= r;
      need -= r;
      c -= std::min(need, c);
    }
    // After balancing and cancellation, flow runs x -> ve -> y or the
    // reverse, never both.
    if (a > kEps && c > kEps) out.add(x, y, std::min(a, c));
    if (b > kEps && d > kEps) out.add(y, x, std::min(b, d));
  }
  return out;
}

// Excess vector: F is the net value arriving at t; the excess of s absorbs
// F so that the vector sums to zero exactly.
inline std::pair<double, std::map<VertexId, double>> excess_vector(const PseudoFlow& f,
                                                                   VertexId s, VertexId t) {
  auto in = f.in_flows();
  auto out = f.out_flows();
  auto val = [&](const std::map<VertexId, double>& m, VertexId v) {
    auto it = m.find(v);
    return it == m.end() ? 0.0 : it->second;
  };
  double big_f = val(in, t) - val(out, t);
  std::map<VertexId, double> chi;
  std::set<VertexId> verts;
  for (auto& [e, x] : f.f) {
    verts.insert(e.first);
    verts.insert(e.second);
  }
  for (VertexId v : verts) {
    if (v == t) continue;
    double x = val(in, v) - val(out, v);
    if (v == s) x += big_f;
    if (x != 0.0) chi[v] = x;
  }
  double sum = 0;
  for (auto& [v, x] : chi) sum += x;
  DECFLOW_CHECK(std::abs(sum) <= 1e-6 * std::max(1.0, val(in, t)),
                "excess_vector: demands do not sum to zero (" << sum << ")");
  return {big_f, chi};
}

// Routes the excess demand chi over the original edges, each capacitated by
// eps * (fitted relay capacity). Solves exactly under u''' first and
// retries once under the 2x relaxation.
inline PseudoFlow route_excess_maxflow(
    const FlowInstance& original, const std::map<VertexId, std::pair<VertexId, VertexId>>& relay,
    const FittedInstance& fit, double eps, const std::map<VertexId, double>& chi) {
  double total_pos = 0;
  for (auto& [v, x] : chi)
    if (x > 0) total_pos += x;
  PseudoFlow empty;
  if (total_pos <= kEps) return empty;

  for (double relax : {1.0, 2.0}) {
    pipedetail::RealDinic net;
    std::map<VertexId, int> node;
    for (VertexId v : original.g.vertices()) node[v] = net.add_node();
    int src = net.add_node(), snk = net.add_node();
    struct EdgeRef {
      VertexId x, y;
      int node, idx;
    };
    std::vector<EdgeRef> refs;
    for (auto& [ve, pr] : relay) {
      auto [x, y] = pr;
      double cap = relax * eps * fit.inst.g.vertex_cap(ve);
      int i1 = net.add_arc(node[x], node[y], cap);
      refs.push_back({x, y, node[x], i1});
      int i2 = net.add_arc(node[y], node[x], cap);
      refs.push_back({y, x, node[y], i2});
    }
    for (auto& [v, x] : chi) {
      if (x > 0)
        net.add_arc(src, node[v], x);
      else if (x < 0)
        net.add_arc(node[v], snk, -x);
    }
    double routed = net.run(src, snk);
    if (routed + 1e-7 * std::max(1.0, total_pos) >= total_pos) {
      PseudoFlow out;
      for (auto& r : refs) {
        double fl = net.flow_on(r.node, r.idx);
        if (fl > kEps) out.add(r.x, r.y, fl);
      }
      return out;
    }
  }
  throw Error("route_excess_maxflow: demand not routable; the coupling invariant failed upstream");
}

// ---------------------------------------------------------------------------
// The full MBCF driver: guess the flow value, fit capacities, run the
// estimator MWU on the fitted instance, map back, route the excess, and
// combine. The result is rescaled to exact feasibility (the worst-case
// (1 - 80 eps) combine factor is vacuous at desk-scale accuracies).

struct MbcfResult {
  PseudoFlow flow;
  double value = 0.0;
  double cost = 0.0;
  double u_bar = 0.0;
  double combine_scale = 1.0;
  int guesses = 0;
  bool feasible = false;
};

inline MbcfResult mbcf(const FlowInstance& inst, double eps, PipelineParams params) {
  MbcfResult best;
  double u_tilde = crude_approx_opt(inst);
  if (u_tilde <= 0) return best;
  const double m = static_cast<double>(inst.g.num_edges());
  double u_max_cap = 1.0;
  for (VertexId v : inst.g.vertices())
    if (inst.g.vertex_cap(v) != kInf) u_max_cap = std::max(u_max_cap, inst.g.vertex_cap(v));

  Rng seeder(params.seed);
  double prev_profile = -1.0;
  for (double u_bar = u_tilde * 2.0 * m * m; u_bar >= u_tilde / 2.0 - kEps; u_bar /= 2.0) {
    ++best.guesses;
    // Guesses whose cap 2 U-bar does not bind collapse onto one profile.
    double profile = std::min(2.0 * u_bar, u_max_cap);
    if (profile == prev_profile) continue;
    prev_profile = profile;

    PipelineParams round = params;
    round.seed = seeder.next_u64();
    auto fit = capacity_fit(inst, eps, u_bar, round);
    auto pseudo = solve_pseudo_opt(fit.inst, eps, round.mwu, seeder.next_u64());
    auto mapped = route_back_excess(pseudo, fit.relay);
    auto [value, chi] = excess_vector(mapped, inst.s, inst.t);
    PseudoFlow fixer;
    try {
      fixer = route_excess_maxflow(inst, fit.relay, fit, eps, chi);
    } catch (const Error&) {
      continue;  // estimator noise broke the coupling for this guess
    }
    PseudoFlow combined = mapped;
    for (auto& [e, x] : fixer.f) combined.add(e.first, e.second, x);
    // Exact feasibility rescale; dominated by (1 - 80 eps) whenever that is
    // meaningful.
    double scale = 1.0;
    auto in = combined.in_flows();
    for (auto& [v, x] : in) {
      if (v == inst.s || v == inst.t) continue;
      double u = inst.g.vertex_cap(v);
      if (x > u) scale = std::min(scale, u / x);
    }
    double cost = combined.cost(inst.g);
    if (cost > inst.budget && cost > 0) scale = std::min(scale, inst.budget / cost);
    combined.scale(scale * (1.0 - kEps));
    auto feas = check_feasible(inst, combined, 1.0);
    if (!feas.capacity_ok || !feas.cost_ok || !feas.conservation_ok) continue;
    double val = combined.value(inst.t);
    if (val > best.value) {
      best.flow = std::move(combined);
      best.value = val;
      best.cost = best.flow.cost(inst.g);
      best.u_bar = u_bar;
      best.combine_scale = scale;
      best.feasible = true;
    }
  }
  return best;
}

// Budget search: the candidate budgets are the powers of (1+eps) up to
// sum(u(v) c(v)); binary search over them, then return the cheapest probed
// budget whose flow value reaches (1-eps) times the best value seen.
struct MinCostFlowResult {
  MbcfResult run;
  double budget = 0.0;
  int probes = 0;
  int candidates = 0;
};

inline MinCostFlowResult min_cost_flow(const FlowInstance& inst, double eps,
                                       PipelineParams params) {
  MinCostFlowResult out;
  double sum_uc = 0;
  for (VertexId v : inst.g.vertices())
    if (inst.g.vertex_cap(v) != kInf) sum_uc += inst.g.vertex_cap(v) * inst.g.vertex_cost(v);
  sum_uc = std::max(sum_uc, 1.0);
  int count = static_cast<int>(std::ceil(std::log(sum_uc) / std::log(1.0 + eps)));
  count = std::max(count, 1);
  out.candidates = count;

  auto run_at = [&](int i) {  // i-th power of (1+eps), i in [0, count]
    FlowInstance probe = inst;
    probe.budget = std::pow(1.0 + eps, i);
    PipelineParams p = params;
    p.seed = params.seed + 7919 * (i + 1);
    ++out.probes;
    return mbcf(probe, eps, p);
  };

  std::map<int, MbcfResult> probed;
  probed[count] = run_at(count);
  double best_value = probed[count].value;
  int lo = 0, hi = count;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    probed[mid] = run_at(mid);
    best_value = std::max(best_value, probed[mid].value);
    if (probed[mid].value + kEps >= (1.0 - eps) * best_value)
      hi = mid;
    else
      lo = mid + 1;
  }
  // Cheapest probed budget reaching (1-eps) of the best observed value.
  for (auto& [i, res] : probed) {
    if (res.value + kEps >= (1.0 - eps) * best_value) {
      out.run = res;
      out.budget = std::pow(1.0 + eps, i);
      return out;
    }
  }
  out.run = probed[count];
  out.budget = std::pow(1.0 + eps, count);
  return out;
}

}  // namespace decflow

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "decflow/graph.hpp"

namespace decflow {

// An s-t flow instance over an undirected graph. Vertex capacities/costs
// live on the DynGraph; edge capacities/costs are kept here (symmetric per
// undirected pair) and default to infinity / zero, which is exactly the
// shape produced by the vertex-capacitation reduction.
struct FlowInstance {
  DynGraph g;
  VertexId s = -1, t = -1;
  double budget = 0.0;  // cost budget C-bar
  std::map<std::pair<VertexId, VertexId>, double> edge_cap;   // keyed (min,max)
  std::map<std::pair<VertexId, VertexId>, double> edge_cost;  // keyed (min,max)

  static std::pair<VertexId, VertexId> key(VertexId u, VertexId v) {
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
  }

  double ecap(VertexId u, VertexId v) const {
    auto it = edge_cap.find(key(u, v));
    return it == edge_cap.end() ? kInf : it->second;
  }
  double ecost(VertexId u, VertexId v) const {
    auto it = edge_cost.find(key(u, v));
    return it == edge_cost.end() ? 0.0 : it->second;
  }
  bool vertex_capacitated() const { return edge_cap.empty() && edge_cost.empty(); }
};

// Flow vector over directed edges, with per-vertex aggregates. Flows are
// nonnegative and anti-parallel flow is not cancelled implicitly.
struct PseudoFlow {
  std::map<std::pair<VertexId, VertexId>, double> f;

  double at(VertexId u, VertexId v) const {
    auto it = f.find({u, v});
    return it == f.end() ? 0.0 : it->second;
  }
  void add(VertexId u, VertexId v, double x) {
    if (x != 0.0) f[{u, v}] += x;
  }

  double in_flow(VertexId v) const {
    double s = 0;
    for (auto& [e, x] : f)
      if (e.second == v) s += x;
    return s;
  }
  double out_flow(VertexId v) const {
    double s = 0;
    for (auto& [e, x] : f)
      if (e.first == v) s += x;
    return s;
  }

  std::map<VertexId, double> in_flows() const {
    std::map<VertexId, double> m;
    for (auto& [e, x] : f) m[e.second] += x;
    return m;
  }
  std::map<VertexId, double> out_flows() const {
    std::map<VertexId, double> m;
    for (auto& [e, x] : f) m[e.first] += x;
    return m;
  }

  // Cost against vertex costs: sum over v of in_f(v) * c(v).
  double cost(const DynGraph& g) const {
    double c = 0;
    for (auto& [e, x] : f) c += x * g.vertex_cost(e.second);
    return c;
  }

  double value(VertexId t) const { return in_flow(t) - out_flow(t); }

  void scale(double a) {
    for (auto& [e, x] : f) x *= a;
  }
};

// Feasibility check for vertex-capacitated instances: capacity (in <= u),
// cost (c(f) <= budget) and, optionally, conservation at non-terminals.
struct Feasibility {
  bool capacity_ok = true, cost_ok = true, conservation_ok = true;
  VertexId first_violation = -1;
  bool ok(bool need_conservation) const {
    return capacity_ok && cost_ok && (!need_conservation || conservation_ok);
  }
};

inline Feasibility check_feasible(const FlowInstance& inst, const PseudoFlow& f,
                                  double tol_scale = 1.0) {
  Feasibility r;
  auto in = f.in_flows();
  auto out = f.out_flows();
  for (auto& [v, x] : in) {
    double u = inst.g.vertex_cap(v);
    if (v != inst.s && v != inst.t && x > u * (1 + kEps * tol_scale) + kEps) {
      r.capacity_ok = false;
      if (r.first_violation < 0) r.first_violation = v;
    }
  }
  if (f.cost(inst.g) > inst.budget * (1 + kEps * tol_scale) + kEps) r.cost_ok = false;
  for (VertexId v : inst.g.vertices()) {
    if (v == inst.s || v == inst.t) continue;
    double iv = in.count(v) ? in[v] : 0.0, ov = out.count(v) ? out[v] : 0.0;
    double scale = std::max(1.0, std::max(iv, ov));
    if (std::abs(iv - ov) > kEps * scale * tol_scale) {
      r.conservation_ok = false;
      if (r.first_violation < 0) r.first_violation = v;
    }
  }
  return r;
}

}  // namespace decflow

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "decflow/flow_instance.hpp"
#include "decflow/graph.hpp"

namespace decflow {

// ---------------------------------------------------------------------------
// Crude OPT approximation: sort edges by approximate cost, grow maximum
// spanning forests under approximate capacity, and combine each prefix's
// s-t bottleneck with the budget-implied cap. Guarantees
// OPT/(2 m^2) <= U-tilde <= OPT. Returns 0 when s,t are disconnected.

inline double crude_approx_opt(const FlowInstance& inst) {
  const auto& g = inst.g;
  const auto edges = g.undirected_edges();
  const int m = static_cast<int>(edges.size());
  if (m == 0) return 0.0;

  struct E {
    VertexId u, v;
    double uap, cap;
  };
  std::vector<E> es;
  es.reserve(m);
  for (auto& [u, v, w] : edges) {
    double ua = std::min({inst.ecap(u, v), g.vertex_cap(u), g.vertex_cap(v)});
    double ca = std::max({inst.ecost(u, v), g.vertex_cost(u), g.vertex_cost(v)});
    es.push_back({u, v, ua, ca});
  }
  std::sort(es.begin(), es.end(), [](const E& a, const E& b) {
    if (a.cap != b.cap) return a.cap < b.cap;
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });

  double best = 0.0;
  for (int i = 1; i <= m; ++i) {
    // Maximum spanning forest of the first i edges under u_approx (Kruskal).
    std::vector<int> order(i);
    for (int j = 0; j < i; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return es[a].uap > es[b].uap; });
    std::map<VertexId, VertexId> parent;
    auto find = [&](VertexId v) {
      while (parent.count(v) && parent[v] != v) v = parent[v] = parent[parent[v]];
      return parent.count(v) ? v : (parent[v] = v);
    };
    std::map<VertexId, std::vector<std::pair<VertexId, double>>> tree;
    for (int j : order) {
      VertexId a = find(es[j].u), b = find(es[j].v);
      if (a == b) continue;
      parent[a] = b;
      tree[es[j].u].push_back({es[j].v, es[j].uap});
      tree[es[j].v].push_back({es[j].u, es[j].uap});
    }
    if (find(inst.s) != find(inst.t)) continue;
    // Bottleneck capacity on the unique s-t tree path (DFS).
    double bottleneck = kInf;
    {
      std::map<VertexId, std::pair<VertexId, double>> pred;
      std::vector<VertexId> stack{inst.s};
      std::set<VertexId> seen{inst.s};
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (auto& [w, cap] : tree[v])
          if (seen.insert(w).second) {
            pred[w] = {v, cap};
            stack.push_back(w);
          }
      }
      for (VertexId v = inst.t; v != inst.s;) {
        auto& [p, cap] = pred.at(v);
        bottleneck = std::min(bottleneck, cap);
        v = p;
      }
    }
    double budget_cap =
        es[i - 1].cap > 0 ? inst.budget / (2.0 * m * es[i - 1].cap) : kInf;
    best = std::max(best, std::min(bottleneck, budget_cap));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Mixed-capacity -> vertex-capacity reduction. The output instance has
// costs/capacities on vertices only, every edge free and uncapacitated, and
// a fresh terminal pair; flows map back with a single scale factor.

struct ReductionMap {
  double gamma_u = 1.0, gamma_c = 1.0;
  double tau_u = 0.0, tau_c = 0.0;
  double u_tilde = 0.0;
  VertexId s = -1, t = -1;    // original terminals
  VertexId s2 = -1, t2 = -1;  // new terminals s', t'
  // split vertex id -> original undirected pair (x, y) with x < y
  std::map<VertexId, std::pair<VertexId, VertexId>> split_vertex;
};

struct VertexCapacitated {
  FlowInstance inst;  // vertex-capacitated, budget = 32 m^4
  ReductionMap map;
};

inline VertexCapacitated to_vertex_capacitated(const FlowInstance& in, double eps) {
  const auto& g = in.g;
  const int m = static_cast<int>(g.num_edges());
  const int n = static_cast<int>(g.num_vertices());
  DECFLOW_CHECK(m >= 16, "to_vertex_capacitated: need m >= 16, have " << m);
  DECFLOW_CHECK(eps > 1.0 / n && eps < 1.0, "to_vertex_capacitated: eps out of range");

  ReductionMap rm;
  rm.u_tilde = crude_approx_opt(in);
  DECFLOW_CHECK(rm.u_tilde > 0, "to_vertex_capacitated: s and t are disconnected");
  rm.tau_u = rm.u_tilde / (8.0 * m * m);
  rm.tau_c = in.budget * 8.0 * m / rm.u_tilde;
  rm.gamma_u = rm.tau_u;
  rm.gamma_c = in.budget / (4.0 * rm.u_tilde * m * m);
  rm.s = in.s;
  rm.t = in.t;

  std::set<VertexId> v_reason;
  for (VertexId v : g.vertices())
    if (g.vertex_cap(v) >= rm.tau_u && g.vertex_cost(v) <= rm.tau_c) v_reason.insert(v);
  DECFLOW_CHECK(v_reason.count(in.s) && v_reason.count(in.t),
                "to_vertex_capacitated: a terminal is not reasonable");

  std::vector<std::pair<VertexId, VertexId>> e_reason;
  for (auto& [x, y, w] : g.undirected_edges())
    if (in.ecap(x, y) >= rm.tau_u && in.ecost(x, y) <= rm.tau_c && v_reason.count(x) &&
        v_reason.count(y))
      e_reason.push_back({x, y});

  VertexId next_id = 0;
  for (VertexId v : g.vertices()) next_id = std::max(next_id, v);
  ++next_id;

  const double cap_roof = rm.u_tilde * 2.0 * m * m;
  auto scaled_cap = [&](double u) { return std::min(u, cap_roof) / rm.gamma_u; };
  auto scaled_cost = [&](double c) { return c == 0.0 ? 0.0 : std::max(c / rm.gamma_c, 1.0); };

  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  std::map<VertexId, double> caps, costs;
  for (VertexId v : v_reason) {
    caps[v] = scaled_cap(g.vertex_cap(v));
    costs[v] = scaled_cost(g.vertex_cost(v));
  }
  for (auto& [x, y] : e_reason) {
    VertexId ve = next_id++;
    rm.split_vertex[ve] = {x, y};
    caps[ve] = scaled_cap(in.ecap(x, y));
    costs[ve] = scaled_cost(in.ecost(x, y));
    edges.push_back({x, ve, 1.0});
    edges.push_back({ve, y, 1.0});
  }
  rm.s2 = next_id++;
  rm.t2 = next_id++;
  caps[rm.s2] = cap_roof / rm.gamma_u;
  costs[rm.s2] = 0.0;
  caps[rm.t2] = cap_roof / rm.gamma_u;
  costs[rm.t2] = 0.0;
  edges.push_back({in.s, rm.s2, 1.0});
  edges.push_back({in.t, rm.t2, 1.0});

  VertexCapacitated out;
  out.inst.g = DynGraph::build(edges, caps, costs);
  out.inst.s = rm.s2;
  out.inst.t = rm.t2;
  out.inst.budget = 32.0 * std::pow(static_cast<double>(m), 4);
  out.map = rm;
  return out;
}

// Maps a feasible s'-t' flow on the reduced instance back to the original
// graph; the value scales by exactly gamma_u.
inline PseudoFlow map_flow_back(const FlowInstance& reduced, const PseudoFlow& f,
                                const ReductionMap& rm) {
  auto feas = check_feasible(reduced, f, 1e3);
  DECFLOW_CHECK(feas.ok(true), "map_flow_back: infeasible input flow (first violation at vertex "
                                   << feas.first_violation << ")");
  // Cancel anti-parallel flow, then read off the split-vertex transits.
  std::map<std::pair<VertexId, VertexId>, double> net;
  for (auto& [e, x] : f.f) {
    auto rev = std::make_pair(e.second, e.first);
    auto it = net.find(rev);
    if (it != net.end()) {
      double c = std::min(it->second, x);
      it->second -= c;
      if (it->second == 0) net.erase(it);
      if (x - c > 0) net[e] = x - c;
    } else {
      net[e] += x;
    }
  }
  PseudoFlow out;
  for (auto& [ve, pair] : rm.split_vertex) {
    auto [x, y] = pair;
    double fxy = 0, fyx = 0;
    auto it = net.find({x, ve});
    if (it != net.end()) fxy = it->second;
    it = net.find({y, ve});
    if (it != net.end()) fyx = it->second;
    if (fxy > 0) out.add(x, y, fxy * rm.gamma_u);
    if (fyx > 0) out.add(y, x, fyx * rm.gamma_u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge splitting for vertex-capacitated instances: each undirected edge
// {x,y} gains a relay vertex of maximal capacity and zero cost.

struct EdgeSplit {
  FlowInstance inst;
  std::map<VertexId, std::pair<VertexId, VertexId>> relay;  // v_e -> (x,y), x<y
};

inline EdgeSplit edge_split(const FlowInstance& in) {
  DECFLOW_CHECK(in.vertex_capacitated(), "edge_split: instance must be vertex-capacitated");
  double umax = 1.0;
  for (VertexId v : in.g.vertices())
    if (in.g.vertex_cap(v) != kInf) umax = std::max(umax, in.g.vertex_cap(v));
  VertexId next_id = 0;
  for (VertexId v : in.g.vertices()) next_id = std::max(next_id, v);
  ++next_id;

  EdgeSplit out;
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  std::map<VertexId, double> caps, costs;
  for (VertexId v : in.g.vertices()) {
    if (in.g.vertex_cap(v) != kInf) caps[v] = in.g.vertex_cap(v);
    costs[v] = in.g.vertex_cost(v);
  }
  for (auto& [x, y, w] : in.g.undirected_edges()) {
    VertexId ve = next_id++;
    out.relay[ve] = {x, y};
    caps[ve] = umax;
    costs[ve] = 0.0;
    edges.push_back({x, ve, 1.0});
    edges.push_back({ve, y, 1.0});
  }
  out.inst.g = DynGraph::build(edges, caps, costs);
  out.inst.s = in.s;
  out.inst.t = in.t;
  out.inst.budget = in.budget;
  return out;
}

// ---------------------------------------------------------------------------
// Degree/weight normalization: rewrites an arbitrary weighted graph into one
// with maximum degree 3 whose distances are preserved within (1 + O(eps)),
// where weight increases compile into deletions of geometric edge copies and
// deletions that would disconnect the graph are filtered out.

struct Normalized {
  DynGraph g;                       // the normalized graph
  double scale = 1.0;               // distances in g are scale * original
  std::map<VertexId, VertexId> rep;  // original vertex -> anchor slot vertex

  double to_original_distance(double d) const { return d / scale; }
};

class Normalizer {
 public:
  // Geometric copies cover weights up to w_headroom times the initial
  // maximum; increases beyond that range are rejected.
  Normalizer(const DynGraph& g, double eps, double w_headroom = 1.0) : orig_(g), eps_(eps) {
    const int n = static_cast<int>(g.num_vertices());
    DECFLOW_CHECK(n >= 3 && eps > 1.0 / n && eps < 0.5, "normalize: eps out of range");
    const double w_max = std::max(1.0, g.max_weight()) * w_headroom;
    copies_ = std::max<int>(1, static_cast<int>(std::ceil(std::log(w_max) / std::log(1.0 + eps_))) + 1);

    // Slot vertices: one per (vertex, incident edge, copy); vertices of
    // degree <= 3 with a single copy keep their identity.
    VertexId next = 0;
    for (VertexId v : g.vertices()) next = std::max(next, v);
    ++next;

    std::vector<std::tuple<VertexId, VertexId, double>> edges;
    const double cube = std::pow(static_cast<double>(n), 3.0);
    scale_ = cube;

    std::map<VertexId, std::vector<VertexId>> slots;
    for (VertexId v : g.vertices()) {
      int need = static_cast<int>(g.degree(v)) * copies_;
      if (need <= 3 && copies_ == 1) {
        slots[v] = {v};
        norm_.rep[v] = v;
        continue;
      }
      need = std::max(need, 1);
      std::vector<VertexId> path;
      for (int i = 0; i < need; ++i) path.push_back(next++);
      for (int i = 0; i + 1 < need; ++i) edges.push_back({path[i], path[i + 1], 1.0});
      slots[v] = path;
      norm_.rep[v] = path[0];
    }

    std::map<VertexId, int> cursor;
    for (auto& [u, v, w] : g.undirected_edges()) {
      for (int j = 0; j < copies_; ++j) {
        double wj = w * std::pow(1.0 + eps_, j);
        if (j > 0 && wj > w_max * (1.0 + eps_)) break;
        VertexId a = slots[u][cursor[u]++ % slots[u].size()];
        VertexId b = slots[v][cursor[v]++ % slots[v].size()];
        double weight = std::max(1.0, std::ceil(wj * cube));
        edges.push_back({a, b, weight});
        copy_edges_[{std::min(u, v), std::max(u, v)}].push_back({a, b, wj});
      }
    }
    norm_.g = DynGraph::build(edges);
    norm_.scale = scale_;
    // Degree bound by construction: each slot vertex carries at most one
    // original edge plus two path edges.
    for (VertexId v : norm_.g.vertices())
      DECFLOW_CHECK(norm_.g.degree(v) <= 3, "normalize: degree bound violated at " << v);
  }

  const Normalized& result() const { return norm_; }
  const DynGraph& original() const { return orig_; }

  // Maps one original update into normalized-graph updates, filtering
  // deletions that would disconnect the original graph. Applies the updates
  // to both graphs and returns the normalized ops.
  std::vector<UpdateOp> apply(const UpdateOp& op) {
    std::vector<UpdateOp> out;
    auto key = std::make_pair(std::min(op.u, op.v), std::max(op.u, op.v));
    auto it = copy_edges_.find(key);
    DECFLOW_CHECK(it != copy_edges_.end(), "normalize: unknown edge (" << op.u << "," << op.v << ")");
    if (op.kind == UpdateOp::kDelete) {
      if (would_disconnect(op.u, op.v)) return {};
      orig_.delete_edge(op.u, op.v);
      for (auto& [a, b, w] : it->second) {
        norm_.g.delete_edge(a, b);
        out.push_back({UpdateOp::kDelete, a, b, 0.0});
      }
      copy_edges_.erase(it);
    } else {
      auto& copies = it->second;
      double covered = std::get<2>(copies.back()) * (1.0 + eps_);
      DECFLOW_CHECK(op.weight <= covered,
                    "normalize: increase to " << op.weight << " exceeds precompiled range");
      orig_.increase_weight(op.u, op.v, op.weight);
      std::vector<std::tuple<VertexId, VertexId, double>> keep;
      for (auto& [a, b, w] : copies) {
        if (w < op.weight && copies.size() - out.size() > 1) {
          norm_.g.delete_edge(a, b);
          out.push_back({UpdateOp::kDelete, a, b, 0.0});
        } else {
          keep.push_back({a, b, w});
        }
      }
      copies = keep;
    }
    return out;
  }

 private:
  bool would_disconnect(VertexId u, VertexId v) const {
    // BFS in the original graph avoiding the edge (u,v).
    std::set<VertexId> seen{u};
    std::vector<VertexId> stack{u};
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (auto& [w, len] : orig_.neighbors(x)) {
        if (x == u && w == v) continue;
        if (w == v) return false;
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return true;
  }

  DynGraph orig_;
  double eps_;
  int copies_ = 1;
  double scale_ = 1.0;
  Normalized norm_;
  std::map<std::pair<VertexId, VertexId>, std::vector<std::tuple<VertexId, VertexId, double>>>
      copy_edges_;
};

}  // namespace decflow

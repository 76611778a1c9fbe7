#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "decflow/flow_instance.hpp"
#include "decflow/graph.hpp"

// Seeded random instance generators shared by the test suites.

namespace decflow::testutil {

// Random graph on vertices 1..n with up to m extra edges, integer weights
// in [1, wmax]. May be disconnected.
inline DynGraph random_graph(Rng& rng, int n, int m, double wmax) {
  std::set<std::pair<VertexId, VertexId>> used;
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int i = 0; i < m; ++i) {
    VertexId u = static_cast<VertexId>(rng.uniform_int(1, n));
    VertexId v = static_cast<VertexId>(rng.uniform_int(1, n));
    if (u == v) continue;
    auto k = std::minmax(u, v);
    if (!used.insert({k.first, k.second}).second) continue;
    edges.push_back({u, v, static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(wmax)))});
  }
  std::vector<VertexId> all;
  for (int v = 1; v <= n; ++v) all.push_back(v);
  return DynGraph::build(edges, {}, {}, all);
}

// Random connected graph: a random spanning tree plus extra edges.
inline DynGraph random_connected_graph(Rng& rng, int n, int m, double wmax) {
  std::set<std::pair<VertexId, VertexId>> used;
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int v = 2; v <= n; ++v) {
    VertexId u = static_cast<VertexId>(rng.uniform_int(1, v - 1));
    used.insert({u, v});
    edges.push_back({u, v, static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(wmax)))});
  }
  for (int i = 0; i < m - (n - 1); ++i) {
    VertexId u = static_cast<VertexId>(rng.uniform_int(1, n));
    VertexId v = static_cast<VertexId>(rng.uniform_int(1, n));
    if (u == v) continue;
    auto k = std::minmax(u, v);
    if (!used.insert({k.first, k.second}).second) continue;
    edges.push_back({u, v, static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(wmax)))});
  }
  return DynGraph::build(edges);
}

inline DynGraph complete_graph(int n, double w = 1.0) {
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) edges.push_back({u, v, w});
  return DynGraph::build(edges);
}

// Two cliques of size k joined by a single edge (vertex ids 1..k, k+1..2k).
inline DynGraph dumbbell(int k) {
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (int u = 1; u <= k; ++u)
    for (int v = u + 1; v <= k; ++v) edges.push_back({u, v, 1.0});
  for (int u = k + 1; u <= 2 * k; ++u)
    for (int v = u + 1; v <= 2 * k; ++v) edges.push_back({u, v, 1.0});
  edges.push_back({k, k + 1, 1.0});
  return DynGraph::build(edges);
}

// Random vertex-capacitated s-t flow instance (edge caps infinite, costs on
// vertices only), integer capacities in [1, umax], costs in [0, cmax]. The
// terminals are fresh degree-1 vertices with large capacity and zero cost,
// matching the shape the vertex-capacitation reduction produces.
inline FlowInstance random_vertex_instance(Rng& rng, int n, int m, double umax, double cmax,
                                           double budget) {
  FlowInstance inst;
  auto core = random_connected_graph(rng, n, m, 1.0);
  auto edges = core.undirected_edges();
  VertexId s = n + 1, t = n + 2;
  edges.push_back({s, 1, 1.0});
  edges.push_back({t, n, 1.0});
  auto g = DynGraph::build(edges);
  for (VertexId v : g.vertices()) {
    g.set_vertex_cap(v, static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(umax))));
    g.set_vertex_cost(v, static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(cmax))));
  }
  g.set_vertex_cap(s, umax * n);
  g.set_vertex_cap(t, umax * n);
  g.set_vertex_cost(s, 0.0);
  g.set_vertex_cost(t, 0.0);
  inst.g = std::move(g);
  inst.s = s;
  inst.t = t;
  inst.budget = budget;
  return inst;
}

// Random mixed instance: caps/costs on both edges and vertices.
inline FlowInstance random_mixed_instance(Rng& rng, int n, int m, double umax, double cmax,
                                          double budget) {
  FlowInstance inst = random_vertex_instance(rng, n, m, umax, cmax, budget);
  for (auto& [u, v, w] : inst.g.undirected_edges()) {
    inst.edge_cap[FlowInstance::key(u, v)] =
        static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(umax)));
    inst.edge_cost[FlowInstance::key(u, v)] =
        static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(cmax)));
  }
  return inst;
}

}  // namespace decflow::testutil

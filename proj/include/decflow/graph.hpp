#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "decflow/common.hpp"

namespace decflow {

// One applied update, kept so the whole history can be replayed.
struct UpdateOp {
  enum Kind { kDelete, kIncrease } kind;
  VertexId u, v;
  double weight;  // new weight for kIncrease, ignored for kDelete
};

// Dynamic undirected weighted graph. Every undirected edge is stored as a
// pair of anti-parallel directed records with equal weight; the decremental
// contract allows only deletions and weight increases. Vertices carry
// optional capacities and costs used by the flow modules.
class DynGraph {
 public:
  DynGraph() = default;

  static DynGraph build(const std::vector<std::tuple<VertexId, VertexId, double>>& edges,
                        const std::map<VertexId, double>& caps = {},
                        const std::map<VertexId, double>& costs = {},
                        const std::vector<VertexId>& extra_vertices = {},
                        bool allow_zero = false) {
    DynGraph g;
    for (auto& [u, v, w] : edges) {
      DECFLOW_CHECK(w > 0 || (allow_zero && w == 0),
                    "build: nonpositive weight " << w << " on edge (" << u << "," << v << ")");
      DECFLOW_CHECK(u != v, "build: self-loop at " << u);
      DECFLOW_CHECK(!g.has_edge(u, v), "build: duplicate directed edge (" << u << "," << v << ")");
      g.adj_[u][v] = w;
      g.adj_[v][u] = w;
      g.vertices_.insert(u);
      g.vertices_.insert(v);
    }
    for (VertexId v : extra_vertices) g.vertices_.insert(v);
    for (auto& [v, c] : caps) {
      DECFLOW_CHECK(c >= 0, "build: negative capacity at vertex " << v);
      g.vertices_.insert(v);
      g.cap_[v] = c;
    }
    for (auto& [v, c] : costs) {
      DECFLOW_CHECK(c >= 0, "build: negative cost at vertex " << v);
      g.vertices_.insert(v);
      g.cost_[v] = c;
    }
    g.initial_edges_ = edges;
    return g;
  }

  const std::set<VertexId>& vertices() const { return vertices_; }
  std::size_t num_vertices() const { return vertices_.size(); }

  std::size_t num_edges() const {  // undirected count
    std::size_t d = 0;
    for (auto& [v, nb] : adj_) d += nb.size();
    return d / 2;
  }

  bool has_vertex(VertexId v) const { return vertices_.count(v) > 0; }
  bool has_edge(VertexId u, VertexId v) const {
    auto it = adj_.find(u);
    return it != adj_.end() && it->second.count(v) > 0;
  }

  double edge_weight(VertexId u, VertexId v) const {
    auto it = adj_.find(u);
    DECFLOW_CHECK(it != adj_.end() && it->second.count(v), "missing edge (" << u << "," << v << ")");
    return it->second.at(v);
  }

  const std::map<VertexId, double>& neighbors(VertexId v) const {
    static const std::map<VertexId, double> kEmpty;
    auto it = adj_.find(v);
    return it == adj_.end() ? kEmpty : it->second;
  }

  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  double vertex_cap(VertexId v) const {
    auto it = cap_.find(v);
    return it == cap_.end() ? kInf : it->second;
  }
  double vertex_cost(VertexId v) const {
    auto it = cost_.find(v);
    return it == cost_.end() ? 0.0 : it->second;
  }
  void set_vertex_cap(VertexId v, double c) { cap_[v] = c; }
  void set_vertex_cost(VertexId v, double c) { cost_[v] = c; }

  std::int64_t version() const { return version_; }
  const std::vector<UpdateOp>& update_log() const { return log_; }

  void delete_edge(VertexId u, VertexId v) {
    DECFLOW_CHECK(has_edge(u, v), "delete_edge: missing edge (" << u << "," << v << ")");
    adj_[u].erase(v);
    adj_[v].erase(u);
    ++version_;
    log_.push_back({UpdateOp::kDelete, u, v, 0.0});
  }

  void increase_weight(VertexId u, VertexId v, double w) {
    double cur = edge_weight(u, v);
    DECFLOW_CHECK(w >= cur, "increase_weight: decrease from " << cur << " to " << w
                                << " on edge (" << u << "," << v << ")");
    adj_[u][v] = w;
    adj_[v][u] = w;
    ++version_;
    log_.push_back({UpdateOp::kIncrease, u, v, w});
  }

  // Exact bounded multi-source Dijkstra; returns {v : dist(S,v) <= r}.
  // Ties broken towards the smallest vertex id.
  std::map<VertexId, double> bounded_ball(const std::vector<VertexId>& sources, double r) const {
    std::map<VertexId, double> dist;
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (VertexId s : sources) {
      if (!has_vertex(s)) continue;
      if (!dist.count(s)) {
        dist[s] = 0.0;
        pq.push({0.0, s});
      }
    }
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (auto& [w, len] : neighbors(v)) {
        double nd = d + len;
        if (nd > r + kEps) continue;
        auto it = dist.find(w);
        if (it == dist.end() || nd < it->second - kEps) {
          dist[w] = nd;
          pq.push({nd, w});
        }
      }
    }
    for (auto it = dist.begin(); it != dist.end();) {
      if (it->second > r + kEps)
        it = dist.erase(it);
      else
        ++it;
    }
    return dist;
  }

  // Rebuilds the graph from the initial snapshot and replays the log.
  DynGraph replay() const {
    DynGraph g = build(initial_edges_, cap_, cost_);
    for (VertexId v : vertices_) g.vertices_.insert(v);
    for (const auto& op : log_) {
      if (op.kind == UpdateOp::kDelete)
        g.delete_edge(op.u, op.v);
      else
        g.increase_weight(op.u, op.v, op.weight);
    }
    return g;
  }

  bool same_edges(const DynGraph& o) const {
    return adj_ == o.adj_;
  }

  double max_weight() const {
    double w = 0;
    for (auto& [v, nb] : adj_)
      for (auto& [u, len] : nb) w = std::max(w, len);
    return w;
  }

  std::vector<std::tuple<VertexId, VertexId, double>> undirected_edges() const {
    std::vector<std::tuple<VertexId, VertexId, double>> out;
    for (auto& [v, nb] : adj_)
      for (auto& [u, len] : nb)
        if (v < u) out.push_back({v, u, len});
    return out;
  }

 private:
  std::set<VertexId> vertices_;
  std::map<VertexId, std::map<VertexId, double>> adj_;
  std::map<VertexId, double> cap_;
  std::map<VertexId, double> cost_;
  std::int64_t version_ = 0;
  std::vector<UpdateOp> log_;
  std::vector<std::tuple<VertexId, VertexId, double>> initial_edges_;
};

// Hypergraph with an explicit bipartite incidence view. Hyperedges are kept
// in a map so ids stay stable under deletions; |H| = sum of edge sizes.
class Hypergraph {
 public:
  using EdgeId = int;

  EdgeId add_edge(const std::vector<VertexId>& members) {
    EdgeId id = next_id_++;
    auto& e = edges_[id];
    for (VertexId v : members) {
      if (std::find(e.begin(), e.end(), v) == e.end()) e.push_back(v);
      vertices_.insert(v);
    }
    std::sort(e.begin(), e.end());
    return id;
  }

  void add_vertex(VertexId v) { vertices_.insert(v); }

  void remove_edge(EdgeId id) {
    DECFLOW_CHECK(edges_.count(id), "remove_edge: unknown hyperedge " << id);
    edges_.erase(id);
  }

  // Shrink: drop v from hyperedge id (deleting one incidence-view edge).
  void remove_member(EdgeId id, VertexId v) {
    auto it = edges_.find(id);
    DECFLOW_CHECK(it != edges_.end(), "remove_member: unknown hyperedge " << id);
    auto& e = it->second;
    auto pos = std::find(e.begin(), e.end(), v);
    DECFLOW_CHECK(pos != e.end(), "remove_member: vertex " << v << " not in hyperedge " << id);
    e.erase(pos);
    if (e.empty()) edges_.erase(it);
  }

  const std::map<EdgeId, std::vector<VertexId>>& edges() const { return edges_; }
  const std::set<VertexId>& vertices() const { return vertices_; }

  std::size_t total_size() const {  // |H|
    std::size_t s = 0;
    for (auto& [id, e] : edges_) s += e.size();
    return s;
  }

  // Incidence view as (vertex, hyperedge-id) pairs; |view| == |H|.
  std::vector<std::pair<VertexId, EdgeId>> incidence_view() const {
    std::vector<std::pair<VertexId, EdgeId>> out;
    for (auto& [id, e] : edges_)
      for (VertexId v : e) out.push_back({v, id});
    return out;
  }

  bool adjacent(VertexId u, VertexId v) const {
    for (auto& [id, e] : edges_)
      if (std::binary_search(e.begin(), e.end(), u) && std::binary_search(e.begin(), e.end(), v))
        return true;
    return false;
  }

 private:
  std::set<VertexId> vertices_;
  std::map<EdgeId, std::vector<VertexId>> edges_;
  EdgeId next_id_ = 0;
};

}  // namespace decflow

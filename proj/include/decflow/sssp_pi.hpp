#pragma once

#include <map>
#include <memory>
#include <vector>

#include "decflow/es_tree.hpp"
#include "decflow/graph.hpp"

namespace decflow {

// Path-reporting SSSP over a vertex-weighted decremental graph: maintains a
// 1-edge-simple s-t path pi(s,t) of weight at most (1+eps) dist_w(s,t) and
// answers steadiness-threshold sub-path queries against that fixed path.
//
// The backend is a pair of exact ES trees over the edge-weight transform
// w''(x,y) = (w'(x)+w'(y))/2. The first instance (w'(s)=0) produces the
// distance estimate; the second shifts the source weight to
// eps * d''(t) / 4 so that no approximate shortest path revisits s, and
// its tree backs the reported path. The source shift is refreshed lazily
// when the estimate grows by a (1 + eps/4) factor, rebuilding both trees.
class SsspPi {
 public:
  using EdgeKey = EsTree::EdgeKey;

  SsspPi(const DynGraph* g, VertexId s, VertexId t, std::map<VertexId, double> weights,
         std::map<EdgeKey, int> steadiness, double eps, int tau)
      : g_(g), s_(s), t_(t), w_(std::move(weights)), sigma_(std::move(steadiness)),
        eps_(eps), tau_(tau) {
    DECFLOW_CHECK(weight_of(s_) == 0.0 && weight_of(t_) == 0.0,
                  "sssp_pi: terminal weights must be zero");
    for (auto& [e, j] : sigma_)
      DECFLOW_CHECK(j >= 1 && j <= tau_, "sssp_pi: steadiness out of [1,tau] on ("
                                             << e.first << "," << e.second << ")");
    rebuild_all();
  }

  // (1+eps)-approximate distance under the vertex weights; the first
  // instance is exact, so this is exact for the current graph.
  double distance() const { return dist_->level(t_); }
  bool connected() const { return dist_->in_ball(t_); }

  void increase_vertex_weight(VertexId v, double new_w) {
    increase_vertex_weights({{v, new_w}});
  }

  // Batched weight increases: one repair per internal tree.
  void increase_vertex_weights(const std::map<VertexId, double>& updates) {
    std::vector<EdgeKey> touched;
    for (auto& [v, new_w] : updates) {
      DECFLOW_CHECK(v != s_ && v != t_, "sssp_pi: terminal weights are fixed");
      double old = weight_of(v);
      DECFLOW_CHECK(new_w >= old - kEps, "sssp_pi: vertex weight decrease at " << v);
      if (new_w <= old) continue;
      w_[v] = new_w;
      for (auto& [u, len] : g_->neighbors(v)) touched.push_back({u, v});
    }
    if (touched.empty()) return;
    for (auto& [u, v] : touched) {
      dist_graph_.increase_weight(u, v, edge_weight(u, v, 0.0));
      path_graph_.increase_weight(u, v, edge_weight(u, v, source_shift_));
    }
    dist_->on_batch_update(touched);
    path_->on_batch_update(touched);
    maybe_refresh();
  }

  // Forwarded graph deletion (the underlying graph was already updated).
  void on_delete(VertexId u, VertexId v) {
    if (dist_graph_.has_edge(u, v)) {
      dist_graph_.delete_edge(u, v);
      dist_->on_delete(u, v);
    }
    if (path_graph_.has_edge(u, v)) {
      path_graph_.delete_edge(u, v);
      path_->on_delete(u, v);
    }
    maybe_refresh();
  }

  // The fixed associated path, as directed edges from s to t.
  std::vector<EdgeKey> path() const {
    DECFLOW_CHECK(path_->in_ball(t_), "sssp_pi: s and t are disconnected");
    return path_->tree_path(t_);
  }

  // Vertex-weight length of the associated path (tail accounting).
  double path_weight() const {
    double sum = 0;
    for (auto& [a, b] : path()) sum += weight_of(b);
    return sum;
  }

  // All occurrences of edges with steadiness <= j on pi(s,t); the path is
  // independent of j.
  std::vector<EdgeKey> threshold_subpath(int j) const {
    DECFLOW_CHECK(path_->in_ball(t_), "sssp_pi: s and t are disconnected");
    return path_->threshold_subpath(t_, j);
  }

  // Smallest steadiness on pi(s,t), probing nested thresholds.
  int min_path_steadiness() const {
    DECFLOW_CHECK(path_->in_ball(t_), "sssp_pi: s and t are disconnected");
    return path_->min_steadiness(t_);
  }

  int tau() const { return tau_; }
  double source_shift() const { return source_shift_; }
  int rebuilds() const { return rebuilds_; }

 private:
  double weight_of(VertexId v) const {
    auto it = w_.find(v);
    return it == w_.end() ? 0.0 : it->second;
  }

  double edge_weight(VertexId x, VertexId y, double shift) const {
    double wx = x == s_ ? shift : weight_of(x);
    double wy = y == s_ ? shift : weight_of(y);
    return (wx + wy) / 2.0;
  }

  DynGraph transformed(double shift) const {
    std::vector<std::tuple<VertexId, VertexId, double>> edges;
    for (auto& [u, v, len] : g_->undirected_edges())
      edges.push_back({u, v, edge_weight(u, v, shift)});
    std::vector<VertexId> all(g_->vertices().begin(), g_->vertices().end());
    return DynGraph::build(edges, {}, {}, all, /*allow_zero=*/true);
  }

  void rebuild_all() {
    dist_graph_ = transformed(0.0);
    dist_ = std::make_unique<EsTree>(&dist_graph_, std::vector<VertexId>{s_}, kInf, nullptr);
    double d2 = dist_->level(t_);
    shift_base_ = d2;
    source_shift_ = d2 == kInf ? 0.0 : eps_ * d2 / 4.0;
    path_graph_ = transformed(source_shift_);
    path_ = std::make_unique<EsTree>(&path_graph_, std::vector<VertexId>{s_}, kInf, &sigma_);
    ++rebuilds_;
  }

  void maybe_refresh() {
    double d2 = dist_->level(t_);
    if (d2 == kInf) return;
    if (shift_base_ == kInf || d2 > (1.0 + eps_ / 4.0) * shift_base_ + kEps) rebuild_all();
  }

  const DynGraph* g_;
  VertexId s_, t_;
  std::map<VertexId, double> w_;
  std::map<EdgeKey, int> sigma_;
  double eps_;
  int tau_;

  DynGraph dist_graph_, path_graph_;
  std::unique_ptr<EsTree> dist_, path_;
  double shift_base_ = kInf;
  double source_shift_ = 0.0;
  int rebuilds_ = 0;
};

}  // namespace decflow

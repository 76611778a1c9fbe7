#pragma once

#include <map>
#include <queue>
#include <set>
#include <vector>

#include "decflow/graph.hpp"

namespace decflow {

// Decremental Even-Shiloach tree over a weighted graph: maintains exact
// distances from a shrinking source set S up to a depth bound, under edge
// deletions and weight increases. Levels only ever increase; the repair
// loop touches a vertex only when some constraint on it went stale.
//
// The multi-vertex source set is encoded as a virtual root with zero-weight
// edges to every source; dropping a source deletes its virtual edge.
//
// Optional per-edge steadiness enables threshold sub-path queries: the tree
// keeps min_steadiness(v), the smallest steadiness on the root-to-v path.
class EsTree {
 public:
  using EdgeKey = std::pair<VertexId, VertexId>;  // normalized (min,max)

  static EdgeKey key(VertexId u, VertexId v) {
    return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
  }

  EsTree(const DynGraph* g, std::vector<VertexId> sources, double depth,
         const std::map<EdgeKey, int>* steadiness = nullptr)
      : g_(g), depth_(depth), steadiness_(steadiness) {
    DECFLOW_CHECK(!sources.empty(), "EsTree: empty source set");
    for (VertexId s : sources)
      if (g_->has_vertex(s)) sources_.insert(s);
    rebuild();
  }

  double level(VertexId v) const {
    auto it = level_.find(v);
    return it == level_.end() ? kInf : it->second;
  }

  bool in_ball(VertexId v) const { return level_.count(v) > 0; }
  const std::map<VertexId, double>& ball() const { return level_; }
  const std::set<VertexId>& sources() const { return sources_; }
  double depth() const { return depth_; }

  VertexId parent(VertexId v) const {
    auto it = parent_.find(v);
    return it == parent_.end() ? -1 : it->second;
  }

  // Call after the corresponding mutation was applied to the graph. All
  // repair entry points return the number of vertices whose level moved.
  int on_delete(VertexId u, VertexId v) { return repair({u, v}); }
  int on_increase(VertexId u, VertexId v) { return repair({u, v}); }

  int remove_source(VertexId v) {
    if (!sources_.erase(v)) return 0;
    return repair({v});
  }

  // Smallest steadiness on the tree path from the root set to v; +inf for
  // sources themselves (empty path).
  int min_steadiness(VertexId v) const {
    if (stead_dirty_) recompute_steadiness();
    auto it = min_stead_.find(v);
    return it == min_stead_.end() ? kNoSteadiness : it->second;
  }

  // Applies one repair for a batch of already-applied edge updates.
  int on_batch_update(const std::vector<EdgeKey>& edges) {
    std::vector<VertexId> seeds;
    for (auto& [u, v] : edges) {
      seeds.push_back(u);
      seeds.push_back(v);
    }
    return repair(std::move(seeds));
  }

  static constexpr int kNoSteadiness = INT32_MAX;

  // The current tree path from the root set to v, as directed edges.
  std::vector<EdgeKey> tree_path(VertexId v) const {
    DECFLOW_CHECK(in_ball(v), "tree_path: vertex " << v << " outside the ball");
    std::vector<EdgeKey> edges;
    VertexId cur = v;
    while (parent(cur) != -1) {
      edges.push_back({parent(cur), cur});
      cur = parent(cur);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

  // All occurrences of edges with steadiness <= j on the tree path to v.
  // The underlying path is fixed by the tree and independent of j.
  std::vector<EdgeKey> threshold_subpath(VertexId v, int j) const {
    DECFLOW_CHECK(steadiness_ != nullptr, "threshold_subpath: no steadiness assigned");
    DECFLOW_CHECK(in_ball(v), "threshold_subpath: vertex " << v << " outside the ball");
    if (j < min_steadiness(v)) return {};
    std::vector<EdgeKey> out;
    for (auto& e : tree_path(v))
      if (stead_of(e.first, e.second) <= j) out.push_back(e);
    return out;
  }

  // Full rebuild; also used at construction.
  void rebuild() {
    level_.clear();
    parent_.clear();
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (VertexId s : sources_) {
      level_[s] = 0.0;
      pq.push({0.0, s});
    }
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > level_[v] + kEps) continue;
      for (auto& [w, len] : g_->neighbors(v)) {
        double nd = d + len;
        if (nd > depth_ + kEps) continue;
        auto it = level_.find(w);
        if (it == level_.end() || nd < it->second - kEps) {
          level_[w] = nd;
          pq.push({nd, w});
        }
      }
    }
    for (auto& [v, d] : level_) parent_[v] = best_attachment(v).second;
    stead_dirty_ = true;
  }

 private:
  int stead_of(VertexId u, VertexId v) const {
    auto it = steadiness_->find(key(u, v));
    return it == steadiness_->end() ? kNoSteadiness : it->second;
  }

  // rhs(v): best attachment value from current neighbor levels (0 for
  // sources). Returns the value and the argmin parent.
  std::pair<double, VertexId> best_attachment(VertexId v) const {
    if (sources_.count(v)) return {0.0, -1};
    double best = kInf;
    VertexId arg = -1;
    for (auto& [u, len] : g_->neighbors(v)) {
      auto it = level_.find(u);
      if (it == level_.end()) continue;
      double cand = it->second + len;
      if (cand < best - kEps || (approx_eq(cand, best, cand) && (arg == -1 || u < arg))) {
        best = std::min(cand, best);
        arg = u;
      }
    }
    if (best > depth_ + kEps) return {kInf, -1};
    return {best, arg};
  }

  // Two-phase repair seeded at the endpoints of a changed edge or a dropped
  // source: an underconsistent vertex first goes to infinity (so stale
  // mutual support cannot ratchet), then settles downward Dijkstra-style.
  // Exact between updates; levels at update boundaries only increase.
  int repair(std::vector<VertexId> seeds) {
    int changed = 0;
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    auto cur_level = [&](VertexId v) {
      auto it = level_.find(v);
      return it == level_.end() ? kInf : it->second;
    };
    auto push = [&](VertexId v) {
      double g = cur_level(v);
      double rhs = best_attachment(v).first;
      if (approx_eq(g, rhs, std::min(g, rhs)) || (g == kInf && rhs == kInf)) return;
      pq.push({std::min(g, rhs), v});
    };
    for (VertexId v : seeds) push(v);
    while (!pq.empty()) {
      auto [k, v] = pq.top();
      pq.pop();
      double g = cur_level(v);
      auto [rhs, arg] = best_attachment(v);
      if (approx_eq(g, rhs, std::min(g, rhs)) || (g == kInf && rhs == kInf)) {
        if (arg != -1 && g != kInf) parent_[v] = arg;
        continue;
      }
      double key = std::min(g, rhs);
      if (k + kEps < key) {
        pq.push({key, v});  // stale entry
        continue;
      }
      if (g > rhs) {
        // Overconsistent: rhs is final here by min-key order.
        level_[v] = rhs;
        parent_[v] = arg;
      } else {
        // Underconsistent: retract, then re-settle from scratch.
        level_.erase(v);
        parent_.erase(v);
        push(v);
      }
      ++changed;
      for (auto& [w, len] : g_->neighbors(v)) push(w);
    }
    // A seed's parent edge can vanish without any level moving (an equal
    // alternative exists); refresh those pointers unconditionally.
    for (VertexId v : seeds) revalidate_parent(v);
    if (changed > 0) {
      fix_parents();
      stead_dirty_ = true;
    }
    return changed;
  }

  void revalidate_parent(VertexId v) {
    auto it = level_.find(v);
    if (it == level_.end()) return;
    auto pit = parent_.find(v);
    VertexId p = pit == parent_.end() ? -1 : pit->second;
    bool valid = p == -1 ? sources_.count(v) > 0
                         : g_->has_edge(p, v) && level_.count(p) &&
                               approx_eq(level_.at(p) + g_->edge_weight(p, v), it->second,
                                         it->second);
    if (!valid) {
      parent_[v] = best_attachment(v).second;
      stead_dirty_ = true;
    }
  }

  // After repair, any vertex whose recorded parent edge disappeared gets its
  // argmin parent refreshed (levels are already exact).
  void fix_parents() {
    for (auto& [v, lev] : level_) {
      VertexId p = parent_[v];
      if (p == -1) {
        if (!sources_.count(v)) {
          auto [rhs, arg] = best_attachment(v);
          parent_[v] = arg;
        }
        continue;
      }
      if (!g_->has_edge(p, v) || !level_.count(p) ||
          !approx_eq(level_.at(p) + g_->edge_weight(p, v), lev, lev)) {
        auto [rhs, arg] = best_attachment(v);
        parent_[v] = arg;
      }
    }
  }

  void recompute_steadiness() const {
    stead_dirty_ = false;
    min_stead_.clear();
    if (!steadiness_) return;
    // Top-down in level order.
    std::vector<std::pair<double, VertexId>> order;
    order.reserve(level_.size());
    for (auto& [v, d] : level_) order.push_back({d, v});
    std::sort(order.begin(), order.end());
    for (auto& [d, v] : order) {
      auto pit = parent_.find(v);
      VertexId p = pit == parent_.end() ? -1 : pit->second;
      if (p == -1) {
        min_stead_[v] = kNoSteadiness;
      } else {
        auto it = min_stead_.find(p);
        int pm = it == min_stead_.end() ? kNoSteadiness : it->second;
        min_stead_[v] = std::min(pm, stead_of(p, v));
      }
    }
  }

  const DynGraph* g_;
  double depth_;
  const std::map<EdgeKey, int>* steadiness_;
  std::set<VertexId> sources_;
  std::map<VertexId, double> level_;
  std::map<VertexId, VertexId> parent_;
  mutable std::map<VertexId, int> min_stead_;
  mutable bool stead_dirty_ = true;
};

}  // namespace decflow

#pragma once

#include <memory>
#include <map>
#include <set>
#include <vector>

#include "decflow/es_tree.hpp"
#include "decflow/robust_core.hpp"

namespace decflow {

struct CoveringParams {
  double d = 1.0;    // distance scale
  int k = 3;         // level parameter
  double eps = 0.1;  // accuracy (str/(4 eps) >= 6 must hold)
  double str = 32.0;
  RobustCoreParams core;
  std::uint64_t seed = 0;
  double delta_factor = 8.0;  // Delta bound = factor * k * n^{2/k} / delta_scatter

  double d_level(int ell) const { return d * std::pow(str / eps, ell); }
  double cover_radius(int ell) const { return 4.0 * d_level(ell); }
  double shell_radius(int ell) const { return (str / (4.0 * eps)) * d_level(ell); }
  double outer_shell_radius(int ell) const { return (str / (3.0 * eps)) * d_level(ell); }
};

// A levelled collection of robust cores with cover and shell balls so that
// every vertex always lies in some cover. Cores consume the lower level's
// compressed hypergraph; new cores spawn on the smallest level whose grown
// ball stays below n^{(ell+1)/k}.
class Covering {
 public:
  struct Core {
    int id = -1;
    int level = 0;
    std::vector<VertexId> init_set;
    std::unique_ptr<RobustCore> rc;
    std::unique_ptr<EsTree> cover;
    std::unique_ptr<EsTree> shell;
    bool retired = false;
  };

  struct Event {
    enum Kind { kCreated, kRetired, kShellLeft, kShellEstimate } kind;
    int core_id;
    VertexId v = -1;
    double est = 0.0;
    int level = 0;
    std::map<VertexId, double> members;  // creation-time shell estimates
  };

  Covering(const DynGraph* g, const Hypergraph* lower, CoveringParams params)
      : g_(g), lower_(lower), params_(params), rng_(params.seed) {
    ensure_coverage();
  }

  const std::vector<std::unique_ptr<Core>>& cores() const { return cores_; }
  const std::vector<Event>& events() const { return events_; }
  const CoveringParams& params() const { return params_; }

  const Core* core_by_id(int id) const {
    for (auto& c : cores_)
      if (c->id == id) return c.get();
    return nullptr;
  }

  // Lifetime outer-shell participation per vertex (for the Delta invariant).
  const std::map<VertexId, int>& outer_shell_counts() const { return outer_counts_; }
  double delta_bound() const {
    double n = static_cast<double>(g_->num_vertices());
    return params_.delta_factor * params_.k * std::pow(n, 2.0 / params_.k) /
           params_.core.delta_scatter;
  }

  // Forward one graph update (already applied to g) together with the lower
  // compressed view's event translations for this step.
  void on_g_update(const UpdateOp& op) {
    for (auto& c : cores_) {
      if (c->retired) continue;
      std::vector<VertexId> evicted;
      int moved = 0;
      if (op.kind == UpdateOp::kDelete) {
        evicted = c->rc->on_g_edge_deleted(op.u, op.v);
        moved += c->cover->on_delete(op.u, op.v);
        moved += c->shell->on_delete(op.u, op.v);
      } else {
        evicted = c->rc->on_g_edge_increased(op.u, op.v, op.weight);
        moved += c->cover->on_increase(op.u, op.v);
        moved += c->shell->on_increase(op.u, op.v);
      }
      for (VertexId v : evicted) {
        moved += c->cover->remove_source(v);
        moved += c->shell->remove_source(v);
      }
      if (moved > 0 || !evicted.empty() || c->rc->core().empty()) dirty_.insert(c->id);
    }
    settle();
  }

  void on_lower_hyperedge_removed(Hypergraph::EdgeId eid) {
    for (auto& c : cores_)
      if (!c->retired) drain_evictions(*c, c->rc->on_hyperedge_removed(eid));
    settle();
  }

  void on_lower_hyperedge_shrunk(Hypergraph::EdgeId eid, VertexId v) {
    for (auto& c : cores_)
      if (!c->retired) drain_evictions(*c, c->rc->on_hyperedge_shrunk(eid, v));
    settle();
  }

  void on_lower_hyperedge_inserted(Hypergraph::EdgeId eid, const std::vector<VertexId>& members) {
    for (auto& c : cores_)
      if (!c->retired) c->rc->on_hyperedge_inserted(eid, members);
  }

  // Idempotent: retires empty cores, refreshes shell snapshots, spawns cores
  // until everything is covered again.
  void settle() {
    retire_empty();
    refresh_shells();
    ensure_coverage();
  }

  bool covered(VertexId v) const {
    for (auto& c : cores_) {
      if (c->retired) continue;
      double r = (1.0 + params_.eps) * params_.cover_radius(c->level);
      if (c->cover->level(v) <= r + kEps) return true;
    }
    return false;
  }

  // Members of shell(C): estimate <= (1+eps) * shell radius.
  std::map<VertexId, double> shell_members(const Core& c) const {
    std::map<VertexId, double> out;
    double r = (1.0 + params_.eps) * params_.shell_radius(c.level);
    for (auto& [v, est] : c.shell->ball())
      if (est <= r + kEps) out[v] = est;
    return out;
  }

 private:
  void drain_evictions(Core& c, const std::vector<VertexId>& evicted) {
    int moved = 0;
    for (VertexId v : evicted) {
      moved += c.cover->remove_source(v);
      moved += c.shell->remove_source(v);
    }
    if (moved > 0 || !evicted.empty() || c.rc->core().empty()) dirty_.insert(c.id);
  }

  void retire_empty() {
    for (auto& c : cores_) {
      if (c->retired || !c->rc->core().empty()) continue;
      c->retired = true;
      events_.push_back({Event::kRetired, c->id, -1, 0.0, c->level, {}});
      c->rc.reset();
      c->cover.reset();
      c->shell.reset();
      shell_snapshot_.erase(c->id);
      for (auto& [v, est] : cover_snapshot_[c->id])
        if (--covered_count_[v] == 0) maybe_uncovered_.insert(v);
      cover_snapshot_.erase(c->id);
      dirty_.erase(c->id);
    }
  }

  std::map<VertexId, double> cover_members(const Core& c) const {
    std::map<VertexId, double> out;
    double r = (1.0 + params_.eps) * params_.cover_radius(c.level);
    for (auto& [v, est] : c.cover->ball())
      if (est <= r + kEps) out[v] = est;
    return out;
  }

  void refresh_shells() {
    for (int id : dirty_) {
      const Core* cp = core_by_id(id);
      if (!cp || cp->retired) continue;
      const Core& c = *cp;
      auto now = shell_members(c);
      auto& snap = shell_snapshot_[c.id];
      for (auto& [v, est] : snap) {
        auto it = now.find(v);
        if (it == now.end())
          events_.push_back({Event::kShellLeft, c.id, v, 0.0, c.level, {}});
        else if (it->second > est + kEps)
          events_.push_back({Event::kShellEstimate, c.id, v, it->second, c.level, {}});
      }
      snap = std::move(now);
      // Cover diff drives the coverage counts.
      auto nowc = cover_members(c);
      auto& snapc = cover_snapshot_[c.id];
      for (auto& [v, est] : snapc) {
        if (!nowc.count(v) && --covered_count_[v] == 0) maybe_uncovered_.insert(v);
      }
      snapc = std::move(nowc);
    }
    dirty_.clear();
  }

  void ensure_coverage() {
    const double n = static_cast<double>(g_->num_vertices());
    if (!bootstrapped_) {
      for (VertexId v : g_->vertices()) maybe_uncovered_.insert(v);
      bootstrapped_ = true;
    }
    while (!maybe_uncovered_.empty()) {
      VertexId v = *maybe_uncovered_.begin();
      auto it = covered_count_.find(v);
      if (it != covered_count_.end() && it->second > 0) {
        maybe_uncovered_.erase(maybe_uncovered_.begin());
        continue;
      }
      int ell = 0;
      for (; ell + 1 < params_.k; ++ell) {
        auto ball = g_->bounded_ball({v}, params_.d_level(ell + 1));
        if (static_cast<double>(ball.size()) <=
            std::pow(n, static_cast<double>(ell + 1) / params_.k))
          break;
      }
      spawn(v, ell);
    }
  }

  void spawn(VertexId center, int ell) {
    auto ball = g_->bounded_ball({center}, params_.d_level(ell));
    auto c = std::make_unique<Core>();
    c->id = next_id_++;
    c->level = ell;
    for (auto& [v, d] : ball) c->init_set.push_back(v);
    double dl = params_.d_level(ell);
    c->rc = std::make_unique<RobustCore>(g_, c->init_set, dl, lower_, params_.d,
                                         rng_.next_u64(), params_.core);
    std::vector<VertexId> sources(c->rc->core().begin(), c->rc->core().end());
    DECFLOW_CHECK(!sources.empty(), "Covering: newborn core is already scattered");
    c->cover = std::make_unique<EsTree>(g_, sources, (1.0 + params_.eps) * params_.cover_radius(ell));
    c->shell = std::make_unique<EsTree>(g_, sources, (1.0 + params_.eps) * params_.shell_radius(ell));
    for (auto& [v, d] : g_->bounded_ball(c->init_set, params_.outer_shell_radius(ell)))
      outer_counts_[v] += 1;
    auto members = shell_members(*c);
    events_.push_back({Event::kCreated, c->id, center, 0.0, ell, members});
    shell_snapshot_[c->id] = std::move(members);
    auto covers = cover_members(*c);
    for (auto& [v, est] : covers) {
      ++covered_count_[v];
      maybe_uncovered_.erase(v);
    }
    cover_snapshot_[c->id] = std::move(covers);
    cores_.push_back(std::move(c));
  }

  const DynGraph* g_;
  const Hypergraph* lower_;
  CoveringParams params_;
  Rng rng_;
  int next_id_ = 0;
  std::vector<std::unique_ptr<Core>> cores_;
  std::vector<Event> events_;
  std::map<int, std::map<VertexId, double>> shell_snapshot_;
  std::map<int, std::map<VertexId, double>> cover_snapshot_;
  std::map<VertexId, int> covered_count_;
  std::set<VertexId> maybe_uncovered_;
  std::set<int> dirty_;
  bool bootstrapped_ = false;
  std::map<VertexId, int> outer_counts_;
};

// Weighted covering-compressed graph: a bipartite view with one node per
// core, an edge (v, C) for every shell member, of weight
// roundup(str * d_level + shell-estimate, ceil(eps d)). Also maintains the
// unweighted hypergraph view consumed as the next level's compressed graph.
class CoveringCompressed {
 public:
  struct WeightedEdge {
    VertexId v;
    int core_id;
    double w;
  };

  struct Change {
    enum Kind { kInsert, kIncrease, kDelete } kind;
    VertexId v;
    int core_id;
    double w = 0.0;
  };

  explicit CoveringCompressed(const Covering* covering) : covering_(covering) {
    grid_ = std::max(1.0, std::ceil(covering->params().eps * covering->params().d));
    sync();
  }

  double grid() const { return grid_; }
  const Hypergraph& hypergraph() const { return h_; }
  const std::map<std::pair<VertexId, int>, double>& weights() const { return w_; }

  struct HyperEvent {
    enum Kind { kRemoved, kShrunk, kInserted } kind;
    Hypergraph::EdgeId eid;
    VertexId v = -1;
    std::vector<VertexId> members;
  };

  // Catches up with the covering's event log; returns weighted-edge changes
  // (for the emulator) and hypergraph events (for the next level).
  std::pair<std::vector<Change>, std::vector<HyperEvent>> sync() {
    std::vector<Change> changes;
    std::vector<HyperEvent> hevents;
    const auto& events = covering_->events();
    for (; cursor_ < events.size(); ++cursor_) {
      const auto& e = events[cursor_];
      switch (e.kind) {
        case Covering::Event::kCreated: {
          std::vector<VertexId> vs;
          for (auto& [v, est] : e.members) vs.push_back(v);
          if (!vs.empty()) {
            auto eid = h_.add_edge(vs);
            hyperedge_of_[e.core_id] = eid;
            hevents.push_back({HyperEvent::kInserted, eid, -1, vs});
          }
          for (auto& [v, est] : e.members) {
            double w = weight_of(e.level, est);
            w_[{v, e.core_id}] = w;
            changes.push_back({Change::kInsert, v, e.core_id, w});
          }
          break;
        }
        case Covering::Event::kRetired: {
          auto it = hyperedge_of_.find(e.core_id);
          if (it != hyperedge_of_.end()) {
            hevents.push_back({HyperEvent::kRemoved, it->second, -1, {}});
            h_.remove_edge(it->second);
            hyperedge_of_.erase(it);
          }
          for (auto wit = w_.begin(); wit != w_.end();) {
            if (wit->first.second == e.core_id) {
              changes.push_back({Change::kDelete, wit->first.first, e.core_id, 0.0});
              wit = w_.erase(wit);
            } else {
              ++wit;
            }
          }
          break;
        }
        case Covering::Event::kShellLeft: {
          auto it = hyperedge_of_.find(e.core_id);
          if (it != hyperedge_of_.end()) {
            hevents.push_back({HyperEvent::kShrunk, it->second, e.v, {}});
            h_.remove_member(it->second, e.v);
            if (!h_.edges().count(it->second)) hyperedge_of_.erase(it);
          }
          auto wit = w_.find({e.v, e.core_id});
          if (wit != w_.end()) {
            changes.push_back({Change::kDelete, e.v, e.core_id, 0.0});
            w_.erase(wit);
          }
          break;
        }
        case Covering::Event::kShellEstimate: {
          auto wit = w_.find({e.v, e.core_id});
          if (wit == w_.end()) break;
          double w = weight_of(e.level, e.est);
          if (w > wit->second + kEps) {
            wit->second = w;
            changes.push_back({Change::kIncrease, e.v, e.core_id, w});
          }
          break;
        }
      }
    }
    return {changes, hevents};
  }

 private:
  double weight_of(int level, double est) const {
    return round_up_multiple(covering_->params().str * covering_->params().d_level(level) + est,
                             grid_);
  }

  const Covering* covering_;
  double grid_ = 1.0;
  Hypergraph h_;
  std::map<int, Hypergraph::EdgeId> hyperedge_of_;
  std::map<std::pair<VertexId, int>, double> w_;
  std::size_t cursor_ = 0;
};

}  // namespace decflow

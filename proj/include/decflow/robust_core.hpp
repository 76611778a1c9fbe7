#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "decflow/es_tree.hpp"
#include "decflow/expander.hpp"
#include "decflow/graph.hpp"

namespace decflow {

struct RobustCoreParams {
  double phi_cmg = 0.05;         // expansion handed to pruning
  double eps_wit = 0.1;          // witness cut balance
  double delta_scatter = 0.025;  // advertised scattering, <= eps_wit / 4
  double str = 64.0;             // advertised stretch (checked by tests)
  double cap_budget_factor = 32.0;
  int max_phases = 1000;
  int max_doublings = 4000;
  int max_witness_retries = 8;
  int rounds_factor = 4;
  double rho = 0.34;
};

// Maintains a decremental core K inside K_init over a decremental graph,
// given an externally maintained compressed hypergraph of scale d. The
// heavy-path-augmented hypergraph is built once over the frozen ball
// B_init = ball(K_init, 32 D lg n); capacities kappa undergo congestion
// balancing (doubling on sparse cuts) until a witness expander embeds, the
// witness is pruned as its embedding decays, and vertices whose distance
// estimate from the pruned set exceeds (1+0.1) 4D leave K.
class RobustCore {
 public:
  RobustCore(const DynGraph* g, std::vector<VertexId> k_init, double D,
             const Hypergraph* compressed, double d_scale, std::uint64_t seed,
             RobustCoreParams params = {}, std::vector<std::string>* trace = nullptr)
      : g_(g),
        k_init_(k_init.begin(), k_init.end()),
        k_init_vec_(std::move(k_init)),
        big_d_(D),
        d_scale_(d_scale),
        rng_(seed),
        params_(params),
        trace_(trace) {
    DECFLOW_CHECK(!k_init_vec_.empty(), "RobustCore: empty initial core");
    DECFLOW_CHECK(params_.delta_scatter <= params_.eps_wit / 4.0 + kEps,
                  "RobustCore: delta_scatter must be at most eps_wit/4");
    const double lgn = std::log2(std::max<double>(2.0, g->num_vertices()));
    ball_radius_ = 32.0 * big_d_ * lgn;
    {
      // The covering hands balls of radius D, so the workable precondition
      // is diam(K_init) <= 2D.
      for (VertexId v : k_init_vec_) {
        auto from_v = g_->bounded_ball({v}, 2.0 * big_d_);
        for (VertexId w : k_init_vec_)
          DECFLOW_CHECK(from_v.count(w),
                        "RobustCore: diam(K_init) exceeds 2D between " << v << " and " << w);
      }
      auto ball = g_->bounded_ball(k_init_vec_, ball_radius_);
      for (auto& [v, dist] : ball) b_init_.insert(v);
    }
    build_hhat(compressed);
    init_kappa();
    k_ = k_init_;
    advance();
    if (terminated_) k_.clear();
  }

  // Weight increases are normally compiled away upstream; handled here by
  // retiring the old heavy path and installing one for the new weight.
  std::vector<VertexId> on_g_edge_increased(VertexId u, VertexId v, double new_w) {
    if (terminated_) return {};
    if (!b_init_.count(u) && !b_init_.count(v)) return {};
    std::vector<std::tuple<VertexId, VertexId, std::int64_t>> witness_dels;
    auto it = heavy_.find(ekey(u, v));
    if (it != heavy_.end()) {
      for (auto eid : it->second) drop_hhat_edge(eid, witness_dels);
      heavy_.erase(it);
    }
    if (b_init_.count(u) && b_init_.count(v) && new_w > d_scale_ + kEps &&
        new_w <= ball_radius_ + kEps)
      add_heavy_path(u, v, new_w);
    if (ball_) ball_->on_increase(u, v);
    return settle(witness_dels);
  }

  const std::set<VertexId>& core() const { return k_; }
  bool terminated() const { return terminated_; }
  const CapacityFn& kappa() const { return kappa_; }
  double gamma_size() const { return gamma_size_; }
  const std::set<VertexId>& ball_init() const { return b_init_; }
  std::size_t hhat_vertices() const { return vhat_.size(); }
  int phases() const { return phases_; }
  int doublings() const { return doublings_; }
  const std::set<VertexId>& pruned_survivors() const {
    static const std::set<VertexId> kEmpty;
    return pruner_ ? pruner_->X() : kEmpty;
  }

  // Capacity budget the tests check kappa(V-hat) against.
  double cap_budget() const {
    const double lgn = std::log2(std::max<double>(2.0, g_->num_vertices()));
    return params_.cap_budget_factor * static_cast<double>(k_init_vec_.size()) *
           (big_d_ / d_scale_) * lgn * lgn;
  }

  // --- update notifications (call after the graph mutation) ---------------

  std::vector<VertexId> on_g_edge_deleted(VertexId u, VertexId v) {
    if (terminated_) return {};
    if (!b_init_.count(u) && !b_init_.count(v)) return {};  // dropped at the boundary
    std::vector<std::tuple<VertexId, VertexId, std::int64_t>> witness_dels;
    auto it = heavy_.find(ekey(u, v));
    if (it != heavy_.end()) {
      for (auto eid : it->second) drop_hhat_edge(eid, witness_dels);
      heavy_.erase(it);
    }
    if (ball_) {
      ball_->on_delete(u, v);
    }
    return settle(witness_dels);
  }

  std::vector<VertexId> on_hyperedge_removed(Hypergraph::EdgeId compressed_id) {
    if (terminated_) return {};
    auto it = comp_to_hhat_.find(compressed_id);
    if (it == comp_to_hhat_.end()) return {};
    std::vector<std::tuple<VertexId, VertexId, std::int64_t>> witness_dels;
    drop_hhat_edge(it->second, witness_dels);
    comp_to_hhat_.erase(it);
    return settle(witness_dels);
  }

  std::vector<VertexId> on_hyperedge_shrunk(Hypergraph::EdgeId compressed_id, VertexId v) {
    if (terminated_) return {};
    auto it = comp_to_hhat_.find(compressed_id);
    if (it == comp_to_hhat_.end()) return {};
    auto hid = it->second;
    if (!b_init_.count(v)) return {};
    std::vector<std::tuple<VertexId, VertexId, std::int64_t>> witness_dels;
    drop_incidence(hid, v, witness_dels);
    auto members = hhat_.edges().count(hid) ? hhat_.edges().at(hid) : std::vector<VertexId>{};
    if (std::find(members.begin(), members.end(), v) != members.end()) {
      hhat_.remove_member(hid, v);
      if (!hhat_.edges().count(hid)) comp_to_hhat_.erase(compressed_id);
    }
    return settle(witness_dels);
  }

  void on_hyperedge_inserted(Hypergraph::EdgeId compressed_id,
                             const std::vector<VertexId>& members) {
    if (terminated_) return;
    std::vector<VertexId> inside;
    for (VertexId v : members)
      if (b_init_.count(v)) inside.push_back(v);
    if (inside.size() < 2) return;
    auto hid = hhat_.add_edge(inside);
    comp_to_hhat_[compressed_id] = hid;
  }

 private:
  static std::pair<VertexId, VertexId> ekey(VertexId u, VertexId v) {
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
  }

  void trace(const std::string& line) {
    if (trace_) trace_->push_back(line);
  }

  void build_hhat(const Hypergraph* compressed) {
    for (VertexId v : b_init_) {
      hhat_.add_vertex(v);
      vhat_.insert(v);
    }
    for (auto& [eid, members] : compressed->edges()) {
      std::vector<VertexId> inside;
      for (VertexId v : members)
        if (b_init_.count(v)) inside.push_back(v);
      if (inside.size() < 2) continue;
      comp_to_hhat_[eid] = hhat_.add_edge(inside);
    }
    // Heavy paths: one unit-edge chain per G-edge of weight in
    // (d, 32 D lg n] inside the ball.
    next_fresh_ = 0;
    for (VertexId v : g_->vertices()) next_fresh_ = std::max(next_fresh_, v);
    ++next_fresh_;
    for (auto& [u, v, w] : g_->undirected_edges()) {
      if (!b_init_.count(u) || !b_init_.count(v)) continue;
      if (w <= d_scale_ + kEps || w > ball_radius_ + kEps) continue;
      add_heavy_path(u, v, w);
    }
  }

  void add_heavy_path(VertexId u, VertexId v, double w) {
    int hops = static_cast<int>(std::ceil(w / d_scale_ - kEps));
    VertexId prev = u;
    std::vector<Hypergraph::EdgeId> ids;
    for (int i = 1; i < hops; ++i) {
      VertexId mid = next_fresh_++;
      vhat_.insert(mid);
      hhat_.add_vertex(mid);
      // Late internal vertices keep the base capacity; kappa stays monotone.
      if (!kappa_.val_z.count(mid))
        kappa_.val_z[mid] = 4 * static_cast<std::int64_t>(k_init_vec_.size());
      ids.push_back(hhat_.add_edge({prev, mid}));
      prev = mid;
    }
    ids.push_back(hhat_.add_edge({prev, v}));
    heavy_[ekey(u, v)] = ids;
  }

  void init_kappa() {
    kappa_.z = static_cast<std::int64_t>(vhat_.size());
    gamma_size_ = static_cast<double>(vhat_.size()) / (4.0 * k_init_vec_.size());
    for (VertexId v : vhat_) {
      if (k_init_.count(v))
        kappa_.val_z[v] = 2 * kappa_.z;
      else
        kappa_.val_z[v] = 4 * static_cast<std::int64_t>(k_init_vec_.size());
    }
  }

  void drop_hhat_edge(Hypergraph::EdgeId hid,
                      std::vector<std::tuple<VertexId, VertexId, std::int64_t>>& witness_dels) {
    auto pit = paths_by_edge_.find(hid);
    if (pit != paths_by_edge_.end()) {
      for (int idx : pit->second) invalidate_path(idx, witness_dels);
      paths_by_edge_.erase(pit);
    }
    if (hhat_.edges().count(hid)) hhat_.remove_edge(hid);
  }

  void drop_incidence(Hypergraph::EdgeId hid, VertexId v,
                      std::vector<std::tuple<VertexId, VertexId, std::int64_t>>& witness_dels) {
    auto pit = paths_by_edge_.find(hid);
    if (pit == paths_by_edge_.end()) return;
    std::vector<int> still;
    for (int idx : pit->second) {
      if (path_uses_incidence(idx, hid, v))
        invalidate_path(idx, witness_dels);
      else if (!dead_paths_.count(idx))
        still.push_back(idx);
    }
    pit->second = std::move(still);
  }

  bool path_uses_incidence(int idx, Hypergraph::EdgeId hid, VertexId v) const {
    const auto& p = phase_paths_[idx];
    for (std::size_t i = 0; i < p.hyperedges.size(); ++i) {
      if (p.hyperedges[i] != hid) continue;
      if (p.vertices[i] == v || (i + 1 < p.vertices.size() && p.vertices[i + 1] == v)) return true;
    }
    return false;
  }

  void invalidate_path(int idx,
                       std::vector<std::tuple<VertexId, VertexId, std::int64_t>>& witness_dels) {
    if (dead_paths_.count(idx)) return;
    dead_paths_.insert(idx);
    const auto& p = phase_paths_[idx];
    witness_dels.push_back({p.a, p.b, path_copies_[idx]});
  }

  // Post-update settlement: feed witness deletions to the pruner, shrink the
  // eviction ball's source set, evict, and start a new phase if X collapsed.
  std::vector<VertexId> settle(
      const std::vector<std::tuple<VertexId, VertexId, std::int64_t>>& witness_dels) {
    std::vector<VertexId> evicted;
    if (pruner_ && !witness_dels.empty()) {
      auto peeled = pruner_->on_delete_batch(witness_dels);
      for (VertexId v : peeled)
        if (ball_) ball_->remove_source(v);
    }
    evict(evicted);
    if (!terminated_ && pruner_ &&
        static_cast<double>(pruner_->X().size()) < static_cast<double>(k_init_vec_.size()) / 2.0) {
      advance();
      evict(evicted);
    }
    return evicted;
  }

  void evict(std::vector<VertexId>& evicted) {
    if (terminated_) {
      for (VertexId v : k_) evicted.push_back(v);
      k_.clear();
      return;
    }
    if (!ball_) return;
    const double cutoff = 1.1 * 4.0 * big_d_;
    std::vector<VertexId> out;
    for (VertexId v : k_)
      if (ball_->level(v) > cutoff + kEps) out.push_back(v);
    for (VertexId v : out) {
      k_.erase(v);
      evicted.push_back(v);
      std::ostringstream os;
      os << "evict " << v;
      trace(os.str());
    }
  }

  // One outer-loop pass: certify, balance until a witness embeds, restart
  // pruning and the eviction ball.
  void advance() {
    for (int retry = 0;; ++retry) {
      DECFLOW_CHECK(phases_ < params_.max_phases, "RobustCore: phase budget exhausted");
      auto cert = certify_core(*g_, k_init_vec_, 2.0 * big_d_, params_.eps_wit / 2.0);
      if (cert.scattered) {
        terminated_ = true;
        pruner_.reset();
        ball_.reset();
        trace("terminate scattered");
        return;
      }
      ++phases_;
      {
        std::ostringstream os;
        os << "phase " << phases_ << " core " << cert.core.size();
        trace(os.str());
      }
      WitnessParams wp;
      wp.phi = params_.phi_cmg;
      wp.eps_wit = params_.eps_wit;
      wp.rho = params_.rho;
      wp.rounds_factor = params_.rounds_factor;
      std::optional<Witness> witness;
      for (;;) {
        auto res = embed_witness(hhat_, cert.core, kappa_, rng_, wp);
        if (res.witness) {
          witness = std::move(res.witness);
          break;
        }
        DECFLOW_CHECK(doublings_ < params_.max_doublings,
                      "RobustCore: doubling budget exhausted");
        ++doublings_;
        const auto& cut = *res.cut;
        for (VertexId v : cut.S) kappa_.double_at(v);
        // Side-condition update: cap any single vertex at half the total by
        // mirroring the largest cut capacity onto one more vertex.
        VertexId w = -1;
        std::int64_t best = -1;
        for (VertexId v : cut.S)
          if (kappa_.scaled(v) > best) {
            best = kappa_.scaled(v);
            w = v;
          }
        VertexId w2 = -1;
        for (VertexId v : vhat_)
          if (v != w) {
            w2 = v;
            break;
          }
        if (w2 != -1 && kappa_.scaled(w2) < best) kappa_.val_z[w2] = best;
        std::ostringstream os;
        os << "double " << cut.S.size() << " kappa_s " << fmt_num(cut.kappa_s);
        trace(os.str());
      }

      // Multigraph lift: one batch of copies per surviving witness path.
      phase_paths_ = std::move(witness->paths);
      dead_paths_.clear();
      path_copies_.assign(phase_paths_.size(), 1);
      paths_by_edge_.clear();
      std::vector<std::tuple<VertexId, VertexId, std::int64_t>> multi;
      for (std::size_t i = 0; i < phase_paths_.size(); ++i) {
        const auto& p = phase_paths_[i];
        double wval = static_cast<double>(p.val_z) / kappa_.z;
        std::int64_t copies = std::max<std::int64_t>(1, std::llround(wval / gamma_size_));
        path_copies_[i] = copies;
        multi.push_back({p.a, p.b, copies});
        for (auto eid : p.hyperedges) paths_by_edge_[eid].push_back(static_cast<int>(i));
      }
      pruner_.emplace(witness->vertices, multi, params_.phi_cmg);
      if (static_cast<double>(pruner_->X().size()) <
          static_cast<double>(k_init_vec_.size()) / 2.0) {
        DECFLOW_CHECK(retry < params_.max_witness_retries,
                      "RobustCore: witness repeatedly too small");
        continue;
      }
      std::vector<VertexId> sources(pruner_->X().begin(), pruner_->X().end());
      ball_.emplace(g_, sources, 1.1 * 4.0 * big_d_);
      return;
    }
  }

  const DynGraph* g_;
  std::set<VertexId> k_init_;
  std::vector<VertexId> k_init_vec_;
  double big_d_;
  double d_scale_;
  Rng rng_;
  RobustCoreParams params_;
  std::vector<std::string>* trace_;

  double ball_radius_ = 0.0;
  VertexId next_fresh_ = 0;
  std::set<VertexId> b_init_;
  std::set<VertexId> vhat_;
  Hypergraph hhat_;
  std::map<Hypergraph::EdgeId, Hypergraph::EdgeId> comp_to_hhat_;
  std::map<std::pair<VertexId, VertexId>, std::vector<Hypergraph::EdgeId>> heavy_;

  CapacityFn kappa_;
  double gamma_size_ = 1.0;
  std::set<VertexId> k_;
  bool terminated_ = false;
  int phases_ = 0;
  int doublings_ = 0;

  std::vector<EmbPath> phase_paths_;
  std::vector<std::int64_t> path_copies_;
  std::map<Hypergraph::EdgeId, std::vector<int>> paths_by_edge_;
  std::set<int> dead_paths_;
  std::optional<Pruner> pruner_;
  std::optional<EsTree> ball_;
};

// Trivial compressed graph of a bounded-degree weighted graph: one 2-ary
// hyperedge per edge of weight at most one. Deletions and weight increases
// past 1 translate to hyperedge removals.
class UnitCompressed {
 public:
  explicit UnitCompressed(const DynGraph& g) {
    for (VertexId v : g.vertices()) h_.add_vertex(v);
    for (auto& [u, v, w] : g.undirected_edges())
      if (w <= 1.0 + kEps) ids_[{u, v}] = h_.add_edge({u, v});
  }

  const Hypergraph& hypergraph() const { return h_; }

  // Returns the removed hyperedge id, if the edge was present.
  std::optional<Hypergraph::EdgeId> on_delete(VertexId u, VertexId v) {
    auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    auto it = ids_.find(key);
    if (it == ids_.end()) return std::nullopt;
    auto id = it->second;
    h_.remove_edge(id);
    ids_.erase(it);
    return id;
  }

  std::optional<Hypergraph::EdgeId> on_increase(VertexId u, VertexId v, double new_w) {
    if (new_w <= 1.0 + kEps) return std::nullopt;
    return on_delete(u, v);
  }

 private:
  Hypergraph h_;
  std::map<std::pair<VertexId, VertexId>, Hypergraph::EdgeId> ids_;
};

}  // namespace decflow

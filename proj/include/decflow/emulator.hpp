#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "decflow/covering.hpp"

namespace decflow {

// ---------------------------------------------------------------------------
// Monotone ES tree over an explicit emulator graph. Estimates only ever
// increase; insertions are applied to the graph without touching existing
// estimates (freshly inserted nodes are initialized once, at the end of the
// insertion sweep). Estimates above 2D snap to infinity.

class MonotoneEs {
 public:
  using Node = std::int64_t;
  static constexpr Node kSource = -1;

  struct Update {
    enum Kind { kInsert, kIncrease, kDelete } kind;
    Node u, v;
    double w = 0.0;
  };

  explicit MonotoneEs(double big_d) : cap_(2.0 * big_d) {}

  // Builds estimates from scratch over the given edges (exact distances).
  void init(const std::vector<std::tuple<Node, Node, double>>& edges) {
    adj_.clear();
    est_.clear();
    adj_[kSource];
    est_[kSource] = 0.0;
    for (auto& [u, v, w] : edges) {
      adj_[u][v] = w;
      adj_[v][u] = w;
    }
    using Item = std::pair<double, Node>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, kSource});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      auto it = est_.find(v);
      if (it != est_.end() && d > it->second + kEps) continue;
      for (auto& [w, len] : adj_[v]) {
        double nd = d + len;
        auto jt = est_.find(w);
        if (jt == est_.end() || nd < jt->second - kEps) {
          est_[w] = nd;
          pq.push({nd, w});
        }
      }
    }
    for (auto& [v, nb] : adj_)
      if (!est_.count(v)) est_[v] = kInf;
    for (auto& [v, d] : est_)
      if (d > cap_ + kEps) est_[v] = kInf;
  }

  double estimate(Node v) const {
    auto it = est_.find(v);
    return it == est_.end() ? kInf : it->second;
  }

  // Applies one batch; insertions are handled first regardless of order.
  void apply_batch(const std::vector<Update>& batch) {
    std::set<Node> fresh;
    for (auto& up : batch) {
      if (up.kind != Update::kInsert) continue;
      for (Node x : {up.u, up.v})
        if (!est_.count(x)) {
          fresh.insert(x);
          est_[x] = kInf;
        }
      adj_[up.u][up.v] = up.w;
      adj_[up.v][up.u] = up.w;
    }
    // Fresh nodes start at their best attachment; existing estimates are
    // left alone (they may only increase).
    for (Node x : fresh) {
      double best = proposal(x);
      est_[x] = best > cap_ + kEps ? kInf : best;
    }
    std::vector<Node> seeds;
    for (auto& up : batch) {
      if (up.kind == Update::kInsert) continue;
      if (up.kind == Update::kIncrease) {
        adj_[up.u][up.v] = up.w;
        adj_[up.v][up.u] = up.w;
      } else {
        adj_[up.u].erase(up.v);
        adj_[up.v].erase(up.u);
      }
      seeds.push_back(up.u);
      seeds.push_back(up.v);
    }
    update_levels(seeds);
  }

  const std::map<Node, double>& estimates() const { return est_; }

 private:
  double proposal(Node u) const {
    if (u == kSource) return 0.0;
    double best = kInf;
    auto it = adj_.find(u);
    if (it == adj_.end()) return best;
    for (auto& [v, w] : it->second) {
      auto jt = est_.find(v);
      if (jt == est_.end() || jt->second == kInf) continue;
      best = std::min(best, jt->second + w);
    }
    return best;
  }

  // Work queue keyed by (proposed estimate, node id); level updates only
  // ever raise estimates.
  void update_levels(const std::vector<Node>& seeds) {
    using Item = std::pair<double, Node>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    auto consider = [&](Node u) {
      if (u == kSource) return;
      double cur = estimate(u);
      double prop = proposal(u);
      if (prop > cur + kEps && cur != kInf) pq.push({prop, u});
    };
    for (Node u : seeds) consider(u);
    while (!pq.empty()) {
      auto [k, u] = pq.top();
      pq.pop();
      double cur = estimate(u);
      if (cur == kInf) continue;
      double prop = proposal(u);
      if (prop <= cur + kEps) continue;
      if (prop > k + kEps) {
        pq.push({prop, u});
        continue;
      }
      est_[u] = prop > cap_ + kEps ? kInf : prop;
      auto it = adj_.find(u);
      if (it != adj_.end())
        for (auto& [v, w] : it->second) consider(v);
    }
  }

  double cap_;
  std::map<Node, std::map<Node, double>> adj_;
  std::map<Node, double> est_;
};

// ---------------------------------------------------------------------------
// The emulator: regular vertices are the initial ball around the sources,
// core vertices come and go with the covering, and a dummy source carries
// the near-ball estimates. All weights live on the ceil(eps d) grid.

class Emulator {
 public:
  using Node = MonotoneEs::Node;

  static Node vertex_node(VertexId v) { return v; }
  static Node core_node(int core_id) { return -static_cast<Node>(core_id) - 2; }

  Emulator(const DynGraph* g, const std::vector<VertexId>& sources, double d, double big_d,
           double eps)
      : g_(g), d_(d), big_d_(big_d), eps_(eps) {
    grid_ = std::max(1.0, std::ceil(eps * d));
    for (auto& [v, dist] : g->bounded_ball(sources, big_d)) v_init_.insert(v);
  }

  const std::set<VertexId>& v_init() const { return v_init_; }
  double grid() const { return grid_; }

  // Initial emulator edges: covering edges touching V_init, heavy graph
  // edges inside V_init, and near edges off the dummy source.
  std::vector<std::tuple<Node, Node, double>> initial_edges(
      const std::map<std::pair<VertexId, int>, double>& covering_weights, const EsTree& near) {
    std::vector<std::tuple<Node, Node, double>> out;
    for (auto& [key, w] : covering_weights) {
      auto [v, core_id] = key;
      if (!v_init_.count(v)) continue;
      core_w_[{v, core_id}] = w;
      out.push_back({vertex_node(v), core_node(core_id), w});
    }
    for (auto& [u, v, w] : g_->undirected_edges()) {
      if (!v_init_.count(u) || !v_init_.count(v)) continue;
      if (w <= d_ + kEps || w > big_d_ + kEps) continue;
      double wr = round_up_multiple(w, grid_);
      heavy_w_[ekey(u, v)] = wr;
      out.push_back({vertex_node(u), vertex_node(v), wr});
    }
    for (auto& [v, est] : near.ball()) {
      if (!v_init_.count(v)) continue;
      double wr = round_up_multiple(est, grid_);
      near_w_[v] = wr;
      out.push_back({MonotoneEs::kSource, vertex_node(v), wr});
    }
    return out;
  }

  // Translates one step's worth of inputs into an update batch, insertions
  // first. gop is the graph update applied this step (may be null).
  std::vector<MonotoneEs::Update> sync(const UpdateOp* gop,
                                       const std::vector<CoveringCompressed::Change>& changes,
                                       const EsTree& near) {
    std::vector<MonotoneEs::Update> inserts, rest;
    for (auto& ch : changes) {
      if (!v_init_.count(ch.v)) continue;
      auto key = std::make_pair(ch.v, ch.core_id);
      Node a = vertex_node(ch.v), b = core_node(ch.core_id);
      switch (ch.kind) {
        case CoveringCompressed::Change::kInsert:
          core_w_[key] = ch.w;
          inserts.push_back({MonotoneEs::Update::kInsert, a, b, ch.w});
          break;
        case CoveringCompressed::Change::kIncrease: {
          auto it = core_w_.find(key);
          if (it == core_w_.end()) break;
          if (ch.w > it->second + kEps) {
            it->second = ch.w;
            rest.push_back({MonotoneEs::Update::kIncrease, a, b, ch.w});
          }
          break;
        }
        case CoveringCompressed::Change::kDelete:
          if (core_w_.erase(key)) rest.push_back({MonotoneEs::Update::kDelete, a, b, 0.0});
          break;
      }
    }
    if (gop) {
      auto key = ekey(gop->u, gop->v);
      auto it = heavy_w_.find(key);
      bool relevant = v_init_.count(gop->u) && v_init_.count(gop->v);
      if (gop->kind == UpdateOp::kDelete) {
        if (it != heavy_w_.end()) {
          heavy_w_.erase(it);
          rest.push_back({MonotoneEs::Update::kDelete, vertex_node(gop->u),
                          vertex_node(gop->v), 0.0});
        }
      } else if (relevant) {
        double w = gop->weight;
        if (it != heavy_w_.end()) {
          if (w > big_d_ + kEps) {
            heavy_w_.erase(it);
            rest.push_back({MonotoneEs::Update::kDelete, vertex_node(gop->u),
                            vertex_node(gop->v), 0.0});
          } else {
            double wr = round_up_multiple(w, grid_);
            if (wr > it->second + kEps) {
              it->second = wr;
              rest.push_back({MonotoneEs::Update::kIncrease, vertex_node(gop->u),
                              vertex_node(gop->v), wr});
            }
          }
        } else if (w > d_ + kEps && w <= big_d_ + kEps) {
          double wr = round_up_multiple(w, grid_);
          heavy_w_[key] = wr;
          inserts.push_back({MonotoneEs::Update::kInsert, vertex_node(gop->u),
                             vertex_node(gop->v), wr});
        }
      }
    }
    // Near edges are decremental: weights grow with the estimates and the
    // edge disappears when the vertex leaves the near ball.
    for (auto it = near_w_.begin(); it != near_w_.end();) {
      VertexId v = it->first;
      double est = near.level(v);
      if (est == kInf) {
        rest.push_back({MonotoneEs::Update::kDelete, MonotoneEs::kSource, vertex_node(v), 0.0});
        it = near_w_.erase(it);
        continue;
      }
      double wr = round_up_multiple(est, grid_);
      if (wr > it->second + kEps) {
        it->second = wr;
        rest.push_back({MonotoneEs::Update::kIncrease, MonotoneEs::kSource, vertex_node(v), wr});
      }
      ++it;
    }
    inserts.insert(inserts.end(), rest.begin(), rest.end());
    return inserts;
  }

 private:
  static std::pair<VertexId, VertexId> ekey(VertexId u, VertexId v) {
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
  }

  const DynGraph* g_;
  double d_, big_d_, eps_, grid_ = 1.0;
  std::set<VertexId> v_init_;
  std::map<std::pair<VertexId, int>, double> core_w_;
  std::map<std::pair<VertexId, VertexId>, double> heavy_w_;
  std::map<VertexId, double> near_w_;
};

// ---------------------------------------------------------------------------
// Configurable-depth layering: a stack of coverings, each consuming the
// covering-compressed hypergraph of the one below (the trivial unit view at
// the bottom), topped by an emulator + monotone ES tree whose estimates are
// combined with a near-ball ES tree.

struct LayeredParams {
  int levels = 2;
  double eps = 0.1;
  int k = 3;
  double str = 32.0;
  RobustCoreParams core;
  std::uint64_t seed = 1;
  // Optional explicit schedule of per-level distance scales; must be
  // strictly increasing when given. Empty: derived geometrically.
  std::vector<double> d_schedule;

  double eps_level(int i) const {  // i in [1, levels]
    return eps / std::pow(50.0, levels - i);
  }
};

class LayeredSssp {
 public:
  LayeredSssp(DynGraph* g, std::vector<VertexId> sources, LayeredParams params)
      : g_(g), sources_(std::move(sources)), params_(params) {
    DECFLOW_CHECK(params_.levels >= 1, "layered_sssp: need at least one level");
    double w_max = std::max(1.0, g->max_weight());
    big_d_ = w_max * static_cast<double>(g->num_vertices());

    std::vector<double> ds = params_.d_schedule;
    if (ds.empty()) {
      ds.resize(params_.levels);
      ds[0] = 1.0;
      for (int i = 1; i < params_.levels; ++i) {
        double gap = std::pow(params_.str / params_.eps_level(i), params_.k);
        ds[i] = ds[i - 1] * gap;
      }
    }
    DECFLOW_CHECK(static_cast<int>(ds.size()) == params_.levels,
                  "layered_sssp: schedule size mismatch");
    for (int i = 1; i < params_.levels; ++i)
      DECFLOW_CHECK(ds[i] > ds[i - 1],
                    "layered_sssp: distance scales must be strictly increasing");

    unit_ = std::make_unique<UnitCompressed>(*g_);
    Rng seeder(params_.seed);
    for (int i = 0; i < params_.levels; ++i) {
      CoveringParams cp;
      cp.d = ds[i];
      cp.k = params_.k;
      cp.eps = params_.eps_level(i + 1);
      cp.str = params_.str;
      cp.core = params_.core;
      cp.core.str = params_.str;
      cp.seed = seeder.next_u64();
      const Hypergraph* lower =
          i == 0 ? &unit_->hypergraph() : &views_[i - 1]->hypergraph();
      coverings_.push_back(std::make_unique<Covering>(g_, lower, cp));
      views_.push_back(std::make_unique<CoveringCompressed>(coverings_[i].get()));
    }
    double d_top = ds.back();
    double gamma_top = std::pow(params_.str / params_.eps_level(params_.levels), params_.k);
    double near_radius = std::min((1.0 + params_.eps) * 2.0 * gamma_top * d_top, 4.0 * big_d_);
    near_ = std::make_unique<EsTree>(g_, sources_, near_radius);
    emulator_ = std::make_unique<Emulator>(g_, sources_, d_top, big_d_, params_.eps);
    mes_ = std::make_unique<MonotoneEs>(big_d_);

    // Each view drained its covering's creation events at construction, so
    // the top view's weight table is current.
    mes_->init(emulator_->initial_edges(views_.back()->weights(), *near_));
  }

  // Applies one decremental update to the graph and every layer.
  void apply(const UpdateOp& op) {
    if (op.kind == UpdateOp::kDelete)
      g_->delete_edge(op.u, op.v);
    else
      g_->increase_weight(op.u, op.v, op.weight);

    std::optional<Hypergraph::EdgeId> unit_removed;
    if (op.kind == UpdateOp::kDelete)
      unit_removed = unit_->on_delete(op.u, op.v);
    else
      unit_removed = unit_->on_increase(op.u, op.v, op.weight);

    std::vector<CoveringCompressed::Change> top_changes;
    for (int i = 0; i < params_.levels; ++i) {
      if (i == 0) {
        if (unit_removed) coverings_[0]->on_lower_hyperedge_removed(*unit_removed);
      }
      coverings_[i]->on_g_update(op);
      auto [changes, hevents] = views_[i]->sync();
      if (i + 1 < params_.levels)
        forward_hyper_events(i + 1, hevents);
      else
        top_changes = std::move(changes);
    }
    if (op.kind == UpdateOp::kDelete)
      near_->on_delete(op.u, op.v);
    else
      near_->on_increase(op.u, op.v);
    auto batch = emulator_->sync(&op, top_changes, *near_);
    mes_->apply_batch(batch);
  }

  // The apxball estimate: min of the near-ball and the emulator estimate.
  double estimate(VertexId v) const {
    DECFLOW_CHECK(emulator_->v_init().count(v),
                  "layered_sssp: vertex " << v << " is outside the initial ball");
    return std::min(near_->level(v), mes_->estimate(Emulator::vertex_node(v)));
  }

  // Compounded accuracy bound advertised by the stack.
  double eps_final() const { return 50.0 * params_.eps; }

  const Covering& covering(int level) const { return *coverings_.at(level); }
  const CoveringCompressed& view(int level) const { return *views_.at(level); }
  const MonotoneEs& mes() const { return *mes_; }
  const EsTree& near_ball() const { return *near_; }
  const Emulator& emulator() const { return *emulator_; }
  int levels() const { return params_.levels; }

 private:
  void forward_hyper_events(int level, const std::vector<CoveringCompressed::HyperEvent>& evs) {
    for (auto& ev : evs) {
      switch (ev.kind) {
        case CoveringCompressed::HyperEvent::kInserted:
          coverings_[level]->on_lower_hyperedge_inserted(ev.eid, ev.members);
          break;
        case CoveringCompressed::HyperEvent::kRemoved:
          coverings_[level]->on_lower_hyperedge_removed(ev.eid);
          break;
        case CoveringCompressed::HyperEvent::kShrunk:
          coverings_[level]->on_lower_hyperedge_shrunk(ev.eid, ev.v);
          break;
      }
    }
  }

  DynGraph* g_;
  std::vector<VertexId> sources_;
  LayeredParams params_;
  double big_d_ = 0.0;
  std::unique_ptr<UnitCompressed> unit_;
  std::vector<std::unique_ptr<Covering>> coverings_;
  std::vector<std::unique_ptr<CoveringCompressed>> views_;
  std::unique_ptr<EsTree> near_;
  std::unique_ptr<Emulator> emulator_;
  std::unique_ptr<MonotoneEs> mes_;
};

}  // namespace decflow

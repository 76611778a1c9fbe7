#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "decflow/graph.hpp"

namespace decflow {

// ---------------------------------------------------------------------------
// 1/z-integral vertex capacities. Values are stored as integer multiples of
// 1/z so that doubling and flow arithmetic stay exact.

struct CapacityFn {
  std::int64_t z = 1;
  std::map<VertexId, std::int64_t> val_z;  // kappa(v) * z

  double value(VertexId v) const {
    auto it = val_z.find(v);
    return it == val_z.end() ? 0.0 : static_cast<double>(it->second) / z;
  }
  std::int64_t scaled(VertexId v) const {
    auto it = val_z.find(v);
    return it == val_z.end() ? 0 : it->second;
  }
  double total() const {
    double s = 0;
    for (auto& [v, x] : val_z) s += static_cast<double>(x);
    return s / z;
  }
  void set(VertexId v, double x) {
    val_z[v] = static_cast<std::int64_t>(std::llround(x * z));
  }
  void double_at(VertexId v) { val_z[v] *= 2; }
};

struct VertexCut {
  std::vector<VertexId> L, S, R;
  double kappa_s = 0.0;
};

// An embedding path in the incidence graph of a hypergraph: original
// vertices and the hyperedges between them, in path order. Each path
// carries value val_z/z and induces a witness edge between its endpoints.
struct EmbPath {
  VertexId a = -1, b = -1;
  std::int64_t val_z = 0;
  std::vector<VertexId> vertices;
  std::vector<Hypergraph::EdgeId> hyperedges;
};

// ---------------------------------------------------------------------------
// Integer Dinic with forward-arc markers so flow can be read back.

namespace flowdetail {

struct DArc {
  int to;
  std::int64_t cap;
  int rev;
  bool fwd;
};

class Dinic {
 public:
  int add_node() {
    adj_.emplace_back();
    return static_cast<int>(adj_.size()) - 1;
  }

  void add_arc(int from, int to, std::int64_t cap) {
    adj_[from].push_back({to, cap, static_cast<int>(adj_[to].size()), true});
    adj_[to].push_back({from, 0, static_cast<int>(adj_[from].size()) - 1, false});
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    for (;;) {
      if (!bfs(s, t)) break;
      it_.assign(adj_.size(), 0);
      while (std::int64_t pushed = dfs(s, t, INT64_MAX)) total += pushed;
    }
    return total;
  }

  std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto& a : adj_[v])
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = true;
          stack.push_back(a.to);
        }
    }
    return seen;
  }

  // Flow on a forward arc = residual of its reverse arc.
  std::int64_t flow_on(int v, int i) const {
    const auto& a = adj_[v][i];
    return a.fwd ? adj_[a.to][a.rev].cap : 0;
  }
  void reduce_flow(int v, int i, std::int64_t m) {
    auto& a = adj_[v][i];
    a.cap += m;
    adj_[a.to][a.rev].cap -= m;
  }

  int nodes() const { return static_cast<int>(adj_.size()); }
  const std::vector<DArc>& arcs_of(int v) const { return adj_[v]; }

  // Cancels all flow cycles so the positive-flow graph becomes acyclic.
  void cancel_cycles() {
    for (;;) {
      std::vector<int> color(nodes(), 0);
      std::vector<std::pair<int, int>> stack_arc;  // DFS arc trail
      bool cancelled = false;
      std::function<bool(int)> dfs = [&](int v) -> bool {
        color[v] = 1;
        for (int i = 0; i < static_cast<int>(adj_[v].size()); ++i) {
          if (flow_on(v, i) <= 0) continue;
          int to = adj_[v][i].to;
          if (color[to] == 1) {
            // Cycle: arcs on the trail from `to` onwards, plus (v,i).
            std::size_t j = stack_arc.size();
            while (j > 0 && stack_arc[j - 1].first != to) --j;
            DECFLOW_CHECK(j > 0, "cancel_cycles: lost the cycle head");
            std::int64_t m = flow_on(v, i);
            for (std::size_t k = j - 1; k < stack_arc.size(); ++k)
              m = std::min(m, flow_on(stack_arc[k].first, stack_arc[k].second));
            for (std::size_t k = j - 1; k < stack_arc.size(); ++k)
              reduce_flow(stack_arc[k].first, stack_arc[k].second, m);
            reduce_flow(v, i, m);
            return true;
          }
          if (color[to] == 0) {
            stack_arc.push_back({v, i});
            if (dfs(to)) return true;
            stack_arc.pop_back();
          }
        }
        color[v] = 2;
        return false;
      };
      for (int v = 0; v < nodes() && !cancelled; ++v)
        if (color[v] == 0) cancelled = dfs(v);
      if (!cancelled) break;
    }
  }

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
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          q.push(a.to);
        }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(int v, int t, std::int64_t limit) {
    if (v == t) return limit;
    for (int& i = it_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      auto& a = adj_[v][i];
      if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
      std::int64_t got = dfs(a.to, t, std::min(limit, a.cap));
      if (got > 0) {
        a.cap -= got;
        adj_[a.to][a.rev].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<DArc>> adj_;
  std::vector<int> level_;
  std::vector<int> it_;
};

}  // namespace flowdetail

// ---------------------------------------------------------------------------
// EmbedMatching: either a sparse vertex cut or a fractional matching from A
// to B embedded with congestion <= 1 w.r.t. kappa, by max flow on the
// kappa-split incidence graph. The returned cut (L,S,R) satisfies
// min(|L cap A|, |R cap B|) > 3 eps |A| and kappa(S) <= 2 min(...); the
// matching branch reaches total value >= (1-3 eps)|A|.

struct EmbedMatchingResult {
  std::optional<VertexCut> cut;
  std::vector<EmbPath> paths;
  double matching_value = 0.0;
};

inline EmbedMatchingResult embed_matching(const Hypergraph& H, const std::vector<VertexId>& A,
                                          const std::vector<VertexId>& B, const CapacityFn& kappa,
                                          double eps, std::int64_t height_bound = INT64_MAX) {
  DECFLOW_CHECK(A.size() <= B.size(), "embed_matching: |A| > |B|");
  {
    std::set<VertexId> a_set(A.begin(), A.end());
    for (VertexId b : B)
      DECFLOW_CHECK(!a_set.count(b), "embed_matching: A and B intersect at " << b);
    double total = kappa.total();
    for (auto& [v, x] : kappa.val_z)
      DECFLOW_CHECK(static_cast<double>(x) / kappa.z <= total / 2 + kEps,
                    "embed_matching: kappa(" << v << ") exceeds kappa(V)/2");
    for (VertexId v : A)
      DECFLOW_CHECK(kappa.value(v) >= 2.0 - kEps, "embed_matching: kappa < 2 at terminal " << v);
    for (VertexId v : B)
      DECFLOW_CHECK(kappa.value(v) >= 2.0 - kEps, "embed_matching: kappa < 2 at terminal " << v);
  }
  const std::int64_t z = kappa.z;

  flowdetail::Dinic net;
  std::map<VertexId, int> vin, vout;
  std::map<Hypergraph::EdgeId, int> enode;
  for (VertexId v : H.vertices()) {
    vin[v] = net.add_node();
    vout[v] = net.add_node();
  }
  int src = net.add_node(), snk = net.add_node();
  std::int64_t inf_cap = 16;
  for (auto& [v, x] : kappa.val_z) inf_cap += x;

  for (VertexId v : H.vertices()) net.add_arc(vin[v], vout[v], kappa.scaled(v));
  for (auto& [eid, members] : H.edges()) {
    int en = net.add_node();
    enode[eid] = en;
    for (VertexId v : members) {
      net.add_arc(vout[v], en, inf_cap);
      net.add_arc(en, vin[v], inf_cap);
    }
  }
  for (VertexId a : A) net.add_arc(src, vin[a], z);
  for (VertexId b : B) net.add_arc(vout[b], snk, z);

  std::int64_t flow = net.run(src, snk);
  std::int64_t want = static_cast<std::int64_t>(
      std::ceil((1.0 - 3.0 * eps) * static_cast<double>(A.size()) * z - 1e-9));

  EmbedMatchingResult out;
  if (flow < want) {
    auto seen = net.reachable(src);
    VertexCut cut;
    for (VertexId v : H.vertices()) {
      bool in_r = seen[vin.at(v)], out_r = seen[vout.at(v)];
      if (out_r)
        cut.L.push_back(v);
      else if (in_r)
        cut.S.push_back(v);
      else
        cut.R.push_back(v);
    }
    for (VertexId v : cut.S) cut.kappa_s += kappa.value(v);
    out.cut = std::move(cut);
    return out;
  }

  net.cancel_cycles();

  std::map<int, VertexId> node_of_vin;
  std::map<int, Hypergraph::EdgeId> node_of_edge;
  for (auto& [v, id] : vin) node_of_vin[id] = v;
  for (auto& [e, id] : enode) node_of_edge[id] = e;

  // Decompose the (acyclic) flow into simple source-sink paths.
  for (;;) {
    std::vector<std::pair<int, int>> trail;
    int v = src;
    while (v != snk) {
      int chosen = -1;
      for (int i = 0; i < static_cast<int>(net.arcs_of(v).size()); ++i)
        if (net.flow_on(v, i) > 0) {
          chosen = i;
          break;
        }
      if (chosen < 0) break;
      trail.push_back({v, chosen});
      v = net.arcs_of(v)[chosen].to;
      DECFLOW_CHECK(trail.size() <= static_cast<std::size_t>(net.nodes()) + 2,
                    "embed_matching: non-simple decomposition path");
    }
    if (trail.empty() || v != snk) break;
    std::int64_t m = INT64_MAX;
    for (auto& [tv, ti] : trail) m = std::min(m, net.flow_on(tv, ti));
    EmbPath p;
    p.val_z = m;
    for (auto& [tv, ti] : trail) {
      net.reduce_flow(tv, ti, m);
      int to = net.arcs_of(tv)[ti].to;
      if (node_of_vin.count(to))
        p.vertices.push_back(node_of_vin.at(to));
      else if (node_of_edge.count(to))
        p.hyperedges.push_back(node_of_edge.at(to));
    }
    DECFLOW_CHECK(!p.vertices.empty(), "embed_matching: empty path");
    p.a = p.vertices.front();
    p.b = p.vertices.back();
    DECFLOW_CHECK(static_cast<std::int64_t>(p.vertices.size() + p.hyperedges.size()) <=
                      height_bound,
                  "embed_matching: path exceeds the height bound");
    out.paths.push_back(std::move(p));
  }
  double total = 0;
  for (auto& p : out.paths) total += static_cast<double>(p.val_z) / z;
  out.matching_value = total;
  return out;
}

// Default blocking-flow height bound used by the witness embedding.
inline std::int64_t default_height_bound(double kappa_total, std::size_t a_size, double eps) {
  double b = 8.0 * kappa_total * std::log(kappa_total + 2.0) /
             (std::max<double>(1.0, static_cast<double>(a_size)) * eps * eps);
  if (b > 1e15) return INT64_MAX;
  return std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(b)));
}

// ---------------------------------------------------------------------------
// Cut player: seeded random-projection + lazy random walk split, returning a
// partition (A,B) with |A| = floor(n/2) <= |B|.

inline std::pair<std::vector<VertexId>, std::vector<VertexId>> cut_player_round(
    const std::vector<VertexId>& vertices,
    const std::vector<std::tuple<VertexId, VertexId, double>>& edges, Rng& rng) {
  const int n = static_cast<int>(vertices.size());
  DECFLOW_CHECK(n >= 2, "cut_player_round: need at least 2 vertices");
  std::map<VertexId, int> idx;
  for (int i = 0; i < n; ++i) idx[vertices[i]] = i;
  std::vector<double> x(n), deg(n, 0.0);
  for (int i = 0; i < n; ++i) x[i] = rng.gaussian();
  std::vector<std::tuple<int, int, double>> es;
  es.reserve(edges.size());
  for (auto& [u, v, w] : edges) {
    int a = idx.at(u), b = idx.at(v);
    es.push_back({a, b, w});
    deg[a] += w;
    deg[b] += w;
  }
  int steps = static_cast<int>(std::ceil(std::log2(std::max(2, n)))) + 2;
  std::vector<double> nx(n);
  for (int it = 0; it < steps; ++it) {
    for (int i = 0; i < n; ++i) nx[i] = x[i] / 2.0;
    for (auto& [a, b, w] : es) {
      if (deg[a] > 0) nx[b] += (x[a] / deg[a]) * w / 2.0;
      if (deg[b] > 0) nx[a] += (x[b] / deg[b]) * w / 2.0;
    }
    x.swap(nx);
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return vertices[a] < vertices[b];
  });
  std::vector<VertexId> A, B;
  for (int i = 0; i < n / 2; ++i) A.push_back(vertices[order[i]]);
  for (int i = n / 2; i < n; ++i) B.push_back(vertices[order[i]]);
  return {A, B};
}

// ---------------------------------------------------------------------------
// Expander pruning on an unweighted multigraph. The caller certifies that
// the initial graph is a phi-expander. After i deletions the surviving set
// X keeps vol(V \ X) bounded by 8 i / phi; conductance is re-certified
// exhaustively up to 12 vertices and by a lazy-walk sweep cut above that.

class Pruner {
 public:
  // Multi-edges are given with multiplicities.
  Pruner(const std::vector<VertexId>& vertices,
         const std::vector<std::tuple<VertexId, VertexId, std::int64_t>>& multi_edges, double phi)
      : phi_(phi) {
    for (VertexId v : vertices) x_.insert(v);
    for (auto& [u, v, c] : multi_edges) {
      adj_[u][v] += c;
      adj_[v][u] += c;
    }
  }

  const std::set<VertexId>& X() const { return x_; }
  std::int64_t deletions() const { return deletions_; }
  bool budget_exceeded() const { return budget_exceeded_; }

  // Current volume of V \ X (each surviving multi-edge endpoint counts).
  double vol_pruned() const {
    double vol = 0;
    for (auto& [v, nbrs] : adj_) {
      if (x_.count(v)) continue;
      for (auto& [w, c] : nbrs) vol += c;
    }
    return vol;
  }

  std::vector<VertexId> on_delete(VertexId u, VertexId v) {
    return on_delete_batch({{u, v, 1}});
  }

  // Deletes the listed copies, then re-prunes once.
  std::vector<VertexId> on_delete_batch(
      const std::vector<std::tuple<VertexId, VertexId, std::int64_t>>& dels) {
    std::vector<VertexId> hints;
    bool touches_x = false;
    for (auto& [u, v, c] : dels) {
      auto it = adj_[u].find(v);
      DECFLOW_CHECK(it != adj_[u].end() && it->second >= c,
                    "Pruner: fewer than " << c << " copies of (" << u << "," << v << ") left");
      it->second -= c;
      if (it->second == 0) adj_[u].erase(it);
      auto it2 = adj_[v].find(u);
      it2->second -= c;
      if (it2->second == 0) adj_[v].erase(it2);
      deletions_ += c;
      if (x_.count(u) || x_.count(v)) {
        touches_x = true;
        hints.push_back(u);
        hints.push_back(v);
      }
    }
    if (!touches_x) return {};
    auto peeled = settle(hints);
    if (vol_pruned() > 8.0 * deletions_ / phi_ + kEps) budget_exceeded_ = true;
    return peeled;
  }

 private:
  double induced_degree(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) return 0;
    double d = 0;
    for (auto& [w, c] : it->second)
      if (x_.count(w)) d += c;
    return d;
  }

  std::optional<std::set<VertexId>> find_sparse_cut(const std::vector<VertexId>& hints) {
    if (x_.size() < 2) return std::nullopt;
    if (auto comp = disconnected_side()) return comp;  // conductance-0 cuts, exactly
    if (x_.size() <= 12) return exhaustive_cut();
    return sweep_cut(hints);
  }

  // If the induced graph on X is disconnected, returns the smaller-volume
  // side (ties by size); the sweep heuristic can miss exactly this case
  // when hint mass lands on both shores.
  std::optional<std::set<VertexId>> disconnected_side() {
    if (x_.empty()) return std::nullopt;
    std::set<VertexId> seen;
    std::vector<VertexId> stack{*x_.begin()};
    seen.insert(*x_.begin());
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      auto it = adj_.find(v);
      if (it == adj_.end()) continue;
      for (auto& [w, c] : it->second)
        if (x_.count(w) && seen.insert(w).second) stack.push_back(w);
    }
    if (seen.size() == x_.size()) return std::nullopt;
    double vol_seen = 0, vol_rest = 0;
    std::set<VertexId> rest;
    for (VertexId v : x_) {
      if (seen.count(v))
        vol_seen += induced_degree(v);
      else {
        rest.insert(v);
        vol_rest += induced_degree(v);
      }
    }
    if (vol_seen < vol_rest || (vol_seen == vol_rest && seen.size() <= rest.size())) return seen;
    return rest;
  }

  std::optional<std::set<VertexId>> exhaustive_cut() {
    std::vector<VertexId> vs(x_.begin(), x_.end());
    int n = static_cast<int>(vs.size());
    std::map<VertexId, int> idx;
    for (int i = 0; i < n; ++i) idx[vs[i]] = i;
    std::vector<double> vol(n, 0.0);
    std::vector<std::tuple<int, int, double>> es;
    for (int i = 0; i < n; ++i) {
      auto it = adj_.find(vs[i]);
      if (it == adj_.end()) continue;
      for (auto& [w, c] : it->second) {
        if (!x_.count(w)) continue;
        vol[i] += c;
        auto j = idx.find(w);
        if (j != idx.end() && j->second > i) es.push_back({i, j->second, static_cast<double>(c)});
      }
    }
    double total = 0;
    for (double d : vol) total += d;
    double best = kInf;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      double vs_vol = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) vs_vol += vol[i];
      double denom = std::min(vs_vol, total - vs_vol);
      if (denom <= 0) continue;
      double cut = 0;
      for (auto& [a, b, w] : es)
        if (((mask >> a) & 1) != ((mask >> b) & 1)) cut += w;
      double cond = cut / denom;
      if (cond < best) {
        best = cond;
        best_mask = mask;
      }
    }
    if (best >= phi_ / 6.0) return std::nullopt;
    double side_vol = 0;
    for (int i = 0; i < n; ++i)
      if (best_mask & (1u << i)) side_vol += vol[i];
    bool mask_is_small = 2 * side_vol <= total;
    std::set<VertexId> side;
    for (int i = 0; i < n; ++i)
      if (((best_mask >> i) & 1) == static_cast<std::uint32_t>(mask_is_small)) side.insert(vs[i]);
    return side;
  }

  std::optional<std::set<VertexId>> sweep_cut(const std::vector<VertexId>& hints) {
    // Array-indexed induced subgraph of X.
    std::vector<VertexId> vs(x_.begin(), x_.end());
    const int n = static_cast<int>(vs.size());
    std::map<VertexId, int> idx;
    for (int i = 0; i < n; ++i) idx[vs[i]] = i;
    std::vector<std::vector<std::pair<int, double>>> nb(n);
    std::vector<double> deg(n, 0.0);
    double total_vol = 0;
    for (int i = 0; i < n; ++i) {
      auto it = adj_.find(vs[i]);
      if (it == adj_.end()) continue;
      for (auto& [w, c] : it->second) {
        auto j = idx.find(w);
        if (j == idx.end()) continue;
        nb[i].push_back({j->second, static_cast<double>(c)});
        deg[i] += c;
      }
      total_vol += deg[i];
    }
    if (total_vol <= 0) return std::nullopt;
    std::vector<double> p(n, 0.0);
    bool any = false;
    for (VertexId h : hints) {
      auto j = idx.find(h);
      if (j != idx.end()) {
        p[j->second] = 1.0;
        any = true;
      }
    }
    if (!any) return std::nullopt;
    int steps = static_cast<int>(std::ceil(std::log2(std::max(2, n)))) + 3;
    std::vector<double> np(n);
    for (int it = 0; it < steps; ++it) {
      std::fill(np.begin(), np.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        if (p[i] == 0.0) continue;
        np[i] += p[i] / 2.0;
        if (deg[i] <= 0) continue;
        for (auto& [j, c] : nb[i]) np[j] += p[i] / 2.0 * c / deg[i];
      }
      p.swap(np);
    }
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
      if (deg[i] > 0 && p[i] > 0) order.push_back(i);
    if (order.empty()) return std::nullopt;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double ra = p[a] / deg[a], rb = p[b] / deg[b];
      if (ra != rb) return ra > rb;
      return vs[a] < vs[b];
    });
    std::vector<char> in_side(n, 0);
    double side_vol = 0, cut = 0, best = kInf;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < order.size() && k + 1 < static_cast<std::size_t>(n); ++k) {
      int v = order[k];
      in_side[v] = 1;
      side_vol += deg[v];
      for (auto& [w, c] : nb[v]) {
        if (in_side[w])
          cut -= c;
        else
          cut += c;
      }
      double denom = std::min(side_vol, total_vol - side_vol);
      if (denom <= 0) continue;
      double cond = cut / denom;
      if (cond < best) {
        best = cond;
        best_k = k + 1;
      }
    }
    if (best >= phi_ / 6.0) return std::nullopt;
    std::fill(in_side.begin(), in_side.end(), 0);
    double out_vol = 0;
    for (std::size_t k = 0; k < best_k; ++k) {
      in_side[order[k]] = 1;
      out_vol += deg[order[k]];
    }
    bool invert = 2 * out_vol > total_vol;
    std::set<VertexId> out;
    for (int i = 0; i < n; ++i)
      if (static_cast<bool>(in_side[i]) != invert) out.insert(vs[i]);
    return out;
  }

  std::vector<VertexId> settle(std::vector<VertexId> hints) {
    std::vector<VertexId> peeled;
    // Vertices with no surviving edges inside X cannot stay in an expander.
    for (;;) {
      bool again = false;
      for (VertexId v : std::vector<VertexId>(x_.begin(), x_.end())) {
        if (x_.size() <= 1) break;
        if (induced_degree(v) == 0) {
          x_.erase(v);
          peeled.push_back(v);
          again = true;
        }
      }
      if (!again) break;
    }
    for (;;) {
      auto cut = find_sparse_cut(hints);
      if (!cut || cut->empty()) break;
      hints.clear();
      for (VertexId v : *cut) {
        x_.erase(v);
        peeled.push_back(v);
        auto it = adj_.find(v);
        if (it != adj_.end())
          for (auto& [w, c] : it->second) hints.push_back(w);
      }
    }
    return peeled;
  }

  double phi_;
  std::set<VertexId> x_;
  std::map<VertexId, std::map<VertexId, std::int64_t>> adj_;
  std::int64_t deletions_ = 0;
  bool budget_exceeded_ = false;
};

// ---------------------------------------------------------------------------
// CertifyCore: either certifies that every terminal's d-ball misses an
// eps/2 fraction of K (Scattered) or returns a sub-core of size at least
// (1 - eps)|K| and diameter at most 16 d lg n, found by ball doubling.

struct CertifyResult {
  bool scattered = false;
  std::vector<VertexId> core;
};

inline CertifyResult certify_core(const DynGraph& g, const std::vector<VertexId>& K, double d,
                                  double eps) {
  DECFLOW_CHECK(d > 0 && eps > 0, "certify_core: need d > 0 and eps > 0");
  const double lgn = std::log2(std::max<double>(2.0, static_cast<double>(g.num_vertices())));
  std::set<VertexId> kset(K.begin(), K.end());

  auto outer = g.bounded_ball(K, 16.0 * d * lgn);
  std::set<VertexId> alive;
  for (auto& [v, dist] : outer) alive.insert(v);

  auto alive_ball = [&](VertexId center, double radius) {
    std::map<VertexId, double> dist;
    if (!alive.count(center)) return dist;
    std::set<std::pair<double, VertexId>> pq;
    dist[center] = 0;
    pq.insert({0.0, center});
    while (!pq.empty()) {
      auto [dd, v] = *pq.begin();
      pq.erase(pq.begin());
      for (auto& [w, len] : g.neighbors(v)) {
        if (!alive.count(w)) continue;
        double nd = dd + len;
        if (nd > radius + kEps) continue;
        auto it = dist.find(w);
        if (it == dist.end() || nd < it->second - kEps) {
          dist[w] = nd;
          pq.insert({nd, w});
        }
      }
    }
    return dist;
  };
  auto volume = [&](const std::map<VertexId, double>& ball) {
    double vol = 0;
    for (auto& [v, dist] : ball)
      for (auto& [w, len] : g.neighbors(v))
        if (alive.count(w)) vol += 1;
    return vol;
  };

  std::set<VertexId> kprime(kset);
  const double keep = (1.0 - eps / 2.0) * static_cast<double>(kset.size());
  while (static_cast<double>(kprime.size()) > keep) {
    VertexId v = *kprime.begin();
    int i = 0;
    auto inner = alive_ball(v, 0.0);
    auto grown = alive_ball(v, 2.0 * d);
    while (volume(grown) > 2.0 * volume(inner)) {
      ++i;
      inner = std::move(grown);
      grown = alive_ball(v, 2.0 * (i + 1) * d);
    }
    std::size_t in_core = 0;
    for (auto& [w, dist] : grown)
      if (kprime.count(w)) ++in_core;
    if (static_cast<double>(in_core) > (1.0 - eps / 2.0) * static_cast<double>(kprime.size())) {
      CertifyResult r;
      for (auto& [w, dist] : grown)
        if (kprime.count(w)) r.core.push_back(w);
      return r;
    }
    auto peel = alive_ball(v, 2.0 * i * d);
    for (auto& [w, dist] : peel) {
      kprime.erase(w);
      alive.erase(w);
    }
  }
  CertifyResult r;
  r.scattered = true;
  return r;
}

// ---------------------------------------------------------------------------
// EmbedWitness: runs the cut-matching game against the matching embedder.
// Either forwards a sparse cut (rebalanced so that eps_wit |K| <= |L cap K|
// <= |R cap K| and kappa(S) <= 2 |L cap K| hold verbatim), or returns an
// embedded witness: the union of the matchings with fake padding pruned out.

struct WitnessParams {
  double phi = 0.05;           // expansion target handed to pruning
  double eps_wit = 0.1;        // cut balance parameter
  double rho = 0.34;           // tolerated vertex loss fraction of the witness
  int rounds_factor = 4;       // R = ceil(rounds_factor * log2 |K|)
  std::int64_t height_bound = 0;  // 0: use the default formula
};

struct Witness {
  std::vector<VertexId> vertices;  // V(W) after pruning
  // One entry per surviving real matching path: witness edge (a,b) of
  // weight val_z / z embedded along the stored path.
  std::vector<EmbPath> paths;
  std::int64_t z = 1;
  bool degraded = false;  // pruning ate more than rho |K|

  std::vector<std::tuple<VertexId, VertexId, double>> weighted_edges() const {
    std::vector<std::tuple<VertexId, VertexId, double>> out;
    for (auto& p : paths)
      out.push_back({p.a, p.b, static_cast<double>(p.val_z) / static_cast<double>(z)});
    return out;
  }
};

struct EmbedWitnessResult {
  std::optional<VertexCut> cut;
  std::optional<Witness> witness;
};

inline EmbedWitnessResult embed_witness(const Hypergraph& H, const std::vector<VertexId>& K,
                                        const CapacityFn& kappa, Rng& rng,
                                        const WitnessParams& params = {}) {
  EmbedWitnessResult out;
  const std::int64_t z = kappa.z;
  const int nk = static_cast<int>(K.size());
  if (nk <= 1) {
    Witness w;
    w.vertices = K;
    w.z = z;
    out.witness = std::move(w);
    return out;
  }
  const int rounds =
      std::max(1, static_cast<int>(std::ceil(params.rounds_factor * std::log2(std::max(2, nk)))));

  // Running cut-matching state: witness edges accumulated so far, with fake
  // padding tracked separately so it can be fed to pruning afterwards.
  struct GameEdge {
    VertexId a, b;
    std::int64_t val_z;
    int path_idx;  // -1 for fake edges
  };
  std::vector<GameEdge> game_edges;
  std::vector<EmbPath> all_paths;

  for (int round = 0; round < rounds; ++round) {
    std::vector<std::tuple<VertexId, VertexId, double>> wedges;
    for (auto& e : game_edges)
      wedges.push_back({e.a, e.b, static_cast<double>(e.val_z) / z});
    auto [A, B] = cut_player_round(K, wedges, rng);

    // Calibrated balance: the matching threshold (1 - 3 eps_em)|A| equals
    // |A| - eps_wit |K|, so a returned cut has both K-sides above
    // eps_wit |K| and a returned matching misses at most eps_wit |K|.
    double eps_em =
        params.eps_wit * static_cast<double>(nk) / (3.0 * static_cast<double>(A.size()));
    eps_em = std::min(eps_em, 0.33);
    std::int64_t hb = params.height_bound > 0
                          ? params.height_bound
                          : default_height_bound(kappa.total(), A.size(), eps_em);
    auto res = embed_matching(H, A, B, kappa, eps_em, hb);
    if (res.cut) {
      VertexCut cut = *res.cut;
      std::set<VertexId> kset(K.begin(), K.end());
      auto count_k = [&](const std::vector<VertexId>& side) {
        std::size_t c = 0;
        for (VertexId v : side)
          if (kset.count(v)) ++c;
        return c;
      };
      if (count_k(cut.L) > count_k(cut.R)) std::swap(cut.L, cut.R);
      out.cut = std::move(cut);
      return out;
    }

    // Pad the fractional matching to a full one with fake edges: pair
    // unsaturated A-vertices with unsaturated B-vertices in id order.
    std::map<VertexId, std::int64_t> a_left, b_left;
    for (VertexId a : A) a_left[a] = z;
    for (VertexId b : B) b_left[b] = z;
    for (auto& p : res.paths) {
      a_left[p.a] -= p.val_z;
      b_left[p.b] -= p.val_z;
      int idx = static_cast<int>(all_paths.size());
      game_edges.push_back({p.a, p.b, p.val_z, idx});
      all_paths.push_back(p);
    }
    auto ai = a_left.begin();
    auto bi = b_left.begin();
    while (ai != a_left.end() && bi != b_left.end()) {
      while (ai != a_left.end() && ai->second <= 0) ++ai;
      while (bi != b_left.end() && bi->second <= 0) ++bi;
      if (ai == a_left.end() || bi == b_left.end()) break;
      std::int64_t m = std::min(ai->second, bi->second);
      game_edges.push_back({ai->first, bi->first, m, -1});
      ai->second -= m;
      bi->second -= m;
    }
  }

  // Lift to the unweighted multigraph (val_z unit copies per edge), then
  // prune all fake copies away.
  std::vector<std::tuple<VertexId, VertexId, std::int64_t>> multi, fake_copies;
  for (auto& e : game_edges) {
    multi.push_back({e.a, e.b, e.val_z});
    if (e.path_idx < 0) fake_copies.push_back({e.a, e.b, e.val_z});
  }
  Pruner pruner(K, multi, params.phi);
  if (!fake_copies.empty()) pruner.on_delete_batch(fake_copies);

  Witness w;
  w.z = z;
  const auto& X = pruner.X();
  w.vertices.assign(X.begin(), X.end());
  for (auto& e : game_edges) {
    if (e.path_idx < 0) continue;
    if (X.count(e.a) && X.count(e.b)) w.paths.push_back(all_paths[e.path_idx]);
  }
  w.degraded =
      static_cast<double>(w.vertices.size()) < (1.0 - params.rho) * static_cast<double>(nk);
  out.witness = std::move(w);
  return out;
}

}  // namespace decflow

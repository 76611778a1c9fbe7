#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "decflow/flow_instance.hpp"
#include "decflow/graph.hpp"

// Brute-force ground truth used by the test suites. Nothing here shares
// shortest-path or flow code with the main modules.

namespace decflow::oracle {

// ---------------------------------------------------------------------------
// Exact rational arithmetic (64-bit numerator/denominator).

struct Rat {
  std::int64_t num = 0, den = 1;

  Rat() = default;
  Rat(std::int64_t n) : num(n), den(1) {}
  Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  static Rat from_double(double x) {
    // Exact for small dyadics; anything else snaps to the 2^-24 grid so the
    // oracle stays deterministic on float-noisy inputs.
    DECFLOW_CHECK(std::isfinite(x), "Rat: non-finite input");
    std::int64_t d = 1;
    while (x != std::floor(x) && d < (1LL << 24)) {
      x *= 2;
      d *= 2;
    }
    x = std::round(x);
    DECFLOW_CHECK(std::abs(x) < 9e18, "Rat: overflow in from_double");
    return Rat(static_cast<std::int64_t>(x), d);
  }

  void normalize() {
    DECFLOW_CHECK(den != 0, "Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(std::abs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool positive() const { return num > 0; }
  bool zero() const { return num == 0; }

  static std::int64_t checked(__int128 x) {
    DECFLOW_CHECK(x <= INT64_MAX && x >= INT64_MIN, "Rat: overflow");
    return static_cast<std::int64_t>(x);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    std::int64_t g = std::gcd(a.den, b.den);
    __int128 n = (__int128)a.num * (b.den / g) + (__int128)b.num * (a.den / g);
    __int128 d = (__int128)(a.den / g) * b.den;
    Rat r;
    r.num = checked(n);
    r.den = checked(d);
    r.normalize();
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat nb;
    nb.num = -b.num;
    nb.den = b.den;
    return a + nb;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    std::int64_t g1 = std::gcd(std::abs(a.num), b.den);
    std::int64_t g2 = std::gcd(std::abs(b.num), a.den);
    __int128 n = (__int128)(a.num / g1) * (b.num / g2);
    __int128 d = (__int128)(a.den / g2) * (b.den / g1);
    Rat r;
    r.num = checked(n);
    r.den = checked(d);
    r.normalize();
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    DECFLOW_CHECK(b.num != 0, "Rat: division by zero");
    return a * Rat(b.den, b.num);
  }
  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }
};

inline Rat rmin(const Rat& a, const Rat& b) { return a < b ? a : b; }

// ---------------------------------------------------------------------------
// Textbook Dijkstra (multi-source), smallest-id tie-break.

inline std::map<VertexId, double> dijkstra(const DynGraph& g, const std::vector<VertexId>& sources) {
  std::map<VertexId, double> dist;
  for (VertexId v : g.vertices()) dist[v] = kInf;
  std::set<std::pair<double, VertexId>> pq;
  for (VertexId s : sources) {
    if (!g.has_vertex(s)) continue;
    dist[s] = 0.0;
    pq.insert({0.0, s});
  }
  while (!pq.empty()) {
    auto [d, v] = *pq.begin();
    pq.erase(pq.begin());
    if (d > dist[v]) continue;
    for (auto& [w, len] : g.neighbors(v)) {
      double nd = d + len;
      if (nd < dist[w] - kEps) {
        pq.erase({dist[w], w});
        dist[w] = nd;
        pq.insert({nd, w});
      }
    }
  }
  return dist;
}

// Dijkstra under vertex weights; path weight is the sum of w(v) over
// non-initial path vertices (tail-vertex accounting).
inline std::map<VertexId, double> dijkstra_vertex_weighted(const DynGraph& g, VertexId s,
                                                           const std::map<VertexId, double>& w) {
  std::map<VertexId, double> dist;
  for (VertexId v : g.vertices()) dist[v] = kInf;
  auto weight_of = [&](VertexId v) {
    auto it = w.find(v);
    return it == w.end() ? 0.0 : it->second;
  };
  std::set<std::pair<double, VertexId>> pq;
  if (!g.has_vertex(s)) return dist;
  dist[s] = 0.0;
  pq.insert({0.0, s});
  while (!pq.empty()) {
    auto [d, v] = *pq.begin();
    pq.erase(pq.begin());
    if (d > dist[v]) continue;
    for (auto& [u, len] : g.neighbors(v)) {
      double nd = d + weight_of(u);
      if (nd < dist[u] - kEps) {
        pq.erase({dist[u], u});
        dist[u] = nd;
        pq.insert({nd, u});
      }
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Exact flow oracles on the split network: vertex v becomes arc
// (v_in -> v_out) carrying u(v), c(v); undirected edge {x,y} becomes arcs
// x_out -> y_in and y_out -> x_in with the edge's capacity and cost.

namespace detail {

struct Arc {
  int to;
  Rat cap, flow, cost;
  int rev;
  VertexId ou = -1, ov = -1;  // original directed edge, -1 for split arcs
};

struct Net {
  std::vector<std::vector<Arc>> adj;
  std::map<VertexId, int> in_id, out_id;
  Rat big_m;
  int src = -1, snk = -1;

  int new_node() {
    adj.emplace_back();
    return static_cast<int>(adj.size()) - 1;
  }

  void add_arc(int from, int to, const Rat& cap, const Rat& cost, VertexId ou, VertexId ov) {
    Arc fwd{to, cap, Rat(0), cost, static_cast<int>(adj[to].size()), ou, ov};
    Arc bwd{from, Rat(0), Rat(0), Rat(0) - cost, static_cast<int>(adj[from].size()), -1, -1};
    adj[from].push_back(fwd);
    adj[to].push_back(bwd);
  }

  void push(int node, int idx, const Rat& amt) {
    Arc& a = adj[node][idx];
    a.flow = a.flow + amt;
    adj[a.to][a.rev].flow = adj[a.to][a.rev].flow - amt;
  }

  Rat residual(int node, int idx) const {
    const Arc& a = adj[node][idx];
    return a.cap - a.flow;
  }
};

inline Net build_net(const FlowInstance& inst) {
  Net net;
  double finite_sum = 1.0;
  for (VertexId v : inst.g.vertices())
    if (inst.g.vertex_cap(v) != kInf) finite_sum += inst.g.vertex_cap(v);
  for (auto& [k, c] : inst.edge_cap)
    if (c != kInf) finite_sum += c;
  net.big_m = Rat::from_double(std::ceil(finite_sum));
  auto cap_of = [&](double c) { return c == kInf ? net.big_m : Rat::from_double(c); };

  for (VertexId v : inst.g.vertices()) {
    net.in_id[v] = net.new_node();
    net.out_id[v] = net.new_node();
    // The path LP leaves the terminals uncapacitated.
    Rat cap = (v == inst.s || v == inst.t) ? net.big_m : cap_of(inst.g.vertex_cap(v));
    net.add_arc(net.in_id[v], net.out_id[v], cap, Rat::from_double(inst.g.vertex_cost(v)), -1, -1);
  }
  for (auto& [u, v, wt] : inst.g.undirected_edges()) {
    Rat c = cap_of(inst.ecap(u, v));
    Rat k = Rat::from_double(inst.ecost(u, v));
    net.add_arc(net.out_id[u], net.in_id[v], c, k, u, v);
    net.add_arc(net.out_id[v], net.in_id[u], c, k, v, u);
  }
  net.src = net.in_id.at(inst.s);
  net.snk = net.out_id.at(inst.t);
  return net;
}

inline PseudoFlow extract_flow(const Net& net) {
  PseudoFlow f;
  for (auto& outgoing : net.adj)
    for (auto& a : outgoing)
      if (a.ou >= 0 && a.flow.positive()) f.add(a.ou, a.ov, a.flow.to_double());
  return f;
}

}  // namespace detail

struct MaxFlowResult {
  double value = 0.0;
  PseudoFlow flow;
};

// Exact max flow by Edmonds-Karp (BFS shortest augmenting paths) on the
// split network; exact in rational arithmetic.
inline MaxFlowResult max_flow(const FlowInstance& inst) {
  auto net = detail::build_net(inst);
  Rat total(0);
  while (true) {
    std::vector<std::pair<int, int>> pred(net.adj.size(), {-1, -1});
    std::vector<bool> seen(net.adj.size(), false);
    std::queue<int> q;
    q.push(net.src);
    seen[net.src] = true;
    while (!q.empty() && !seen[net.snk]) {
      int v = q.front();
      q.pop();
      for (int i = 0; i < static_cast<int>(net.adj[v].size()); ++i) {
        const auto& a = net.adj[v][i];
        if (!seen[a.to] && net.residual(v, i).positive()) {
          seen[a.to] = true;
          pred[a.to] = {v, i};
          q.push(a.to);
        }
      }
    }
    if (!seen[net.snk]) break;
    Rat bottleneck = net.big_m;
    for (int v = net.snk; v != net.src;) {
      auto [pv, pi] = pred[v];
      bottleneck = rmin(bottleneck, net.residual(pv, pi));
      v = pv;
    }
    for (int v = net.snk; v != net.src;) {
      auto [pv, pi] = pred[v];
      net.push(pv, pi, bottleneck);
      v = pv;
    }
    total = total + bottleneck;
  }
  return {total.to_double(), detail::extract_flow(net)};
}

// Exact maximum bounded-cost flow via successive shortest (unit-cost) paths
// with budget tracking; partial final augmentation lands exactly on the
// budget. Documented oracle scale: small instances only.
struct MbcfResult {
  double value = 0.0;
  double cost = 0.0;
  PseudoFlow flow;
};

inline MbcfResult mbcf(const FlowInstance& inst) {
  DECFLOW_CHECK(inst.g.num_vertices() <= 60, "oracle::mbcf: instance too large for the oracle");
  auto net = detail::build_net(inst);
  Rat budget = Rat::from_double(inst.budget);
  Rat value(0), spent(0);
  const Rat kNoDist = net.big_m * net.big_m * Rat(4);
  while (true) {
    // Bellman-Ford over the residual graph (costs may be negative on
    // reverse arcs; no negative cycles by SSP invariant).
    int n = static_cast<int>(net.adj.size());
    std::vector<Rat> dist(n, kNoDist);
    std::vector<std::pair<int, int>> pred(n, {-1, -1});
    dist[net.src] = Rat(0);
    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (int v = 0; v < n; ++v) {
        if (dist[v] == kNoDist) continue;
        for (int i = 0; i < static_cast<int>(net.adj[v].size()); ++i) {
          const auto& a = net.adj[v][i];
          if (!net.residual(v, i).positive()) continue;
          Rat nd = dist[v] + a.cost;
          if (nd < dist[a.to]) {
            dist[a.to] = nd;
            pred[a.to] = {v, i};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[net.snk] == kNoDist) break;
    Rat unit_cost = dist[net.snk];
    Rat bottleneck = net.big_m;
    for (int v = net.snk; v != net.src;) {
      auto [pv, pi] = pred[v];
      bottleneck = rmin(bottleneck, net.residual(pv, pi));
      v = pv;
    }
    if (unit_cost.positive()) {
      Rat affordable = (budget - spent) / unit_cost;
      bottleneck = rmin(bottleneck, affordable);
    }
    if (!bottleneck.positive()) break;
    for (int v = net.snk; v != net.src;) {
      auto [pv, pi] = pred[v];
      net.push(pv, pi, bottleneck);
      v = pv;
    }
    value = value + bottleneck;
    spent = spent + unit_cost * bottleneck;
    if (spent == budget && unit_cost.positive()) {
      // Future paths cost at least as much per unit; budget exhausted.
      break;
    }
  }
  return {value.to_double(), spent.to_double(), detail::extract_flow(net)};
}

// ---------------------------------------------------------------------------
// Exhaustive sparse vertex cut: minimizes kappa(S)/|L cap X| over all vertex
// cuts (L,S,R) with |L cap X| <= |R cap X|, both sides meeting X. |V| <= 16.

struct SparseCut {
  std::vector<VertexId> L, S, R;
  double kappa_s = 0.0;
  int l_side = 0;  // |L cap X|
  double sparsity() const { return kappa_s / std::max(1, l_side); }
};

inline std::optional<SparseCut> sparse_cut(const DynGraph& g, const std::set<VertexId>& X,
                                           const std::map<VertexId, double>& kappa,
                                           double threshold) {
  std::vector<VertexId> vs(g.vertices().begin(), g.vertices().end());
  int n = static_cast<int>(vs.size());
  DECFLOW_CHECK(n <= 16, "oracle::sparse_cut: |V| > 16");
  std::map<VertexId, int> idx;
  for (int i = 0; i < n; ++i) idx[vs[i]] = i;

  std::optional<SparseCut> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    // mask = separator S; split the remaining components into L and R.
    double ks = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        auto it = kappa.find(vs[i]);
        ks += it == kappa.end() ? 1.0 : it->second;
      }
    // Components of G - S.
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (int i = 0; i < n; ++i) {
      if (comp[i] >= 0 || (mask & (1u << i))) continue;
      comp[i] = nc;
      std::vector<int> stack{i};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto& [w, len] : g.neighbors(vs[v])) {
          int j = idx[w];
          if (comp[j] < 0 && !(mask & (1u << j))) {
            comp[j] = nc;
            stack.push_back(j);
          }
        }
      }
      ++nc;
    }
    if (nc < 2) continue;
    // X-count per component; choose the achievable split that maximizes the
    // smaller side (subset-sum DP over component X-counts).
    std::vector<int> xc(nc, 0), size(nc, 0);
    for (int i = 0; i < n; ++i)
      if (comp[i] >= 0) {
        ++size[comp[i]];
        if (X.count(vs[i])) ++xc[comp[i]];
      }
    int total_x = std::accumulate(xc.begin(), xc.end(), 0);
    if (total_x == 0) continue;
    // Subset-sum DP over component X-counts, keeping one representative
    // component subset per achievable |L cap X|.
    std::vector<char> can(total_x + 1, 0);
    std::vector<std::uint32_t> rep(total_x + 1, 0);
    can[0] = 1;
    for (int c = 0; c < nc; ++c) {
      if (xc[c] == 0) continue;  // X-free components may go to either side
      for (int s = total_x; s >= xc[c]; --s) {
        if (!can[s] && can[s - xc[c]]) {
          can[s] = 1;
          rep[s] = rep[s - xc[c]] | (1u << c);
        }
      }
    }
    int best_a = -1;
    for (int a = 0; a <= total_x; ++a)
      if (can[a] && std::min(a, total_x - a) > std::min(best_a, total_x - best_a)) best_a = a;
    if (best_a < 0) continue;
    int small = std::min(best_a, total_x - best_a);
    if (small == 0) continue;
    double sparsity = ks / small;
    if (sparsity >= threshold) continue;
    if (!best || sparsity < best->sparsity()) {
      SparseCut cut;
      cut.kappa_s = ks;
      cut.l_side = small;
      std::uint32_t lmask = rep[best_a];
      bool l_is_small = best_a <= total_x - best_a;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          cut.S.push_back(vs[i]);
        } else {
          bool in_rep = lmask & (1u << comp[i]);
          bool to_l = l_is_small ? in_rep : !in_rep;
          (to_l ? cut.L : cut.R).push_back(vs[i]);
        }
      }
      best = cut;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exhaustive conductance of a weighted multigraph given as an edge list;
// used to certify expander witnesses. Returns min over nonempty proper
// subsets of w(boundary)/min(vol, vol-complement); infinity for < 2 vertices.

inline double min_conductance(const std::vector<VertexId>& vertices,
                              const std::vector<std::tuple<VertexId, VertexId, double>>& edges) {
  int n = static_cast<int>(vertices.size());
  if (n < 2) return kInf;
  DECFLOW_CHECK(n <= 20, "oracle::min_conductance: too many vertices for exhaustive check");
  std::map<VertexId, int> idx;
  for (int i = 0; i < n; ++i) idx[vertices[i]] = i;
  std::vector<double> vol(n, 0.0);
  for (auto& [u, v, w] : edges) {
    vol[idx.at(u)] += w;
    vol[idx.at(v)] += w;
  }
  double total_vol = std::accumulate(vol.begin(), vol.end(), 0.0);
  double best = kInf;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    double cut = 0, vs = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) vs += vol[i];
    double other = total_vol - vs;
    double denom = std::min(vs, other);
    if (denom <= 0) continue;
    for (auto& [u, v, w] : edges) {
      bool iu = mask & (1u << idx.at(u)), iv = mask & (1u << idx.at(v));
      if (iu != iv) cut += w;
    }
    best = std::min(best, cut / denom);
  }
  return best;
}

}  // namespace decflow::oracle

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "decflow/flow_instance.hpp"
#include "decflow/sssp_pi.hpp"

namespace decflow {

struct MwuParams {
  enum Mode { kTheory, kPractical };
  Mode mode = kPractical;
  double eps = 0.05;
  int tau = 0;                   // 0: ceil(10 log2 n), making Upsilon ~ 2
  double zeta_practical = 20.0;  // replaces the 3860 log n ... constant
  double delta_floor = 1e-6;     // practical-mode floor on delta
  bool track_ideal = false;
  std::uint64_t seed = 1;
  std::int64_t max_iterations = 20000000;
};

struct MwuConstants {
  double delta = 0.0, upsilon = 0.0, zeta = 0.0;
  int tau = 0;
  double beta = 1.0;
  std::string mode;
};

// Per-directed-edge steadiness: floor(log_Upsilon(min(budget term, capacity
// term) / (zeta beta))), clamped into [1, tau]. The budget term is infinite
// for zero-cost heads.
inline std::map<std::pair<VertexId, VertexId>, int> assign_steadiness(
    const FlowInstance& inst, double zeta, double beta, double upsilon, int tau,
    int* clamp_events = nullptr) {
  std::map<std::pair<VertexId, VertexId>, int> sigma;
  const double m = static_cast<double>(inst.g.num_edges());
  for (auto& [a, b, w] : inst.g.undirected_edges()) {
    for (auto [x, y] : {std::make_pair(a, b), std::make_pair(b, a)}) {
      double cy = inst.g.vertex_cost(y);
      double uy = inst.g.vertex_cap(y);
      double degy = static_cast<double>(inst.g.degree(y));
      double budget_term = cy > 0 ? inst.budget / (m * cy) : kInf;
      double cap_term = uy == kInf ? kInf : uy / degy;
      double arg = std::min(budget_term, cap_term) / (zeta * beta);
      int s;
      if (arg == kInf) {
        s = tau;
      } else {
        s = static_cast<int>(std::floor(std::log(arg) / std::log(upsilon) + 1e-12));
      }
      if ((s < 1 || s > tau) && clamp_events) ++*clamp_events;
      s = std::max(1, std::min(tau, s));
      sigma[{x, y}] = s;
    }
  }
  return sigma;
}

// gamma = ceil(X), X ~ Exp(ln Upsilon): for integers k >= 0,
// P[X > k] = Upsilon^{-k}, so P[gamma >= k+1] = Upsilon^{-k}.
inline int sample_threshold(double upsilon, Rng& rng) {
  double x = rng.exponential(std::log(upsilon));
  return static_cast<int>(std::ceil(x - 1e-15));
}

// Divisor turning the raw estimator into a capacity/cost-feasible flow.
inline double pseudo_flow_divisor(double eps, double delta) {
  return (1.0 + 10.0 * eps) * std::log((1.0 + eps) / delta) / std::log(1.0 + eps);
}

inline PseudoFlow scale_pseudo_flow(const PseudoFlow& f, double eps, double delta) {
  PseudoFlow out = f;
  out.scale(1.0 / pseudo_flow_divisor(eps, delta));
  return out;
}

// The estimator MWU: repeatedly pulls a (1+eps)-approximate shortest s-t
// path under w-comb(x) = w-hat(x) + roundpow(phi-hat) c(x) from the
// path-reporting SSSP structure, samples a steadiness threshold, and adds
// Upsilon^{sigma(e)} only to the selected low-steadiness edges, updating
// the weights exponentially. The raw estimator divided by
// (1+10 eps) log_{1+eps}((1+eps)/delta) is capacity- and cost-feasible.
class MwuSolver {
 public:
  MwuSolver(const FlowInstance& inst, MwuParams params)
      : inst_(inst), params_(params), rng_(params.seed) {
    DECFLOW_CHECK(inst_.vertex_capacitated(), "mwu: instance must be vertex-capacitated");
    const double n = static_cast<double>(inst_.g.num_vertices());
    const double m = static_cast<double>(inst_.g.num_edges());
    DECFLOW_CHECK(m >= 1, "mwu: empty graph");
    c_.tau = params_.tau > 0
                 ? params_.tau
                 : static_cast<int>(std::ceil(10.0 * std::log2(std::max(2.0, n))));
    c_.upsilon = std::pow(n, 10.0 / c_.tau);
    double delta_theory = std::pow(m, -1.0 / params_.eps);
    if (params_.mode == MwuParams::kTheory) {
      c_.delta = delta_theory;
      c_.zeta = 3860.0 * std::log2(std::max(2.0, n)) *
                std::log((1.0 + params_.eps) / c_.delta) / std::log(1.0 + params_.eps);
      c_.mode = "theory";
    } else {
      c_.delta = std::max(delta_theory, params_.delta_floor);
      c_.zeta = std::max(10.0, params_.zeta_practical);
      c_.mode = "practical";
    }
    c_.beta = 1.0;

    sigma_directed_ = assign_steadiness(inst_, c_.zeta, c_.beta, c_.upsilon, c_.tau,
                                        &clamp_events_);
    // The data structure keys steadiness by undirected edge; use the lower
    // orientation so increments only shrink and every cap still holds.
    for (auto& [e, s] : sigma_directed_) {
      auto key = EsTree::key(e.first, e.second);
      auto it = sigma_ds_.find(key);
      if (it == sigma_ds_.end())
        sigma_ds_[key] = s;
      else
        it->second = std::min(it->second, s);
    }

    for (VertexId v : inst_.g.vertices()) {
      if (v == inst_.s || v == inst_.t) {
        w_hat_[v] = 0.0;
        continue;
      }
      double u = inst_.g.vertex_cap(v);
      DECFLOW_CHECK(u != kInf && u > 0, "mwu: non-terminal vertex " << v << " needs finite u >= 1");
      w_hat_[v] = c_.delta / u;
    }
    phi_hat_ = inst_.budget > 0 ? c_.delta / inst_.budget : 0.0;
    phi_rounded_ = round_phi();

    std::map<VertexId, double> comb;
    for (VertexId v : inst_.g.vertices()) comb[v] = combined_weight(v);
    sssp_ = std::make_unique<SsspPi>(&inst_.g, inst_.s, inst_.t, comb, sigma_ds_, params_.eps,
                                     c_.tau);
    refresh_objective();
  }

  const MwuConstants& constants() const { return c_; }
  double objective() const { return objective_; }
  std::int64_t iterations() const { return iterations_; }
  int clamp_events() const { return clamp_events_; }
  const PseudoFlow& flow_estimate() const { return f_hat_; }
  const PseudoFlow& ideal_flow() const { return f_ideal_; }
  const std::map<VertexId, double>& weight_fn() const { return w_hat_; }
  double phi_hat() const { return phi_hat_; }
  const SsspPi& sssp() const { return *sssp_; }
  double divisor() const { return pseudo_flow_divisor(params_.eps, c_.delta); }

  bool done() const { return done_; }

  // One while-loop iteration; returns false once the loop guard fails.
  bool step() {
    if (done_) return false;
    if (objective_ >= 1.0) {
      done_ = true;
      return false;
    }
    if (!sssp_->connected()) {
      done_ = true;
      return false;
    }
    DECFLOW_CHECK(iterations_ < params_.max_iterations, "mwu: iteration safety stop");
    ++iterations_;
    int lambda = sssp_->min_path_steadiness();
    int gamma = sample_threshold(c_.upsilon, rng_);
    // Edges with sigma(e) - lambda strictly below gamma are updated, so
    // P[include | sigma - lambda = k] = Upsilon^{-k} exactly.
    auto selected = sssp_->threshold_subpath(lambda + gamma - 1);
    double c_hat = 0.0;
    std::map<VertexId, double> new_weights;
    for (auto& [x, y] : selected) {
      double add = std::pow(c_.upsilon, effective_sigma(x, y));
      f_hat_.add(x, y, add);
      if (y != inst_.s && y != inst_.t) {
        double u = inst_.g.vertex_cap(y);
        w_hat_[y] *= std::exp(params_.eps * add / u);
        objective_dirty_ = true;
        new_weights[y] = 0;  // recomputed below
      }
      c_hat += inst_.g.vertex_cost(y) * add;
    }
    if (params_.track_ideal) {
      for (auto& [x, y] : sssp_->threshold_subpath(c_.tau))
        f_ideal_.add(x, y, std::pow(c_.upsilon, lambda));
    }
    bool phi_stepped = false;
    if (inst_.budget > 0 && c_hat > 0) {
      phi_hat_ *= std::exp(params_.eps * c_hat / inst_.budget);
      double penalty = round_phi();
      if (penalty > phi_rounded_ + kEps) {
        phi_rounded_ = penalty;
        phi_stepped = true;
      }
    }
    // Forward weight increases: the cost term moves only when the rounded
    // phi-hat steps to the next power of (1+eps).
    if (phi_stepped) {
      for (VertexId v : inst_.g.vertices()) {
        if (v == inst_.s || v == inst_.t) continue;
        if (inst_.g.vertex_cost(v) > 0) new_weights[v] = 0;
      }
    }
    for (auto& [v, w] : new_weights) w = combined_weight(v);
    if (!new_weights.empty()) sssp_->increase_vertex_weights(new_weights);
    refresh_objective();
    return true;
  }

  const PseudoFlow& run() {
    while (step()) {
    }
    return f_hat_;
  }

  PseudoFlow scaled() const { return scale_pseudo_flow(f_hat_, params_.eps, c_.delta); }

  // Feasibility-tight rescale: divides by exactly the violation ratio
  // instead of the worst-case divisor. Never scales less than the
  // worst-case form would allow in value.
  PseudoFlow scaled_tight() const {
    double ratio = 1.0;
    for (auto& [v, x] : f_hat_.in_flows()) {
      if (v == inst_.s || v == inst_.t) continue;
      ratio = std::max(ratio, x / inst_.g.vertex_cap(v));
    }
    if (inst_.budget > 0) ratio = std::max(ratio, f_hat_.cost(inst_.g) / inst_.budget);
    PseudoFlow out = f_hat_;
    out.scale(1.0 / (ratio * (1.0 + 16.0 * kEps)));
    return out;
  }

  // Expected estimator increment into each vertex for the current frozen
  // path, over a fresh threshold sample (does not advance the solver).
  std::map<VertexId, double> simulate_increment(Rng& rng) const {
    std::map<VertexId, double> inc;
    if (!sssp_->connected()) return inc;
    int lambda = sssp_->min_path_steadiness();
    int gamma = sample_threshold(c_.upsilon, rng);
    for (auto& [x, y] : sssp_->threshold_subpath(lambda + gamma - 1))
      inc[y] += std::pow(c_.upsilon, effective_sigma(x, y));
    return inc;
  }

  // Ideal increment into each vertex (what exact routing would add).
  std::map<VertexId, double> ideal_increment() const {
    std::map<VertexId, double> inc;
    if (!sssp_->connected()) return inc;
    int lambda = sssp_->min_path_steadiness();
    for (auto& [x, y] : sssp_->threshold_subpath(c_.tau))
      inc[y] += std::pow(c_.upsilon, lambda);
    return inc;
  }

  double effective_sigma(VertexId x, VertexId y) const {
    return static_cast<double>(sigma_ds_.at(EsTree::key(x, y)));
  }

  // Single structured-text run record: iterations, final objective, flow
  // value, and the per-mode constants.
  std::string report() const {
    std::ostringstream os;
    os << "mode " << c_.mode << " iterations " << iterations_ << " objective "
       << fmt_num(objective_) << " value " << fmt_num(f_hat_.value(inst_.t) / divisor())
       << " delta " << fmt_num(c_.delta) << " upsilon " << fmt_num(c_.upsilon) << " zeta "
       << fmt_num(c_.zeta) << " tau " << c_.tau << " sigma-clamps " << clamp_events_;
    return os.str();
  }

 private:
  double round_phi() const {
    return phi_hat_ > 0 ? round_up_power(phi_hat_, 1.0 + params_.eps) : 0.0;
  }

  double combined_weight(VertexId v) const {
    if (v == inst_.s || v == inst_.t) return 0.0;
    return w_hat_.at(v) + phi_rounded_ * inst_.g.vertex_cost(v);
  }

  void refresh_objective() {
    double obj = inst_.budget > 0 ? inst_.budget * phi_hat_ : 0.0;
    for (auto& [v, w] : w_hat_) {
      if (v == inst_.s || v == inst_.t) continue;
      obj += inst_.g.vertex_cap(v) * w;
    }
    objective_ = obj;
    objective_dirty_ = false;
  }

  FlowInstance inst_;
  MwuParams params_;
  Rng rng_;
  MwuConstants c_;
  std::map<std::pair<VertexId, VertexId>, int> sigma_directed_;
  std::map<EsTree::EdgeKey, int> sigma_ds_;
  std::map<VertexId, double> w_hat_;
  double phi_hat_ = 0.0, phi_rounded_ = 0.0;
  double objective_ = 0.0;
  bool objective_dirty_ = false;
  bool done_ = false;
  std::int64_t iterations_ = 0;
  int clamp_events_ = 0;
  PseudoFlow f_hat_, f_ideal_;
  std::unique_ptr<SsspPi> sssp_;
};

}  // namespace decflow

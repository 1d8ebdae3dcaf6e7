#pragma once

// Layered message passing (LaMP) detection for GSM.
//
// Factor graph: M observation nodes y_j, N variable nodes x_i over the
// domain {0} ∪ A (symbols pre-scaled by sqrt(sigma2_x / R)), N activity nodes
// a_i and one cardinality node enforcing sum_i a_i = R.
//
// Messages held in LampState:
//   v_ji(x)  observation j -> variable i   (stored as normalized log-probs)
//   p_ij(x)  variable i -> observation j
//   q_i(b)   variable i -> activity node
//   u_i(b)   cardinality constraint -> variable i
// One iteration: interference moments from p, v, u from the previous q,
// p, q, then damping of p and q.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gsm/detect/phi.hpp"
#include "gsm/detect/result.hpp"
#include "gsm/linalg.hpp"
#include "gsm/signal.hpp"

namespace gsm {

struct LampConfig {
  unsigned iterations = 15;
  /// new <- damping * new + (1 - damping) * old, in (0, 1].
  double damping = 0.5;
  PhiMethod phi = PhiMethod::deconvolution;

  void validate() const {
    if (iterations < 1) throw usage_error("LaMP needs at least one iteration");
    if (!(damping > 0.0 && damping <= 1.0)) throw usage_error("LaMP damping must lie in (0, 1]");
  }
};

/// Interference variance floor.
inline constexpr double kMinInterferenceVariance = 1e-12;

struct LampState {
  unsigned n_tx = 0;
  unsigned n_rx = 0;
  unsigned n_rf = 0;
  /// domain[0] = 0, domain[1 + k] = scale * alphabet point k.
  std::vector<cplx> domain;

  std::vector<double> p;      // [(i * M + j) * K + x]
  std::vector<double> log_v;  // [(j * N + i) * K + x], log-normalized
  std::vector<double> q1;     // q_i(1)
  std::vector<ActivityMessage> u;
  std::vector<cplx> mu;       // [j * N + i], mean of the interference g_ji
  std::vector<double> var;    // [j * N + i], its variance including noise

  /// Number of v_ji(x) evaluations performed so far.
  std::uint64_t observation_evaluations = 0;

  [[nodiscard]] std::size_t domain_size() const noexcept { return domain.size(); }
  [[nodiscard]] std::size_t p_index(unsigned i, unsigned j, std::size_t x) const noexcept {
    return (static_cast<std::size_t>(i) * n_rx + j) * domain.size() + x;
  }
  [[nodiscard]] std::size_t v_index(unsigned j, unsigned i, std::size_t x) const noexcept {
    return (static_cast<std::size_t>(j) * n_tx + i) * domain.size() + x;
  }

  /// Initial messages: p uniform over {0} ∪ A, q_i(1) = R/N, u uniform.
  static LampState initial(const GsmConfig& cfg) {
    LampState s;
    s.n_tx = cfg.n_tx();
    s.n_rx = cfg.n_rx();
    s.n_rf = cfg.n_rf();
    s.domain.push_back(cplx{});
    const double scale = cfg.symbol_scale();
    for (const auto& a : cfg.alphabet().points()) s.domain.push_back(scale * a);
    const std::size_t k = s.domain.size();
    s.p.assign(static_cast<std::size_t>(s.n_tx) * s.n_rx * k, 1.0 / static_cast<double>(k));
    s.log_v.assign(static_cast<std::size_t>(s.n_rx) * s.n_tx * k, -std::log(static_cast<double>(k)));
    s.q1.assign(s.n_tx, static_cast<double>(s.n_rf) / s.n_tx);
    s.u.assign(s.n_tx, ActivityMessage{0.5, 0.5});
    s.mu.assign(static_cast<std::size_t>(s.n_rx) * s.n_tx, cplx{});
    s.var.assign(static_cast<std::size_t>(s.n_rx) * s.n_tx, 0.0);
    return s;
  }
};

namespace detail {

/// In-place normalization of log-weights to log-probabilities.
inline void log_normalize(std::span<double> lw) {
  const double z = log_sum_exp(lw);
  if (!std::isfinite(z)) {
    const double uniform = -std::log(static_cast<double>(lw.size()));
    std::fill(lw.begin(), lw.end(), uniform);
    return;
  }
  for (auto& x : lw) x -= z;
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// Gaussian approximation of g_ji = sum_{l != i} H_jl x_l + w_j with x_l ~ p_lj:
///   mu_ji  = sum_{l != i} H_jl E[x_l]
///   var_ji = sigma2 + sum_{l != i} |H_jl|^2 Var[x_l]
/// computed from per-row totals minus the own term, O(M N |A|).
inline void interference_stats(LampState& s, const cmat& h, double sigma2) {
  const std::size_t k = s.domain_size();
  std::vector<cplx> mean(s.n_tx);
  std::vector<double> variance(s.n_tx);
  for (unsigned j = 0; j < s.n_rx; ++j) {
    cplx total_mean{};
    double total_var = 0.0;
    for (unsigned l = 0; l < s.n_tx; ++l) {
      const double* pl = &s.p[s.p_index(l, j, 0)];
      cplx m{};
      double second = 0.0;
      for (std::size_t x = 0; x < k; ++x) {
        m += pl[x] * s.domain[x];
        second += pl[x] * std::norm(s.domain[x]);
      }
      mean[l] = m;
      variance[l] = std::max(0.0, second - std::norm(m));
      total_mean += h(j, l) * m;
      total_var += std::norm(h(j, l)) * variance[l];
    }
    for (unsigned i = 0; i < s.n_tx; ++i) {
      s.mu[j * s.n_tx + i] = total_mean - h(j, i) * mean[i];
      s.var[j * s.n_tx + i] =
          std::max(kMinInterferenceVariance, sigma2 + total_var - std::norm(h(j, i)) * variance[i]);
    }
  }
}

/// v_ji(x) ∝ exp(-|y_j - mu_ji - H_ji x|^2 / var_ji), normalized over the
/// domain (circular complex Gaussian form).
inline void observation_messages(LampState& s, const cmat& h, const cvec& y) {
  const std::size_t k = s.domain_size();
  for (unsigned j = 0; j < s.n_rx; ++j) {
    for (unsigned i = 0; i < s.n_tx; ++i) {
      const cplx resid = y(j) - s.mu[j * s.n_tx + i];
      const double inv_var = 1.0 / s.var[j * s.n_tx + i];
      double* lv = &s.log_v[s.v_index(j, i, 0)];
      for (std::size_t x = 0; x < k; ++x) lv[x] = -std::norm(resid - h(j, i) * s.domain[x]) * inv_var;
      detail::log_normalize({lv, k});
      s.observation_evaluations += k;
    }
  }
}

/// Sum over all observations of log v_ki(x), for each (i, x).
inline std::vector<double> accumulated_log_v(const LampState& s) {
  const std::size_t k = s.domain_size();
  std::vector<double> acc(static_cast<std::size_t>(s.n_tx) * k, 0.0);
  for (unsigned j = 0; j < s.n_rx; ++j) {
    for (unsigned i = 0; i < s.n_tx; ++i) {
      const double* lv = &s.log_v[s.v_index(j, i, 0)];
      for (std::size_t x = 0; x < k; ++x) acc[i * k + x] += lv[x];
    }
  }
  return acc;
}

/// p_ij(x) ∝ u_i(x != 0) prod_{k != j} v_ki(x), blended into the previous p
/// with the damping factor.
inline void variable_messages(LampState& s, double damping) {
  const std::size_t k = s.domain_size();
  const auto acc = accumulated_log_v(s);
  std::vector<double> lp(k);
  for (unsigned i = 0; i < s.n_tx; ++i) {
    const double log_off = detail::safe_log(s.u[i][0]);
    const double log_on = detail::safe_log(s.u[i][1]);
    for (unsigned j = 0; j < s.n_rx; ++j) {
      const double* lv = &s.log_v[s.v_index(j, i, 0)];
      for (std::size_t x = 0; x < k; ++x) lp[x] = (x == 0 ? log_off : log_on) + acc[i * k + x] - lv[x];
      detail::log_normalize(lp);
      double* pij = &s.p[s.p_index(i, j, 0)];
      for (std::size_t x = 0; x < k; ++x) pij[x] = damping * std::exp(lp[x]) + (1.0 - damping) * pij[x];
    }
  }
}

/// q_i(1) ∝ sum_{x in A} prod_k v_ki(x), q_i(0) ∝ prod_k v_ki(0); damped.
inline void activity_messages(LampState& s, double damping) {
  const std::size_t k = s.domain_size();
  const auto acc = accumulated_log_v(s);
  for (unsigned i = 0; i < s.n_tx; ++i) {
    const double log_on = log_sum_exp(std::span<const double>(&acc[i * k + 1], k - 1));
    const double log_off = acc[i * k];
    // q(1) = 1 / (1 + exp(log_off - log_on)), guarded for infinities.
    double on = 0.5;
    if (std::isfinite(log_on) || std::isfinite(log_off)) {
      const double d = log_off - log_on;
      on = d > 700.0 ? 0.0 : (d < -700.0 ? 1.0 : 1.0 / (1.0 + std::exp(d)));
    }
    s.q1[i] = damping * on + (1.0 - damping) * s.q1[i];
  }
}

/// u_i from the current q by the configured phi method.
inline void constraint_update(LampState& s, PhiMethod method) { s.u = constraint_messages(s.q1, s.n_rf, method); }

/// Layer 1 of one iteration: moments, observation and variable messages.
/// Expects u to be current.
inline void layer1_messages(LampState& s, const cmat& h, const cvec& y, double sigma2, double damping) {
  interference_stats(s, h, sigma2);
  observation_messages(s, h, y);
  variable_messages(s, damping);
}

/// Layer 2: activity messages from v, then constraint messages from q.
inline void layer2_messages(LampState& s, const LampConfig& cfg) {
  activity_messages(s, cfg.damping);
  constraint_update(s, cfg.phi);
}

/// One full iteration in schedule order: moments, v, u (from the previous
/// q), p, q, with damping applied to p and q.
inline void lamp_iteration(LampState& s, const cmat& h, const cvec& y, double sigma2, const LampConfig& cfg) {
  interference_stats(s, h, sigma2);
  observation_messages(s, h, y);
  constraint_update(s, cfg.phi);
  variable_messages(s, cfg.damping);
  activity_messages(s, cfg.damping);
}

/// Per-antenna beliefs over {0} ∪ A: u_i(x != 0) prod_k v_ki(x), normalized.
/// Row-major N x K.
inline std::vector<double> lamp_beliefs(const LampState& s) {
  const std::size_t k = s.domain_size();
  const auto acc = accumulated_log_v(s);
  std::vector<double> out(static_cast<std::size_t>(s.n_tx) * k);
  std::vector<double> lb(k);
  for (unsigned i = 0; i < s.n_tx; ++i) {
    for (std::size_t x = 0; x < k; ++x) lb[x] = detail::safe_log(s.u[i][x == 0 ? 0 : 1]) + acc[i * k + x];
    detail::log_normalize(lb);
    for (std::size_t x = 0; x < k; ++x) out[i * k + x] = std::exp(lb[x]);
  }
  return out;
}

/// Activity score beta_i = q_i(1) u_i(1) / (q_i(1) u_i(1) + q_i(0) u_i(0)).
inline std::vector<double> activity_scores(const LampState& s) {
  std::vector<double> beta(s.n_tx);
  for (unsigned i = 0; i < s.n_tx; ++i) {
    const double on = s.q1[i] * s.u[i][1];
    const double off = (1.0 - s.q1[i]) * s.u[i][0];
    beta[i] = on + off > 0.0 ? on / (on + off) : 0.5;
  }
  return beta;
}

/// Hard decision from final messages: support from the activity scores
/// (repaired into the allowed set if needed); on each active antenna the
/// alphabet point maximizing prod_k v_ki(x).
inline DetectionResult harden(const LampState& s, const GsmConfig& cfg) {
  const std::size_t k = s.domain_size();
  const auto beta = activity_scores(s);
  SupportDecision support = choose_support(beta, cfg);
  const auto acc = accumulated_log_v(s);
  GsmSymbol sym;
  sym.pattern = support.pattern;
  for (const auto i : sym.pattern.indices()) {
    std::size_t best = 1;
    for (std::size_t x = 2; x < k; ++x) {
      if (acc[i * k + x] > acc[i * k + best]) best = x;
    }
    sym.labels.push_back(static_cast<std::uint32_t>(best - 1));
  }
  return make_result(std::move(sym), cfg, support.repaired);
}

/// Runs the configured number of iterations from the initial state.
inline LampState lamp_run(const cvec& y, const cmat& h, const GsmConfig& cfg, const LampConfig& lamp) {
  lamp.validate();
  if (h.rows() != cfg.n_rx() || h.cols() != cfg.n_tx() || y.size() != cfg.n_rx()) {
    throw usage_error("LaMP input dimensions disagree with the configuration");
  }
  LampState s = LampState::initial(cfg);
  for (unsigned it = 0; it < lamp.iterations; ++it) lamp_iteration(s, h, y, cfg.sigma2(), lamp);
  return s;
}

inline DetectionResult lamp_detect(const cvec& y, const cmat& h, const GsmConfig& cfg, const LampConfig& lamp = {}) {
  return harden(lamp_run(y, h, cfg, lamp), cfg);
}

}  // namespace gsm

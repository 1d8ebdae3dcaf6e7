#pragma once

// Capacity bounds for GSM with Gaussian symbols on the active antennas.
//
// Given H, the received vector is a zero-mean Gaussian mixture with one
// component per activation pattern,
//   Phi_i = (sigma2_x / R) H_{S_i} H_{S_i}^H + sigma2 I_M,   weights 1/L,
// and every bound below is a bound on its differential entropy h(y). The
// capacity-domain values subtract h(w) = M log2(pi e sigma2). All
// determinants go through Cholesky and all mixture sums through log-sum-exp,
// so nothing overflows at high SNR or large M.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsm/channel.hpp"
#include "gsm/linalg.hpp"
#include "gsm/parallel.hpp"
#include "gsm/rng.hpp"
#include "gsm/signal.hpp"

namespace gsm {

struct MixtureParams {
  std::vector<cmat> covariances;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return covariances.size(); }
  [[nodiscard]] Eigen::Index dim() const { return covariances.empty() ? 0 : covariances.front().rows(); }
};

/// Column submatrix of H on the pattern's support.
inline cmat support_columns(const cmat& h, const ActivationPattern& p) {
  cmat hs(h.rows(), static_cast<Eigen::Index>(p.size()));
  for (std::size_t r = 0; r < p.size(); ++r) hs.col(static_cast<Eigen::Index>(r)) = h.col(p[r]);
  return hs;
}

/// Phi_i = E[y y^H | A_i] for each pattern, uniform weights.
inline MixtureParams mixture_covariances(const cmat& h, std::span<const ActivationPattern> patterns, double sigma2_x,
                                         double sigma2) {
  if (!(sigma2 > 0.0)) throw usage_error("mixture covariances need sigma2 > 0");
  if (patterns.empty()) throw usage_error("empty pattern set");
  MixtureParams mix;
  mix.covariances.reserve(patterns.size());
  for (const auto& p : patterns) {
    const cmat hs = support_columns(h, p);
    const double c = sigma2_x / static_cast<double>(p.size());
    cmat phi = c * (hs * hs.adjoint());
    phi.diagonal().array() += sigma2;
    mix.covariances.push_back(std::move(phi));
  }
  mix.weights.assign(patterns.size(), 1.0 / static_cast<double>(patterns.size()));
  return mix;
}

/// How the L^2 pairwise sum of the Jensen (Renyi-2) bound is evaluated.
struct PairSumOptions {
  /// Pairs evaluated exactly when L^2 is at or below this.
  std::uint64_t pair_budget = std::uint64_t{1} << 22;
  /// Above the budget: subsample (true) or refuse with infeasible_error.
  bool allow_subsampling = false;
};

struct L1Evaluation {
  double value = 0.0;  // l1 in bits
  std::uint64_t pairs_evaluated = 0;
  bool subsampled = false;
};

namespace detail {

/// ln det(A + B) for Hermitian PD A, B.
inline double ln_det_sum(const cmat& a, const cmat& b) {
  if (a.rows() == 1) {
    const double v = std::real(a(0, 0)) + std::real(b(0, 0));
    if (!(v > 0.0)) throw numerical_error("non-positive 1x1 covariance");
    return std::log(v);
  }
  return log2det_hpd(a + b) * kLn2;
}

inline double ln_det(const cmat& a) {
  if (a.rows() == 1) {
    const double v = std::real(a(0, 0));
    if (!(v > 0.0)) throw numerical_error("non-positive 1x1 covariance");
    return std::log(v);
  }
  return log2det_hpd(a) * kLn2;
}

}  // namespace detail

/// Jensen lower bound l1 = -log2[ 1/(L^2 pi^M) sum_ij 1/det(Phi_i + Phi_j) ].
///
/// Exact when L^2 <= pair_budget. Otherwise, if subsampling is allowed, the
/// L diagonal terms are summed exactly and the off-diagonal sum is estimated
/// from pair_budget unordered pairs drawn uniformly with replacement from
/// `rng`. The off-diagonal estimate is unbiased in the linear domain; after
/// the logarithm the reported l1 is biased slightly upward.
inline L1Evaluation bound_l1(const MixtureParams& mix, const PairSumOptions& opts = {}, RngStream* rng = nullptr) {
  const std::size_t l = mix.size();
  if (l == 0) throw usage_error("empty mixture");
  const auto m = static_cast<double>(mix.dim());
  const double ll = static_cast<double>(l);
  L1Evaluation out;
  double ln_sum = 0.0;
  const std::uint64_t pairs = static_cast<std::uint64_t>(l) * l;

  if (pairs <= opts.pair_budget) {
    std::vector<double> terms;
    terms.reserve(l * (l + 1) / 2);
    for (std::size_t i = 0; i < l; ++i) {
      terms.push_back(-detail::ln_det_sum(mix.covariances[i], mix.covariances[i]));
      for (std::size_t j = i + 1; j < l; ++j) {
        terms.push_back(std::log(2.0) - detail::ln_det_sum(mix.covariances[i], mix.covariances[j]));
      }
    }
    ln_sum = log_sum_exp(terms);
    out.pairs_evaluated = pairs;
  } else {
    if (!opts.allow_subsampling) {
      throw infeasible_error("L^2 = " + std::to_string(pairs) + " pattern pairs exceed the pair budget " +
                             std::to_string(opts.pair_budget) + " (enable pair subsampling)");
    }
    if (rng == nullptr) throw usage_error("pair subsampling needs a random stream");
    std::vector<double> diag(l);
    for (std::size_t i = 0; i < l; ++i) diag[i] = -detail::ln_det_sum(mix.covariances[i], mix.covariances[i]);
    const std::uint64_t k = std::max<std::uint64_t>(opts.pair_budget, 1);
    std::vector<double> off(k);
    for (std::uint64_t s = 0; s < k; ++s) {
      const auto i = static_cast<std::size_t>(rng->uniform_index(l));
      auto j = static_cast<std::size_t>(rng->uniform_index(l - 1));
      if (j >= i) ++j;
      off[s] = -detail::ln_det_sum(mix.covariances[i], mix.covariances[j]);
    }
    const double ln_off = std::log(ll * (ll - 1.0)) + log_sum_exp(off) - std::log(static_cast<double>(k));
    const double parts[2] = {log_sum_exp(diag), ln_off};
    ln_sum = log_sum_exp(parts);
    out.pairs_evaluated = l + k;
    out.subsampled = true;
  }
  out.value = (-ln_sum + 2.0 * std::log(ll) + m * std::log(kPi)) / kLn2;
  return out;
}

/// Concavity lower bound l2 = (1/L) sum_i log2 det(pi e Phi_i).
inline double bound_l2(const MixtureParams& mix) {
  if (mix.size() == 0) throw usage_error("empty mixture");
  const auto m = static_cast<double>(mix.dim());
  CompensatedSum s;
  for (const auto& phi : mix.covariances) s.add(detail::ln_det(phi) / kLn2);
  return m * std::log2(kPi * kE) + s.value() / static_cast<double>(mix.size());
}

/// u1 = h(y | A) + H(A) = l2 + log2 L.
inline double bound_u1(const MixtureParams& mix) {
  return bound_l2(mix) + std::log2(static_cast<double>(mix.size()));
}

/// Gaussian maximum-entropy bound u2 = log2 det(pi e Phi'), where Phi' is the
/// true covariance of y: (sigma2_x / (R L)) H (sum_i D_i) H^H + sigma2 I.
inline double bound_u2(const cmat& h, std::span<const ActivationPattern> patterns, double sigma2_x, double sigma2) {
  if (!(sigma2 > 0.0)) throw usage_error("u2 needs sigma2 > 0");
  if (patterns.empty()) throw usage_error("empty pattern set");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(h.cols());
  for (const auto& p : patterns) {
    for (const auto i : p.indices()) counts(i) += 1.0;
  }
  const double c = sigma2_x / (static_cast<double>(patterns.front().size()) * static_cast<double>(patterns.size()));
  cmat phi = c * (h * counts.asDiagonal() * h.adjoint());
  phi.diagonal().array() += sigma2;
  return static_cast<double>(h.rows()) * std::log2(kPi * kE) + detail::ln_det(phi) / kLn2;
}

/// Per-realization bounds on h(y), in bits.
struct BoundsSample {
  double l1 = 0.0;
  double l2 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  bool l1_subsampled = false;
};

struct CapacityOptions {
  /// Use all C(N, R) patterns instead of the 2^eta_a signalling set.
  bool full_pattern_set = false;
  PairSumOptions pairs{};
  /// Mixture components evaluated per sample in the Monte Carlo estimator.
  std::uint64_t component_budget = std::uint64_t{1} << 14;
  unsigned threads = 0;
};

inline std::vector<ActivationPattern> capacity_patterns(const GsmConfig& cfg, const CapacityOptions& opts) {
  return opts.full_pattern_set ? full_pattern_set(cfg) : pattern_set(cfg);
}

/// All four bounds for one channel realization.
inline BoundsSample bounds_for_channel(const cmat& h, std::span<const ActivationPattern> patterns, double sigma2_x,
                                       double sigma2, const PairSumOptions& pair_opts, RngStream* pair_rng) {
  const MixtureParams mix = mixture_covariances(h, patterns, sigma2_x, sigma2);
  BoundsSample s;
  const L1Evaluation l1 = bound_l1(mix, pair_opts, pair_rng);
  s.l1 = l1.value;
  s.l1_subsampled = l1.subsampled;
  s.l2 = bound_l2(mix);
  s.u1 = s.l2 + std::log2(static_cast<double>(patterns.size()));
  s.u2 = bound_u2(h, patterns, sigma2_x, sigma2);
  return s;
}

/// Channel realization `index` of a seeded experiment; shared across SNRs and
/// across bound types.
inline cmat experiment_channel(std::uint64_t seed, std::uint64_t index, unsigned n_rx, unsigned n_tx) {
  RngStream rng(seed, stream_id(StreamDomain::channel, index));
  return sample_channel(n_rx, n_tx, rng);
}

/// Channel-averaged bounds in bits per channel use, i.e. each per-realization
/// entropy bound minus M log2(pi e sigma2).
struct CapacityBounds {
  MeanEstimate l1, l2, u1, u2;
  double lower = 0.0;  // max(L1, L2)
  double upper = 0.0;  // min(U1, U2)
  bool l1_subsampled = false;
  std::uint64_t num_patterns = 0;
  /// Per-channel capacity-domain values, index = channel index.
  std::vector<BoundsSample> per_channel;
};

inline CapacityBounds capacity_bounds(const GsmConfig& cfg, double snr_db, std::uint64_t num_channels,
                                      std::uint64_t seed, const CapacityOptions& opts = {}) {
  if (num_channels < 1) throw usage_error("need at least one channel realization");
  const GsmConfig c = cfg.with_snr_db(snr_db);
  if (!(c.sigma2() > 0.0)) throw usage_error("capacity bounds need sigma2 > 0");
  const auto patterns = capacity_patterns(c, opts);
  const double noise_entropy = c.n_rx() * std::log2(kPi * kE * c.sigma2());

  CapacityBounds out;
  out.num_patterns = patterns.size();
  out.per_channel.resize(num_channels);
  parallel_for(num_channels, opts.threads, [&](std::uint64_t k) {
    const cmat h = experiment_channel(seed, k, c.n_rx(), c.n_tx());
    RngStream pair_rng(seed, stream_id(StreamDomain::pair_subsample, k));
    BoundsSample s = bounds_for_channel(h, patterns, c.sigma2_x(), c.sigma2(), opts.pairs, &pair_rng);
    s.l1 -= noise_entropy;
    s.l2 -= noise_entropy;
    s.u1 -= noise_entropy;
    s.u2 -= noise_entropy;
    out.per_channel[k] = s;
  });

  std::vector<double> buf(num_channels);
  auto collect = [&](double BoundsSample::*field) {
    for (std::uint64_t k = 0; k < num_channels; ++k) buf[k] = out.per_channel[k].*field;
    return mean_and_stderr(buf);
  };
  out.l1 = collect(&BoundsSample::l1);
  out.l2 = collect(&BoundsSample::l2);
  out.u1 = collect(&BoundsSample::u1);
  out.u2 = collect(&BoundsSample::u2);
  out.lower = std::max(out.l1.mean, out.l2.mean);
  out.upper = std::min(out.u1.mean, out.u2.mean);
  out.l1_subsampled = std::any_of(out.per_channel.begin(), out.per_channel.end(),
                                  [](const BoundsSample& s) { return s.l1_subsampled; });
  return out;
}

/// Cholesky factors of the mixture components, for density evaluation.
class MixtureDensity {
 public:
  explicit MixtureDensity(const MixtureParams& mix) {
    const auto m = static_cast<double>(mix.dim());
    factors_.reserve(mix.size());
    log_norm_.reserve(mix.size());
    for (std::size_t i = 0; i < mix.size(); ++i) {
      Eigen::LLT<cmat> llt(mix.covariances[i]);
      if (llt.info() != Eigen::Success) throw numerical_error("mixture covariance not positive definite");
      double ln_det = 0.0;
      for (Eigen::Index d = 0; d < llt.matrixLLT().rows(); ++d) ln_det += 2.0 * std::log(std::real(llt.matrixLLT()(d, d)));
      log_norm_.push_back(std::log(mix.weights[i]) - ln_det - m * std::log(kPi));
      factors_.push_back(std::move(llt));
    }
    scratch_.resize(mix.size());
  }

  /// Natural log of p(y).
  double log_density(const cvec& y) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const cvec z = factors_[i].matrixL().solve(y);
      scratch_[i] = log_norm_[i] - z.squaredNorm();
    }
    return log_sum_exp(scratch_);
  }

 private:
  std::vector<Eigen::LLT<cmat>> factors_;
  std::vector<double> log_norm_;
  std::vector<double> scratch_;
};

struct MutualInformationEstimate {
  MeanEstimate estimate;           // bits per channel use
  std::vector<double> per_channel;  // index = channel index
  /// Standard error of each per-channel value from sampling alone.
  std::vector<double> per_channel_std_error;
};

/// Monte Carlo estimate of C_GSM = E_H[h(y) - h(w)] with Gaussian symbols:
/// per channel, h(y) is the sample mean of -log2 p(y) over draws of a uniform
/// pattern, s ~ CN(0, sigma2_x/R I) and w. The standard error is taken over
/// per-channel estimates, so it covers both channel and sampling variation.
inline MutualInformationEstimate mc_mutual_information(const GsmConfig& cfg, double snr_db, std::uint64_t num_channels,
                                                       std::uint64_t samples_per_channel, std::uint64_t seed,
                                                       const CapacityOptions& opts = {}) {
  if (num_channels < 1 || samples_per_channel < 1) throw usage_error("need at least one channel and one sample");
  const GsmConfig c = cfg.with_snr_db(snr_db);
  if (!(c.sigma2() > 0.0)) throw usage_error("mutual information needs sigma2 > 0");
  const std::uint64_t l = opts.full_pattern_set ? c.total_combinations() : c.num_patterns();
  if (l > opts.component_budget) {
    throw infeasible_error("mixture has " + std::to_string(l) + " components, above the budget " +
                           std::to_string(opts.component_budget));
  }
  const auto patterns = capacity_patterns(c, opts);
  const double noise_entropy = c.n_rx() * std::log2(kPi * kE * c.sigma2());
  const double symbol_var = c.sigma2_x() / c.n_rf();

  MutualInformationEstimate out;
  out.per_channel.resize(num_channels);
  out.per_channel_std_error.resize(num_channels);
  parallel_for(num_channels, opts.threads, [&](std::uint64_t k) {
    const cmat h = experiment_channel(seed, k, c.n_rx(), c.n_tx());
    MixtureDensity density(mixture_covariances(h, patterns, c.sigma2_x(), c.sigma2()));
    RngStream rng(seed, stream_id(StreamDomain::mixture_sample, k));
    std::vector<double> neg_log(samples_per_channel);
    cvec y(c.n_rx());
    for (std::uint64_t s = 0; s < samples_per_channel; ++s) {
      const auto& p = patterns[rng.uniform_index(patterns.size())];
      y.setZero();
      for (const auto i : p.indices()) y += h.col(i) * rng.complex_normal(symbol_var);
      for (Eigen::Index j = 0; j < y.size(); ++j) y(j) += rng.complex_normal(c.sigma2());
      neg_log[s] = -density.log_density(y) / kLn2;
    }
    const MeanEstimate e = mean_and_stderr(neg_log);
    out.per_channel[k] = e.mean - noise_entropy;
    out.per_channel_std_error[k] = e.std_error;
  });
  out.estimate = mean_and_stderr(out.per_channel);
  return out;
}

}  // namespace gsm

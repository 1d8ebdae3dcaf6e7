#pragma once

// Distribution of the number of other active antennas.
//
// Given activity probabilities q_l(1), phi_i is the pmf of sum_{l != i} a_l
// with a_l ~ Bernoulli(q_l(1)) independent, i.e. the convolution of all
// Bernoulli factors except the i-th. Three ways to get all N of them:
//   deconvolution  one full convolution, then divide each factor back out
//   fft            multiply transforms, divide out one factor, invert
//   gaussian       normal approximation evaluated at R-1 and R only

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsm/detect/fft.hpp"
#include "gsm/error.hpp"
#include "gsm/log.hpp"

namespace gsm {

enum class PhiMethod { deconvolution, fft, gaussian };

inline const char* to_string(PhiMethod m) {
  switch (m) {
    case PhiMethod::deconvolution: return "deconv";
    case PhiMethod::fft: return "fft";
    case PhiMethod::gaussian: return "gauss";
  }
  return "?";
}

inline PhiMethod phi_method_from_name(const std::string& name) {
  if (name == "deconv" || name == "deconvolution") return PhiMethod::deconvolution;
  if (name == "fft") return PhiMethod::fft;
  if (name == "gauss" || name == "gaussian") return PhiMethod::gaussian;
  throw usage_error("unknown phi method '" + name + "' (expected deconv, fft or gauss)");
}

/// Mass outside [-tol, 1 + tol] marks a deconvolution as failed.
inline constexpr double kDeconvolutionTolerance = 1e-6;
/// Transform bins with |Q_i| below this are not divided by.
inline constexpr double kFftDivisionGuard = 1e-12;

/// pmf of the sum of independent Bernoulli(q1[l]) over all l except `skip`
/// (pass q1.size() to skip nothing). Direct polynomial multiplication.
inline std::vector<double> bernoulli_sum_pmf(std::span<const double> q1, std::size_t skip) {
  std::vector<double> pmf{1.0};
  pmf.reserve(q1.size() + 1);
  for (std::size_t l = 0; l < q1.size(); ++l) {
    if (l == skip) continue;
    const double on = q1[l];
    const double off = 1.0 - on;
    pmf.push_back(0.0);
    for (std::size_t k = pmf.size() - 1; k > 0; --k) pmf[k] = pmf[k] * off + pmf[k - 1] * on;
    pmf[0] *= off;
  }
  return pmf;
}

/// Row i holds phi_i(0..N-1). Returns nullopt when any recovered mass falls
/// outside [-1e-6, 1 + 1e-6].
///
/// Each factor (q0 + q1 z) is divided out of phi_0 by forward substitution
/// when q0 >= q1 and by back substitution from the top coefficient
/// otherwise, so the recurrence ratio never exceeds one in magnitude.
inline std::optional<Eigen::MatrixXd> phi_deconvolution(std::span<const double> q1) {
  const std::size_t n = q1.size();
  if (n == 0) throw usage_error("phi needs at least one antenna");
  const std::vector<double> full = bernoulli_sum_pmf(q1, n);  // n + 1 points
  Eigen::MatrixXd phi(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double on = q1[i];
    const double off = 1.0 - on;
    if (off >= on) {
      double prev = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        prev = (full[k] - on * prev) / off;
        phi(i, k) = prev;
      }
    } else {
      double next = 0.0;
      for (std::size_t k = n; k > 0; --k) {
        next = (full[k] - off * next) / on;
        phi(i, k - 1) = next;
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double v = phi(i, k);
      if (!(v >= -kDeconvolutionTolerance && v <= 1.0 + kDeconvolutionTolerance)) return std::nullopt;
      if (v < 0.0) phi(i, k) = 0.0;
    }
  }
  return phi;
}

/// Row i holds phi_i(0..N-1), computed on a transform of size
/// P = bit_ceil(N + 1). Negative round-off is clamped and every row is
/// renormalized to unit mass. Rows whose factor has a transform bin below the
/// division guard are convolved directly instead.
inline Eigen::MatrixXd phi_fft(std::span<const double> q1) {
  const std::size_t n = q1.size();
  if (n == 0) throw usage_error("phi needs at least one antenna");
  const std::size_t size = std::bit_ceil(n + 1);
  using cd = std::complex<double>;

  std::vector<std::vector<cd>> factor(n);
  std::vector<cd> product(size, cd{1.0, 0.0});
  for (std::size_t l = 0; l < n; ++l) {
    factor[l].assign(size, cd{});
    factor[l][0] = 1.0 - q1[l];
    factor[l][1] = q1[l];
    fft::forward(factor[l]);
    for (std::size_t k = 0; k < size; ++k) product[k] *= factor[l][k];
  }

  Eigen::MatrixXd phi(n, n);
  std::vector<cd> work(size);
  for (std::size_t i = 0; i < n; ++i) {
    bool guarded = false;
    for (std::size_t k = 0; k < size; ++k) {
      if (std::abs(factor[i][k]) < kFftDivisionGuard) {
        guarded = true;
        break;
      }
      work[k] = product[k] / factor[i][k];
    }
    if (guarded) {
      const auto direct = bernoulli_sum_pmf(q1, i);
      for (std::size_t k = 0; k < n; ++k) phi(i, k) = direct[k];
      continue;
    }
    fft::inverse(work);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      phi(i, k) = std::max(0.0, work[k].real());
      total += phi(i, k);
    }
    if (total > 0.0) phi.row(i) /= total;
  }
  return phi;
}

/// Constraint messages u_i = (u_i(0), u_i(1)), normalized.
using ActivityMessage = std::array<double, 2>;

namespace detail {

inline ActivityMessage normalize_pair(double off, double on) {
  const double s = off + on;
  if (!(s > 0.0) || !std::isfinite(s)) return {0.5, 0.5};
  return {off / s, on / s};
}

}  // namespace detail

/// u_i(1) ∝ phi_i(R - 1), u_i(0) ∝ phi_i(R), read from full phi rows.
inline std::vector<ActivityMessage> activity_from_phi(const Eigen::MatrixXd& phi, unsigned n_rf) {
  const auto n = static_cast<std::size_t>(phi.rows());
  std::vector<ActivityMessage> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double on = phi(static_cast<Eigen::Index>(i), n_rf - 1);
    const double off = n_rf < n ? phi(static_cast<Eigen::Index>(i), n_rf) : 0.0;
    u[i] = detail::normalize_pair(off, on);
  }
  return u;
}

/// Normal approximation N(m_i, c_i) to the count of other active antennas,
/// m_i = sum_{l != i} q_l(1), c_i = sum_{l != i} q_l(0) q_l(1); evaluated at
/// R - 1 and R. O(N) overall.
inline std::vector<ActivityMessage> phi_gaussian(std::span<const double> q1, unsigned n_rf) {
  double mean_total = 0.0;
  double var_total = 0.0;
  for (const double on : q1) {
    mean_total += on;
    var_total += on * (1.0 - on);
  }
  std::vector<ActivityMessage> u(q1.size());
  for (std::size_t i = 0; i < q1.size(); ++i) {
    const double m = mean_total - q1[i];
    const double c = std::max(var_total - q1[i] * (1.0 - q1[i]), 1e-12);
    const double log_on = -0.5 * (n_rf - 1.0 - m) * (n_rf - 1.0 - m) / c;
    const double log_off = -0.5 * (n_rf - m) * (n_rf - m) / c;
    const double top = std::max(log_on, log_off);
    u[i] = detail::normalize_pair(std::exp(log_off - top), std::exp(log_on - top));
  }
  return u;
}

/// Constraint messages for every antenna by the chosen method. A failed
/// deconvolution falls back to the FFT route with a warning.
inline std::vector<ActivityMessage> constraint_messages(std::span<const double> q1, unsigned n_rf, PhiMethod method) {
  switch (method) {
    case PhiMethod::gaussian:
      return phi_gaussian(q1, n_rf);
    case PhiMethod::deconvolution:
      if (auto phi = phi_deconvolution(q1)) return activity_from_phi(*phi, n_rf);
      warn("phi deconvolution unstable; falling back to FFT for this update");
      [[fallthrough]];
    case PhiMethod::fft:
      return activity_from_phi(phi_fft(q1), n_rf);
  }
  throw usage_error("unknown phi method");
}

}  // namespace gsm

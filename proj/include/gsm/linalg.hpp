#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <span>

#include "gsm/error.hpp"

namespace gsm {

inline constexpr double kLn2 = 0.69314718055993530942;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kE = 2.71828182845904523536;

/// log2 det of a Hermitian positive-definite matrix via Cholesky. Throws
/// numerical_error when the factorization fails; no jitter is added.
template <typename Derived>
double log2det_hpd(const Eigen::MatrixBase<Derived>& a) {
  Eigen::LLT<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(a);
  if (llt.info() != Eigen::Success) throw numerical_error("Cholesky factorization failed: matrix not positive definite");
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = std::real(l(i, i));
    if (!(d > 0.0) || !std::isfinite(d)) throw numerical_error("Cholesky factor has a non-positive pivot");
    acc += std::log(d);
  }
  return 2.0 * acc / kLn2;
}

/// log(sum exp(v)) with the usual max shift; -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (const double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (const double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sample mean and standard error of the mean.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

inline MeanEstimate mean_and_stderr(std::span<const double> v) {
  MeanEstimate out;
  out.count = v.size();
  if (v.empty()) return out;
  CompensatedSum s;
  for (const double x : v) s.add(x);
  out.mean = s.value() / static_cast<double>(v.size());
  if (v.size() > 1) {
    CompensatedSum ss;
    for (const double x : v) ss.add((x - out.mean) * (x - out.mean));
    out.std_error = std::sqrt(ss.value() / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return out;
}

}  // namespace gsm

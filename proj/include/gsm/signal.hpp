#pragma once

// GSM system configuration, antenna activation patterns and the
// bits <-> transmit-vector codec.
//
// Bit layout of one channel use (eta bits, MSB first):
//   [ antenna bits (eta_a) | symbol bits of 1st active antenna | ... ]
// The antenna bits are the combinadic rank of the active set; symbol groups
// follow the active antennas in ascending index order.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gsm/combinadics.hpp"
#include "gsm/error.hpp"
#include "gsm/modulation.hpp"

namespace gsm {

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

/// Length-N transmit vector x = A s (scaled by sqrt(sigma2_x / R)).
using GsmVector = cvec;

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

class GsmConfig {
 public:
  GsmConfig() = default;

  /// n_tx = N transmit antennas, n_rx = M receive antennas, n_rf = R chains.
  GsmConfig(unsigned n_tx, unsigned n_rx, unsigned n_rf, Alphabet alphabet, double sigma2_x = 1.0,
            double sigma2 = 1.0)
      : n_tx_(n_tx), n_rx_(n_rx), n_rf_(n_rf), alphabet_(std::move(alphabet)), sigma2_x_(sigma2_x), sigma2_(sigma2) {
    if (n_rf_ < 1 || n_rf_ > n_tx_) throw usage_error("need 1 <= R <= N");
    if (n_rx_ < 1) throw usage_error("need M >= 1");
    if (!(sigma2_x_ >= 0.0) || !std::isfinite(sigma2_x_)) throw usage_error("transmit power must be >= 0");
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_)) throw usage_error("noise variance must be >= 0");
    std::uint64_t combos = 0;
    try {
      combos = binomial(n_tx_, n_rf_);
    } catch (const std::overflow_error&) {
      throw usage_error("C(N, R) exceeds 64 bits");
    }
    antenna_bits_ = floor_log2(combos);
    num_patterns_ = std::uint64_t{1} << antenna_bits_;
    total_combinations_ = combos;
  }

  [[nodiscard]] unsigned n_tx() const noexcept { return n_tx_; }
  [[nodiscard]] unsigned n_rx() const noexcept { return n_rx_; }
  [[nodiscard]] unsigned n_rf() const noexcept { return n_rf_; }
  [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
  [[nodiscard]] double sigma2_x() const noexcept { return sigma2_x_; }
  [[nodiscard]] double sigma2() const noexcept { return sigma2_; }

  /// eta_a = floor(log2 C(N, R)).
  [[nodiscard]] unsigned antenna_bits() const noexcept { return antenna_bits_; }
  [[nodiscard]] unsigned symbol_bits() const noexcept { return n_rf_ * alphabet_.bits_per_symbol(); }
  /// eta = R log2|A| + eta_a.
  [[nodiscard]] unsigned total_bits() const noexcept { return antenna_bits_ + symbol_bits(); }
  /// L = 2^eta_a, the size of the signalling pattern set.
  [[nodiscard]] std::uint64_t num_patterns() const noexcept { return num_patterns_; }
  [[nodiscard]] std::uint64_t total_combinations() const noexcept { return total_combinations_; }

  /// Per-active-antenna amplitude sqrt(sigma2_x / R).
  [[nodiscard]] double symbol_scale() const noexcept { return std::sqrt(sigma2_x_ / n_rf_); }

  /// SNR = sigma2_x / sigma2 (linear).
  [[nodiscard]] double snr() const noexcept { return sigma2_x_ / sigma2_; }

  [[nodiscard]] GsmConfig with_noise(double sigma2) const {
    GsmConfig c = *this;
    if (!(sigma2 >= 0.0)) throw usage_error("noise variance must be >= 0");
    c.sigma2_ = sigma2;
    return c;
  }

  /// Same system with sigma2 = sigma2_x / 10^(snr_db / 10).
  [[nodiscard]] GsmConfig with_snr_db(double snr_db) const {
    return with_noise(sigma2_x_ / std::pow(10.0, snr_db / 10.0));
  }

  [[nodiscard]] GsmConfig with_rx(unsigned n_rx) const {
    return GsmConfig(n_tx_, n_rx, n_rf_, alphabet_, sigma2_x_, sigma2_);
  }

 private:
  unsigned n_tx_ = 1;
  unsigned n_rx_ = 1;
  unsigned n_rf_ = 1;
  Alphabet alphabet_ = bpsk();
  double sigma2_x_ = 1.0;
  double sigma2_ = 1.0;
  unsigned antenna_bits_ = 0;
  std::uint64_t num_patterns_ = 1;
  std::uint64_t total_combinations_ = 1;
};

/// eta = R log2|A| + floor(log2 C(N, R)) bits per channel use.
inline unsigned spectral_efficiency(const GsmConfig& cfg) { return cfg.total_bits(); }

/// R active antennas (0-based, ascending) together with their combinadic rank.
class ActivationPattern {
 public:
  ActivationPattern() = default;

  static ActivationPattern from_rank(std::uint64_t r, unsigned n_rf) {
    ActivationPattern p;
    p.indices_ = unrank(r, n_rf);
    p.rank_ = r;
    return p;
  }

  /// Throws usage_error for a non-increasing tuple.
  static ActivationPattern from_indices(std::vector<unsigned> indices) {
    ActivationPattern p;
    p.indices_ = Combination(std::move(indices));
    p.rank_ = gsm::rank(p.indices_);
    return p;
  }

  [[nodiscard]] const Combination& indices() const noexcept { return indices_; }
  [[nodiscard]] std::uint64_t rank() const noexcept { return rank_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] unsigned operator[](std::size_t i) const { return indices_[i]; }

  /// Member of the allowed set (rank < L) for an N-antenna system.
  [[nodiscard]] bool allowed_in(const GsmConfig& cfg) const {
    return indices_.size() == cfg.n_rf() && indices_.back() < cfg.n_tx() && rank_ < cfg.num_patterns();
  }

  friend bool operator==(const ActivationPattern& a, const ActivationPattern& b) {
    return a.rank_ == b.rank_ && a.indices_ == b.indices_;
  }

 private:
  Combination indices_;
  std::uint64_t rank_ = 0;
};

/// N x R matrix with A(I_r, r) = 1 and zeros elsewhere.
inline Eigen::MatrixXd activation_matrix(const ActivationPattern& p, unsigned n_tx) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_tx, static_cast<Eigen::Index>(p.size()));
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (p[r] >= n_tx) throw usage_error("pattern index outside the antenna array");
    a(p[r], static_cast<Eigen::Index>(r)) = 1.0;
  }
  return a;
}

/// The L allowed patterns in rank order: unrank(0), ..., unrank(L - 1).
inline std::vector<ActivationPattern> pattern_set(const GsmConfig& cfg,
                                                  std::uint64_t cap = kDefaultEnumerationCap) {
  if (cfg.num_patterns() > cap) throw infeasible_error("pattern set too large to enumerate");
  std::vector<ActivationPattern> out;
  out.reserve(cfg.num_patterns());
  for (std::uint64_t r = 0; r < cfg.num_patterns(); ++r) out.push_back(ActivationPattern::from_rank(r, cfg.n_rf()));
  return out;
}

/// Every one of the C(N, R) patterns in rank order.
inline std::vector<ActivationPattern> full_pattern_set(const GsmConfig& cfg,
                                                       std::uint64_t cap = kDefaultEnumerationCap) {
  if (cfg.total_combinations() > cap) throw infeasible_error("pattern set too large to enumerate");
  std::vector<ActivationPattern> out;
  out.reserve(cfg.total_combinations());
  for (std::uint64_t r = 0; r < cfg.total_combinations(); ++r) {
    out.push_back(ActivationPattern::from_rank(r, cfg.n_rf()));
  }
  return out;
}

/// Hard GSM symbol: the active pattern and one alphabet label per active
/// antenna (ascending antenna order).
struct GsmSymbol {
  ActivationPattern pattern;
  std::vector<std::uint32_t> labels;
};

inline GsmSymbol bits_to_symbol(std::span<const std::uint8_t> bits, const GsmConfig& cfg) {
  if (bits.size() != cfg.total_bits()) {
    throw usage_error("expected " + std::to_string(cfg.total_bits()) + " bits, got " + std::to_string(bits.size()));
  }
  const unsigned ea = cfg.antenna_bits();
  const unsigned bps = cfg.alphabet().bits_per_symbol();
  GsmSymbol sym;
  sym.pattern = ActivationPattern::from_rank(bits_to_int(bits.first(ea)), cfg.n_rf());
  sym.labels.resize(cfg.n_rf());
  for (unsigned r = 0; r < cfg.n_rf(); ++r) {
    sym.labels[r] = static_cast<std::uint32_t>(bits_to_int(bits.subspan(ea + r * bps, bps)));
  }
  return sym;
}

inline BitBlock symbol_to_bits(const GsmSymbol& sym, const GsmConfig& cfg) {
  if (!sym.pattern.allowed_in(cfg)) {
    throw pattern_out_of_range("pattern rank " + std::to_string(sym.pattern.rank()) + " is outside the allowed set");
  }
  BitBlock bits = int_to_bits(sym.pattern.rank(), cfg.antenna_bits());
  const unsigned bps = cfg.alphabet().bits_per_symbol();
  for (const auto label : sym.labels) {
    const BitBlock group = int_to_bits(label, bps);
    bits.insert(bits.end(), group.begin(), group.end());
  }
  return bits;
}

inline GsmVector symbol_to_vector(const GsmSymbol& sym, const GsmConfig& cfg) {
  GsmVector x = GsmVector::Zero(cfg.n_tx());
  const double scale = cfg.symbol_scale();
  for (std::size_t r = 0; r < sym.labels.size(); ++r) {
    x(sym.pattern[r]) = scale * cfg.alphabet().point(sym.labels[r]);
  }
  return x;
}

/// Bits of length eta to the transmit vector x = A s.
inline GsmVector encode(std::span<const std::uint8_t> bits, const GsmConfig& cfg) {
  return symbol_to_vector(bits_to_symbol(bits, cfg), cfg);
}

/// Recovers the hard symbol from a transmit vector. The support must be an
/// allowed pattern (pattern_out_of_range otherwise) and every nonzero entry a
/// scaled constellation point (malformed_symbol otherwise).
inline GsmSymbol vector_to_symbol(const GsmVector& x, const GsmConfig& cfg, double tol = 1e-9) {
  if (x.size() != cfg.n_tx()) throw usage_error("transmit vector has the wrong length");
  std::vector<unsigned> support;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > tol) support.push_back(static_cast<unsigned>(i));
  }
  if (support.size() != cfg.n_rf()) {
    throw malformed_symbol("transmit vector has " + std::to_string(support.size()) + " nonzero entries, expected " +
                           std::to_string(cfg.n_rf()));
  }
  GsmSymbol sym;
  sym.pattern = ActivationPattern::from_indices(support);
  if (!sym.pattern.allowed_in(cfg)) {
    throw pattern_out_of_range("support rank " + std::to_string(sym.pattern.rank()) + " is not a signalling pattern");
  }
  const double scale = cfg.symbol_scale();
  for (const auto i : support) {
    const cplx z = x(i) / scale;
    const auto label = cfg.alphabet().nearest(z);
    if (std::abs(z - cfg.alphabet().point(label)) > 1e-6) {
      throw malformed_symbol("entry " + std::to_string(i) + " is not a constellation point");
    }
    sym.labels.push_back(label);
  }
  return sym;
}

/// Inverse of encode.
inline BitBlock decode(const GsmVector& x, const GsmConfig& cfg) {
  return symbol_to_bits(vector_to_symbol(x, cfg), cfg);
}

/// |G| = L |A|^R, saturating at UINT64_MAX.
inline std::uint64_t signal_set_size(const GsmConfig& cfg) {
  std::uint64_t n = cfg.num_patterns();
  for (unsigned r = 0; r < cfg.n_rf(); ++r) {
    if (__builtin_mul_overflow(n, static_cast<std::uint64_t>(cfg.alphabet().size()), &n)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return n;
}

/// All L |A|^R transmit vectors; element k is encode(int_to_bits(k, eta)).
inline std::vector<GsmVector> enumerate_signal_set(const GsmConfig& cfg, std::uint64_t cap = kDefaultEnumerationCap) {
  const std::uint64_t count = signal_set_size(cfg);
  if (count > cap) {
    throw infeasible_error("exhaustive enumeration infeasible: |G| = " +
                           (count == std::numeric_limits<std::uint64_t>::max() ? std::string(">2^64")
                                                                                : std::to_string(count)) +
                           " exceeds cap " + std::to_string(cap));
  }
  std::vector<GsmVector> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) out.push_back(encode(int_to_bits(k, cfg.total_bits()), cfg));
  return out;
}

/// Comma-separated 1-based antenna labels, e.g. "1,2,5,7".
inline std::string antenna_list(const ActivationPattern& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[i] + 1);
  }
  return s;
}

}  // namespace gsm

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gsm/error.hpp"

namespace gsm {

using cplx = std::complex<double>;

/// Unit average energy constellation. Point k carries the label k, i.e.
/// points()[label] is the symbol transmitted for that bit group.
class Alphabet {
 public:
  Alphabet() = default;

  Alphabet(std::string name, std::vector<cplx> points) : name_(std::move(name)), points_(std::move(points)) {
    if (points_.empty() || (points_.size() & (points_.size() - 1)) != 0) {
      throw usage_error("alphabet size must be a power of two");
    }
    bits_ = 0;
    while ((std::size_t{1} << bits_) < points_.size()) ++bits_;
  }

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] unsigned bits_per_symbol() const noexcept { return bits_; }
  [[nodiscard]] const std::vector<cplx>& points() const noexcept { return points_; }
  [[nodiscard]] cplx point(std::uint32_t label) const { return points_.at(label); }

  [[nodiscard]] double average_energy() const {
    double e = 0.0;
    for (const auto& p : points_) e += std::norm(p);
    return e / static_cast<double>(points_.size());
  }

  /// Label of the point closest to z (first one on ties).
  [[nodiscard]] std::uint32_t nearest(cplx z) const {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t k = 0; k < points_.size(); ++k) {
      const double d = std::norm(z - points_[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  }

 private:
  std::string name_;
  std::vector<cplx> points_;
  unsigned bits_ = 0;
};

/// BPSK: label 0 -> +1, label 1 -> -1.
inline Alphabet bpsk() { return Alphabet("bpsk", {cplx{1.0, 0.0}, cplx{-1.0, 0.0}}); }

namespace detail {

inline std::uint32_t gray_to_binary(std::uint32_t g) {
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) g ^= g >> shift;
  return g;
}

/// Gray-labelled PAM amplitude for a label of `bits` bits: level index
/// 0..2^bits-1 mapped to 2i - (2^bits - 1).
inline double gray_pam(std::uint32_t label, unsigned bits) {
  const auto levels = static_cast<double>(1U << bits);
  return 2.0 * gray_to_binary(label) - (levels - 1.0);
}

}  // namespace detail

/// Gray-labelled QAM with 2^bits points. Even `bits` gives the square grid;
/// odd `bits` gives a rectangular 2^ceil(bits/2) x 2^floor(bits/2) grid. The
/// high label bits select the in-phase level. Normalized to unit energy.
inline Alphabet qam(unsigned bits) {
  if (bits < 2 || bits > 16) throw usage_error("QAM needs 2..16 bits per symbol");
  const unsigned ibits = (bits + 1) / 2;
  const unsigned qbits = bits / 2;
  std::vector<cplx> pts(std::size_t{1} << bits);
  for (std::uint32_t label = 0; label < pts.size(); ++label) {
    const std::uint32_t il = label >> qbits;
    const std::uint32_t ql = label & ((1U << qbits) - 1U);
    pts[label] = cplx{detail::gray_pam(il, ibits), detail::gray_pam(ql, qbits)};
  }
  double e = 0.0;
  for (const auto& p : pts) e += std::norm(p);
  const double scale = 1.0 / std::sqrt(e / static_cast<double>(pts.size()));
  for (auto& p : pts) p *= scale;
  std::string name = std::to_string(pts.size()) + "qam";
  return Alphabet(std::move(name), std::move(pts));
}

/// Parses "bpsk", "qpsk", or "<n>qam" (n a power of two, 4..65536).
inline Alphabet alphabet_from_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "bpsk" || name == "2qam") return bpsk();
  if (name == "qpsk") return qam(2);
  const auto pos = name.find("qam");
  if (pos != std::string::npos && pos > 0 && pos + 3 == name.size()) {
    const std::string digits = name.substr(0, pos);
    if (name.front() == '-') throw usage_error("unknown modulation '" + name + "'");
    if (digits.find_first_not_of("0123456789") == std::string::npos) {
      const unsigned long m = std::stoul(digits);
      if (m >= 4 && m <= 65536 && (m & (m - 1)) == 0) {
        unsigned bits = 0;
        while ((1UL << bits) < m) ++bits;
        return qam(bits);
      }
    }
  }
  throw usage_error("unknown modulation '" + name + "' (expected bpsk, qpsk or <M>qam)");
}

}  // namespace gsm

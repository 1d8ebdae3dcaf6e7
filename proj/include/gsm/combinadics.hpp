#pragma once

// Combinatorial number system: exact ranking and unranking of R-subsets of
// {0, ..., N-1}, plus MSB-first bit-string <-> integer conversion.

#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gsm/error.hpp"

namespace gsm {

using BitBlock = std::vector<std::uint8_t>;

/// Exact C(n, k). Returns 0 for k > n. Throws std::overflow_error when the
/// result does not fit in 64 bits.
constexpr std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i; reduce before multiplying so the
    // only overflow reported is a genuine one.
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(result / g, factor, &result)) {
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " +
                                std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return result;
}

/// C(n, k), saturating at UINT64_MAX instead of throwing.
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  try {
    return binomial(n, k);
  } catch (const std::overflow_error&) {
    return std::numeric_limits<std::uint64_t>::max();
  }
}

/// Strictly increasing tuple (N_1 < ... < N_R) of non-negative indices.
class Combination {
 public:
  Combination() = default;

  explicit Combination(std::vector<unsigned> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw usage_error("combination must have at least one element");
    for (std::size_t i = 1; i < elements_.size(); ++i) {
      if (elements_[i] <= elements_[i - 1]) {
        throw usage_error("combination elements must be strictly increasing");
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] unsigned operator[](std::size_t i) const { return elements_[i]; }
  [[nodiscard]] const std::vector<unsigned>& elements() const noexcept { return elements_; }
  [[nodiscard]] unsigned back() const { return elements_.back(); }

  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  friend bool operator==(const Combination&, const Combination&) = default;

 private:
  std::vector<unsigned> elements_;
};

/// Sum of C(N_i, i) over the tuple; the combinadic value of the combination.
inline std::uint64_t rank(const Combination& c) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (__builtin_add_overflow(total, binomial(c[i], i + 1), &total)) {
      throw std::overflow_error("combination rank exceeds 64 bits");
    }
  }
  return total;
}

/// The unique R-combination whose rank is n.
///
/// Greedy from the top element down: N_i is the largest integer with
/// C(N_i, i) <= the remaining value. The top element is located by an
/// exponential then binary search; each lower element by a binary search
/// below the element above it.
inline Combination unrank(std::uint64_t n, unsigned r) {
  if (r == 0) throw usage_error("unrank requires R >= 1");
  std::vector<unsigned> out(r);

  // Largest c with C(c, r) <= n. C(r-1, r) = 0 <= n always holds.
  std::uint64_t lo = r - 1;
  std::uint64_t hi = r;
  while (binomial_saturating(hi, r) <= n) {
    lo = hi;
    hi = hi > std::numeric_limits<std::uint64_t>::max() / 2
             ? std::numeric_limits<std::uint64_t>::max()
             : hi * 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (binomial_saturating(mid, r) <= n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out[r - 1] = static_cast<unsigned>(lo);
  std::uint64_t remaining = n - binomial(lo, r);

  for (unsigned i = r - 1; i >= 1; --i) {
    // N_i lies in [i - 1, N_{i+1} - 1]; C(c, i) is monotone in c.
    std::uint64_t below = i - 1;
    std::uint64_t above = out[i];
    while (above - below > 1) {
      const std::uint64_t mid = below + (above - below) / 2;
      if (binomial(mid, i) <= remaining) {
        below = mid;
      } else {
        above = mid;
      }
    }
    out[i - 1] = static_cast<unsigned>(below);
    remaining -= binomial(below, i);
  }
  return Combination(std::move(out));
}

/// MSB-first bits to integer. Throws when more than 64 bits are given.
inline std::uint64_t bits_to_int(std::span<const std::uint8_t> bits) {
  if (bits.size() > 64) throw usage_error("bit block wider than 64 bits");
  std::uint64_t value = 0;
  for (const auto b : bits) {
    if (b > 1) throw usage_error("bit values must be 0 or 1");
    value = (value << 1) | b;
  }
  return value;
}

/// Integer to an MSB-first bit block of the given width.
inline BitBlock int_to_bits(std::uint64_t value, unsigned width) {
  if (width > 64) throw usage_error("bit width above 64");
  if (width < 64 && (value >> width) != 0) {
    throw usage_error("value " + std::to_string(value) + " does not fit in " +
                      std::to_string(width) + " bits");
  }
  BitBlock bits(width);
  for (unsigned i = 0; i < width; ++i) {
    bits[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
  }
  return bits;
}

/// floor(log2(v)) for v >= 1.
constexpr unsigned floor_log2(std::uint64_t v) {
  return static_cast<unsigned>(std::bit_width(v)) - 1;
}

}  // namespace gsm

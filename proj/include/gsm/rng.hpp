#pragma once

// Per-task random streams keyed by (master seed, stream id). A task always
// sees the same draws no matter which worker runs it or in what order.

#include <complex>
#include <cstdint>
#include <random>

namespace gsm {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream-id namespaces so that different experiment kinds sharing a master
/// seed never reuse each other's streams.
enum class StreamDomain : std::uint64_t {
  frame = 1,
  channel = 2,
  mixture_sample = 3,
  pair_subsample = 4,
  test = 15,
};

constexpr std::uint64_t stream_id(StreamDomain domain, std::uint64_t index) noexcept {
  return (static_cast<std::uint64_t>(domain) << 56) ^ index;
}

class RngStream {
 public:
  using engine_type = std::mt19937_64;

  RngStream(std::uint64_t master_seed, std::uint64_t stream)
      : master_seed_(master_seed),
        stream_(stream),
        engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream ^ 0x5851f42d4c957f2dULL))) {}

  [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

  engine_type& engine() noexcept { return engine_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

  double standard_normal() { return normal_(engine_); }

  /// CN(0, variance): independent real and imaginary parts of variance / 2.
  std::complex<double> complex_normal(double variance = 1.0) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_;
  engine_type engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace gsm

#pragma once

#include <limits>
#include <vector>

#include "gsm/detect/result.hpp"
#include "gsm/signal.hpp"

namespace gsm {

/// Exhaustive minimum-distance detection over the full signal set, which is
/// MAP for equiprobable symbols in Gaussian noise.
///
/// Candidates are visited in signal-set order (pattern rank, then symbol
/// labels with the lowest active antenna most significant) and only a
/// strictly smaller metric replaces the incumbent, so ties resolve to the
/// first candidate in that order. The metric is ||y - Hx||^2 - ||y||^2,
/// expanded through the Gram matrix H^H H so each candidate costs O(R^2).
class MlDetector {
 public:
  explicit MlDetector(const GsmConfig& cfg, std::uint64_t cap = kDefaultEnumerationCap)
      : cfg_(cfg), patterns_(pattern_set(cfg, cap)) {
    if (signal_set_size(cfg) > cap) {
      throw infeasible_error("ML detection needs |G| <= " + std::to_string(cap) + " candidates");
    }
    const double scale = cfg.symbol_scale();
    for (const auto& a : cfg.alphabet().points()) points_.push_back(scale * a);
  }

  [[nodiscard]] DetectionResult operator()(const cvec& y, const cmat& h) const {
    const unsigned r = cfg_.n_rf();
    const std::size_t q = points_.size();
    const cmat gram = h.adjoint() * h;
    const cvec corr = h.adjoint() * y;

    std::vector<std::uint32_t> labels(r), best_labels(r);
    std::size_t best_pattern = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<cplx> s(r);
    for (std::size_t pi = 0; pi < patterns_.size(); ++pi) {
      const auto& idx = patterns_[pi].indices();
      std::fill(labels.begin(), labels.end(), 0U);
      for (;;) {
        for (unsigned a = 0; a < r; ++a) s[a] = points_[labels[a]];
        double metric = 0.0;
        for (unsigned a = 0; a < r; ++a) {
          const auto ia = idx[a];
          metric += std::norm(s[a]) * std::real(gram(ia, ia)) - 2.0 * std::real(std::conj(s[a]) * corr(ia));
          for (unsigned b = a + 1; b < r; ++b) metric += 2.0 * std::real(std::conj(s[a]) * gram(ia, idx[b]) * s[b]);
        }
        if (metric < best) {
          best = metric;
          best_pattern = pi;
          best_labels = labels;
        }
        // Odometer with the last antenna's label changing fastest.
        unsigned pos = r;
        while (pos > 0) {
          --pos;
          if (++labels[pos] < q) break;
          labels[pos] = 0;
          if (pos == 0) {
            pos = r + 1;
            break;
          }
        }
        if (pos == r + 1) break;
      }
    }
    return make_result(GsmSymbol{patterns_[best_pattern], best_labels}, cfg_);
  }

 private:
  GsmConfig cfg_;
  std::vector<ActivationPattern> patterns_;
  std::vector<cplx> points_;
};

inline DetectionResult ml_detect(const cvec& y, const cmat& h, const GsmConfig& cfg,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
  return MlDetector(cfg, cap)(y, h);
}

}  // namespace gsm

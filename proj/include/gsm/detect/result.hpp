#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "gsm/signal.hpp"

namespace gsm {

struct DetectionResult {
  GsmSymbol symbol;
  BitBlock bits;
  /// The top-scoring support was outside the allowed set and was replaced.
  bool repaired = false;

  [[nodiscard]] const ActivationPattern& pattern() const noexcept { return symbol.pattern; }
};

inline DetectionResult make_result(GsmSymbol symbol, const GsmConfig& cfg, bool repaired = false) {
  DetectionResult r;
  r.bits = symbol_to_bits(symbol, cfg);
  r.symbol = std::move(symbol);
  r.repaired = repaired;
  return r;
}

struct SupportDecision {
  ActivationPattern pattern;
  bool repaired = false;
};

/// Picks the R highest-scoring antennas (ties broken by lower index). If that
/// support is not an allowed pattern, tries replacing one selected antenna by
/// one unselected antenna: drops are taken from the lowest-scoring selected
/// upward, additions from the highest-scoring unselected downward, at most N
/// trials in total. If none is allowed, pattern rank 0 is returned.
inline SupportDecision choose_support(std::span<const double> scores, const GsmConfig& cfg) {
  const unsigned n = cfg.n_tx();
  const unsigned r = cfg.n_rf();
  if (scores.size() != n) throw usage_error("one activity score per transmit antenna expected");
  std::vector<unsigned> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) { return scores[a] > scores[b]; });

  auto make = [](std::vector<unsigned> idx) {
    std::sort(idx.begin(), idx.end());
    return ActivationPattern::from_indices(std::move(idx));
  };

  std::vector<unsigned> selected(order.begin(), order.begin() + r);
  ActivationPattern best = make(selected);
  if (best.rank() < cfg.num_patterns()) return {best, false};

  unsigned trials = 0;
  for (unsigned drop = r; drop-- > 0 && trials < n;) {
    for (unsigned add = r; add < n && trials < n; ++add, ++trials) {
      std::vector<unsigned> candidate = selected;
      candidate[drop] = order[add];
      ActivationPattern p = make(std::move(candidate));
      if (p.rank() < cfg.num_patterns()) return {p, true};
    }
  }
  return {ActivationPattern::from_rank(0, r), true};
}

}  // namespace gsm

#pragma once

#include <vector>

#include "gsm/detect/result.hpp"
#include "gsm/signal.hpp"

namespace gsm {

/// Linear MMSE estimate z = (H^H H + (1/SNR) I)^{-1} H^H y with
/// SNR = sigma2_x / sigma2. With sigma2 = 0 this is the least-squares
/// solution (requires H^H H invertible, i.e. M >= N).
inline cvec mmse_filter(const cvec& y, const cmat& h, const GsmConfig& cfg) {
  cmat a = h.adjoint() * h;
  const double reg = cfg.sigma2_x() > 0.0 ? cfg.sigma2() / cfg.sigma2_x() : 0.0;
  a.diagonal().array() += reg;
  Eigen::LDLT<cmat> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw numerical_error("MMSE system is singular");
  return ldlt.solve(h.adjoint() * y);
}

/// MMSE filter followed by a hard GSM decision: the R largest |z_i| form the
/// support (repaired into the allowed set if needed), and each retained
/// z_i / sqrt(sigma2_x / R) is sliced to the nearest constellation point.
inline DetectionResult mmse_detect(const cvec& y, const cmat& h, const GsmConfig& cfg) {
  const cvec z = mmse_filter(y, h, cfg);
  std::vector<double> scores(cfg.n_tx());
  for (unsigned i = 0; i < cfg.n_tx(); ++i) scores[i] = std::abs(z(i));
  SupportDecision support = choose_support(scores, cfg);
  GsmSymbol sym;
  sym.pattern = support.pattern;
  const double scale = cfg.symbol_scale();
  for (const auto i : sym.pattern.indices()) {
    sym.labels.push_back(cfg.alphabet().nearest(scale > 0.0 ? z(i) / scale : z(i)));
  }
  return make_result(std::move(sym), cfg, support.repaired);
}

}  // namespace gsm

#pragma once

#include "gsm/rng.hpp"
#include "gsm/signal.hpp"

namespace gsm {

/// M x N matrix of i.i.d. CN(0, 1) gains.
inline cmat sample_channel(unsigned n_rx, unsigned n_tx, RngStream& rng) {
  cmat h(n_rx, n_tx);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) h(r, c) = rng.complex_normal(1.0);
  }
  return h;
}

/// M i.i.d. CN(0, 1) draws; transmit() scales them by sigma.
inline cvec sample_unit_noise(unsigned n_rx, RngStream& rng) {
  cvec w(n_rx);
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = rng.complex_normal(1.0);
  return w;
}

/// y = H x + w with w ~ CN(0, sigma2 I). The noise draws are consumed even
/// when sigma2 = 0 so that a stream yields the same channel across SNRs.
inline cvec transmit(const cmat& h, const GsmVector& x, double sigma2, RngStream& rng) {
  if (h.cols() != x.size()) throw usage_error("channel and transmit vector dimensions disagree");
  const cvec w = sample_unit_noise(static_cast<unsigned>(h.rows()), rng);
  return h * x + std::sqrt(sigma2) * w;
}

}  // namespace gsm

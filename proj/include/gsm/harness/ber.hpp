#pragma once

// Monte Carlo BER sweeps and the required-SNR search.
//
// Frame f always draws its bits, channel and unit noise from the stream
// (seed, frame f), at every SNR point; only the noise scale changes. Frames
// are simulated in fixed batches and the stop rule is applied by scanning
// per-frame error counts in frame order, so a row depends only on the seed
// and the configuration, never on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsm/channel.hpp"
#include "gsm/detect/lamp.hpp"
#include "gsm/detect/ml.hpp"
#include "gsm/detect/mmse.hpp"
#include "gsm/parallel.hpp"
#include "gsm/rng.hpp"
#include "gsm/signal.hpp"

namespace gsm {

enum class DetectorKind { ml, mmse, lamp };

inline const char* to_string(DetectorKind d) {
  switch (d) {
    case DetectorKind::ml: return "ml";
    case DetectorKind::mmse: return "mmse";
    case DetectorKind::lamp: return "lamp";
  }
  return "?";
}

inline DetectorKind detector_from_name(const std::string& name) {
  if (name == "ml") return DetectorKind::ml;
  if (name == "mmse") return DetectorKind::mmse;
  if (name == "lamp") return DetectorKind::lamp;
  throw usage_error("unknown detector '" + name + "' (expected ml, mmse or lamp)");
}

struct StopRule {
  std::uint64_t min_bit_errors = 200;
  std::uint64_t max_frames = 10'000'000;

  void validate() const {
    if (min_bit_errors < 1 || max_frames < 1) throw usage_error("stop rule values must be positive");
  }
};

struct ExperimentConfig {
  GsmConfig system;
  std::vector<double> snr_grid_db;
  DetectorKind detector = DetectorKind::lamp;
  LampConfig lamp{};
  StopRule stop{};
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Signal-set size limit for ML.
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  /// Frames simulated per parallel batch before the stop rule is checked.
  std::uint64_t batch_frames = 256;

  void validate() const {
    if (snr_grid_db.empty()) throw usage_error("SNR grid is empty");
    if (!std::is_sorted(snr_grid_db.begin(), snr_grid_db.end())) throw usage_error("SNR grid must be sorted ascending");
    for (const double s : snr_grid_db) {
      if (!std::isfinite(s)) throw usage_error("SNR values must be finite");
    }
    stop.validate();
    if (batch_frames < 1) throw usage_error("batch size must be positive");
    if (detector == DetectorKind::lamp) lamp.validate();
  }
};

struct BerRow {
  double snr_db = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t frame_errors = 0;
  double ber = 0.0;
};

/// Throws infeasible_error when the detector cannot run at this size.
inline void check_feasible(const ExperimentConfig& cfg) {
  if (cfg.detector == DetectorKind::ml && signal_set_size(cfg.system) > cfg.enumeration_cap) {
    throw infeasible_error("ML detection infeasible: exhaustive enumeration infeasible, signal set has " +
                           std::to_string(signal_set_size(cfg.system)) + " vectors (cap " +
                           std::to_string(cfg.enumeration_cap) + ")");
  }
}

/// Detector bound to one noise level.
using BoundDetector = std::function<DetectionResult(const cvec&, const cmat&)>;

inline BoundDetector make_detector(const ExperimentConfig& cfg, const GsmConfig& sys) {
  switch (cfg.detector) {
    case DetectorKind::ml: {
      auto det = std::make_shared<const MlDetector>(sys, cfg.enumeration_cap);
      return [det](const cvec& y, const cmat& h) { return (*det)(y, h); };
    }
    case DetectorKind::mmse:
      return [sys](const cvec& y, const cmat& h) { return mmse_detect(y, h, sys); };
    case DetectorKind::lamp:
      return [sys, lamp = cfg.lamp](const cvec& y, const cmat& h) { return lamp_detect(y, h, sys, lamp); };
  }
  throw usage_error("unknown detector");
}

/// Bit errors of frame `index` at the noise level of `sys`.
inline std::uint64_t simulate_frame(const GsmConfig& sys, const BoundDetector& detect, std::uint64_t seed,
                                    std::uint64_t index) {
  RngStream rng(seed, stream_id(StreamDomain::frame, index));
  BitBlock bits(sys.total_bits());
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  const GsmVector x = encode(bits, sys);
  const cmat h = sample_channel(sys.n_rx(), sys.n_tx(), rng);
  const cvec y = transmit(h, x, sys.sigma2(), rng);
  const DetectionResult r = detect(y, h);
  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) errors += bits[k] != r.bits[k];
  return errors;
}

/// One SNR point. `frame_cap` (if set) tightens the stop rule's max_frames.
inline BerRow ber_point(const ExperimentConfig& cfg, double snr_db, std::optional<std::uint64_t> frame_cap = {}) {
  const GsmConfig sys = cfg.system.with_snr_db(snr_db);
  const BoundDetector detect = make_detector(cfg, sys);
  const std::uint64_t max_frames = std::min(cfg.stop.max_frames, frame_cap.value_or(cfg.stop.max_frames));

  BerRow row;
  row.snr_db = snr_db;
  std::vector<std::uint64_t> errors;
  bool done = false;
  while (!done) {
    const std::uint64_t first = row.frames;
    const std::uint64_t count = std::min(cfg.batch_frames, max_frames - first);
    errors.assign(count, 0);
    parallel_for(count, cfg.threads, [&](std::uint64_t k) { errors[k] = simulate_frame(sys, detect, cfg.seed, first + k); });
    for (std::uint64_t k = 0; k < count; ++k) {
      row.frames += 1;
      row.bit_errors += errors[k];
      row.frame_errors += errors[k] > 0;
      if (row.bit_errors >= cfg.stop.min_bit_errors || row.frames >= max_frames) {
        done = true;
        break;
      }
    }
  }
  row.ber = static_cast<double>(row.bit_errors) / (static_cast<double>(row.frames) * sys.total_bits());
  return row;
}

inline std::vector<BerRow> run_ber(const ExperimentConfig& cfg) {
  cfg.validate();
  check_feasible(cfg);
  std::vector<BerRow> rows;
  rows.reserve(cfg.snr_grid_db.size());
  for (const double snr : cfg.snr_grid_db) rows.push_back(ber_point(cfg, snr));
  return rows;
}

struct RequiredSnrOptions {
  double target_ber = 1e-3;
  double snr_min_db = 0.0;
  double snr_max_db = 30.0;
  /// Bisection stops once the bracket is this narrow.
  double resolution_db = 0.25;
  /// Probe frame cap as a multiple of min_bit_errors / (target * eta); 0 = none.
  double frame_cap_factor = 4.0;
};

struct RequiredSnrRow {
  unsigned n_rx = 0;
  /// NaN when the target is not reached at snr_max_db.
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  bool reached = false;
  /// Final bracket and the BER measured at its ends.
  double lo_db = 0.0, hi_db = 0.0;
  double ber_lo = 0.0, ber_hi = 0.0;
  std::uint64_t probes = 0;
};

/// Bisection on SNR for one receive-antenna count. The reported SNR is the
/// log-BER interpolation inside the final bracket (or the bracket's upper
/// end if no errors were seen there).
inline RequiredSnrRow required_snr(const ExperimentConfig& base, unsigned n_rx, const RequiredSnrOptions& opt) {
  if (!(opt.target_ber > 0.0 && opt.target_ber <= 1.0)) throw usage_error("target BER must lie in (0, 1]");
  if (!(opt.snr_max_db >= opt.snr_min_db)) throw usage_error("SNR search range is empty");
  if (!(opt.resolution_db > 0.0)) throw usage_error("SNR resolution must be positive");
  ExperimentConfig cfg = base;
  cfg.system = base.system.with_rx(n_rx);
  cfg.snr_grid_db = {opt.snr_min_db};
  cfg.validate();
  check_feasible(cfg);

  std::optional<std::uint64_t> cap;
  if (opt.frame_cap_factor > 0.0) {
    const double frames = opt.frame_cap_factor * static_cast<double>(cfg.stop.min_bit_errors) /
                          (opt.target_ber * cfg.system.total_bits());
    cap = static_cast<std::uint64_t>(std::ceil(std::min(frames, 1e18)));
  }

  RequiredSnrRow row;
  row.n_rx = n_rx;
  auto probe = [&](double snr) {
    ++row.probes;
    return ber_point(cfg, snr, cap).ber;
  };

  double lo = opt.snr_min_db;
  double hi = opt.snr_max_db;
  double ber_lo = probe(lo);
  if (ber_lo <= opt.target_ber) {
    row.snr_db = lo;
    row.reached = true;
    row.lo_db = row.hi_db = lo;
    row.ber_lo = row.ber_hi = ber_lo;
    return row;
  }
  double ber_hi = probe(hi);
  row.lo_db = lo;
  row.hi_db = hi;
  row.ber_lo = ber_lo;
  row.ber_hi = ber_hi;
  if (ber_hi > opt.target_ber) return row;

  while (hi - lo > opt.resolution_db) {
    const double mid = 0.5 * (lo + hi);
    const double b = probe(mid);
    if (b <= opt.target_ber) {
      hi = mid;
      ber_hi = b;
    } else {
      lo = mid;
      ber_lo = b;
    }
  }
  row.reached = true;
  row.lo_db = lo;
  row.hi_db = hi;
  row.ber_lo = ber_lo;
  row.ber_hi = ber_hi;
  if (ber_hi > 0.0 && ber_lo > ber_hi) {
    const double t = (std::log(ber_lo) - std::log(opt.target_ber)) / (std::log(ber_lo) - std::log(ber_hi));
    row.snr_db = lo + std::clamp(t, 0.0, 1.0) * (hi - lo);
  } else {
    row.snr_db = hi;
  }
  return row;
}

inline std::vector<RequiredSnrRow> find_required_snr(const ExperimentConfig& cfg, const std::vector<unsigned>& m_grid,
                                                     const RequiredSnrOptions& opt = {}) {
  if (m_grid.empty()) throw usage_error("receive antenna grid is empty");
  for (const unsigned m : m_grid) {
    ExperimentConfig c = cfg;
    c.system = cfg.system.with_rx(m);
    check_feasible(c);
  }
  std::vector<RequiredSnrRow> rows;
  for (const unsigned m : m_grid) rows.push_back(required_snr(cfg, m, opt));
  return rows;
}

}  // namespace gsm

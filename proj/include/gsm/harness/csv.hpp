#pragma once

// CSV tables: '#'-prefixed "key = value" comment lines, one header row, then
// data rows. Reals are printed with %.10g so output is byte-stable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gsm/harness/ber.hpp"
#include "gsm/harness/capacity_run.hpp"

namespace gsm {

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

using CsvComments = std::vector<std::pair<std::string, std::string>>;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& key, const std::string& value) { out_ << "# " << key << " = " << value << '\n'; }
  void comments(const CsvComments& c) {
    for (const auto& [k, v] : c) comment(k, v);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

/// Comment lines describing the system and the SNR convention.
inline CsvComments system_comments(const GsmConfig& cfg) {
  return {
      {"N", std::to_string(cfg.n_tx())},
      {"M", std::to_string(cfg.n_rx())},
      {"R", std::to_string(cfg.n_rf())},
      {"alphabet", cfg.alphabet().name()},
      {"eta_bits", std::to_string(cfg.total_bits())},
      {"antenna_bits", std::to_string(cfg.antenna_bits())},
      {"patterns", std::to_string(cfg.num_patterns())},
      {"sigma2_x", format_real(cfg.sigma2_x())},
      {"snr_definition", "snr_db = 10 log10(sigma2_x / sigma2), sigma2 = noise variance per receive antenna"},
  };
}

inline CsvComments experiment_comments(const ExperimentConfig& cfg) {
  CsvComments c = system_comments(cfg.system);
  c.emplace_back("detector", to_string(cfg.detector));
  if (cfg.detector == DetectorKind::lamp) {
    c.emplace_back("lamp_iterations", std::to_string(cfg.lamp.iterations));
    c.emplace_back("lamp_damping", format_real(cfg.lamp.damping));
    c.emplace_back("lamp_phi", to_string(cfg.lamp.phi));
  }
  c.emplace_back("min_bit_errors", std::to_string(cfg.stop.min_bit_errors));
  c.emplace_back("max_frames", std::to_string(cfg.stop.max_frames));
  c.emplace_back("seed", std::to_string(cfg.seed));
  return c;
}

inline void write_ber_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<BerRow>& rows) {
  CsvWriter w(out);
  w.comments(experiment_comments(cfg));
  w.row({"snr_db", "frames", "bit_errors", "frame_errors", "ber"});
  for (const auto& r : rows) {
    w.row({format_real(r.snr_db), std::to_string(r.frames), std::to_string(r.bit_errors), std::to_string(r.frame_errors),
           format_real(r.ber)});
  }
}

inline void write_capacity_csv(std::ostream& out, const CapacityExperiment& exp, const std::vector<CapacityRow>& rows) {
  CsvWriter w(out);
  w.comments(system_comments(exp.system));
  w.comment("channels", std::to_string(exp.channels));
  w.comment("pattern_set", exp.options.full_pattern_set ? "full" : "signalling");
  w.comment("pair_budget", std::to_string(exp.options.pairs.pair_budget));
  bool subsampled = false;
  for (const auto& r : rows) subsampled = subsampled || r.bounds.l1_subsampled;
  w.comment("l1_pair_subsampling", subsampled ? "uniform random pairs beyond the budget; L1 is then the log of an "
                                                "unbiased pair-sum estimate and is biased slightly upward"
                                              : "none (exact pair sums)");
  if (exp.mc_samples > 0) w.comment("mc_samples_per_channel", std::to_string(exp.mc_samples));
  w.comment("units", "bits per channel use; *_se = standard error over channels");
  w.comment("seed", std::to_string(exp.seed));
  std::vector<std::string> header{"snr_db", "L1", "L2", "U1", "U2", "L", "U", "L1_se", "L2_se", "U1_se", "U2_se"};
  const bool mc = !rows.empty() && rows.front().has_mc;
  if (mc) {
    header.emplace_back("C_mc");
    header.emplace_back("C_mc_se");
  }
  w.row(header);
  for (const auto& r : rows) {
    const auto& b = r.bounds;
    std::vector<std::string> cells{format_real(r.snr_db), format_real(b.l1.mean), format_real(b.l2.mean),
                                   format_real(b.u1.mean), format_real(b.u2.mean), format_real(b.lower),
                                   format_real(b.upper),   format_real(b.l1.std_error), format_real(b.l2.std_error),
                                   format_real(b.u1.std_error), format_real(b.u2.std_error)};
    if (mc) {
      cells.push_back(format_real(r.mc.mean));
      cells.push_back(format_real(r.mc.std_error));
    }
    w.row(cells);
  }
}

inline void write_required_snr_csv(std::ostream& out, const ExperimentConfig& cfg, const RequiredSnrOptions& opt,
                                   const std::vector<RequiredSnrRow>& rows) {
  CsvWriter w(out);
  CsvComments c = experiment_comments(cfg);
  c.erase(std::remove_if(c.begin(), c.end(), [](const auto& kv) { return kv.first == "M"; }), c.end());
  w.comments(c);
  w.comment("target_ber", format_real(opt.target_ber));
  w.comment("snr_range_db", format_real(opt.snr_min_db) + ":" + format_real(opt.snr_max_db));
  w.comment("resolution_db", format_real(opt.resolution_db));
  w.comment("snr_db", "log-BER interpolation inside the final bisection bracket; nan = target not reached");
  w.row({"M", "snr_db", "reached", "bracket_lo_db", "bracket_hi_db", "ber_lo", "ber_hi", "probes"});
  for (const auto& r : rows) {
    w.row({std::to_string(r.n_rx), format_real(r.snr_db), r.reached ? "1" : "0", format_real(r.lo_db),
           format_real(r.hi_db), format_real(r.ber_lo), format_real(r.ber_hi), std::to_string(r.probes)});
  }
}

}  // namespace gsm

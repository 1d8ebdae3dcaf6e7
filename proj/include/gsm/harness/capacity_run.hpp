#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "gsm/capacity.hpp"

namespace gsm {

struct CapacityExperiment {
  GsmConfig system;
  std::vector<double> snr_grid_db;
  std::uint64_t channels = 1000;
  /// Samples per channel for the Monte Carlo mutual information; 0 skips it.
  std::uint64_t mc_samples = 0;
  CapacityOptions options{};
  std::uint64_t seed = 1;
};

struct CapacityRow {
  double snr_db = 0.0;
  CapacityBounds bounds;
  bool has_mc = false;
  MeanEstimate mc{};
};

/// One row per SNR; every row uses the same channel realizations.
inline std::vector<CapacityRow> run_capacity(const CapacityExperiment& exp) {
  if (exp.snr_grid_db.empty()) throw usage_error("SNR grid is empty");
  if (exp.channels < 1) throw usage_error("need at least one channel realization");
  if (exp.mc_samples > 0) {
    const std::uint64_t l = exp.options.full_pattern_set ? exp.system.total_combinations() : exp.system.num_patterns();
    if (l > exp.options.component_budget) {
      throw infeasible_error("mutual information needs " + std::to_string(l) + " mixture components, above the budget " +
                             std::to_string(exp.options.component_budget));
    }
  }
  std::vector<CapacityRow> rows;
  for (const double snr : exp.snr_grid_db) {
    CapacityRow row;
    row.snr_db = snr;
    row.bounds = capacity_bounds(exp.system, snr, exp.channels, exp.seed, exp.options);
    row.bounds.per_channel.clear();
    if (exp.mc_samples > 0) {
      row.has_mc = true;
      row.mc = mc_mutual_information(exp.system, snr, exp.channels, exp.mc_samples, exp.seed, exp.options).estimate;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gsm

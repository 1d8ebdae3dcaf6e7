// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gsm/capacity.hpp"
#include "gsm/channel.hpp"
#include "gsm/combinadics.hpp"
#include "gsm/detect/lamp.hpp"
#include "gsm/detect/ml.hpp"
#include "gsm/detect/mmse.hpp"
#include "gsm/harness/ber.hpp"
#include "gsm/harness/capacity_run.hpp"
#include "gsm/harness/csv.hpp"
#include "gsm/parallel.hpp"

using namespace gsm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

struct Frame {
  BitBlock bits;
  GsmVector x;
  cmat h;
  cvec y;
};

Frame draw_frame(const GsmConfig& cfg, RngStream& rng) {
  Frame f;
  f.bits.resize(cfg.total_bits());
  for (auto& b : f.bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  f.x = encode(f.bits, cfg);
  f.h = sample_channel(cfg.n_rx(), cfg.n_tx(), rng);
  f.y = transmit(f.h, f.x, cfg.sigma2(), rng);
  return f;
}

RngStream test_rng(std::uint64_t seed) { return RngStream(seed, stream_id(StreamDomain::test, 0)); }

// All R-subsets of {0..n-1} in colex order, by brute force over bit masks.
std::vector<std::vector<unsigned>> colex_subsets(unsigned n, unsigned r) {
  std::vector<std::vector<unsigned>> out;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != r) continue;
    std::vector<unsigned> s;
    for (unsigned i = 0; i < n; ++i) {
      if (mask >> i & 1U) s.push_back(i);
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

ExperimentConfig experiment(const GsmConfig& sys, DetectorKind det, std::uint64_t min_errors, std::uint64_t seed) {
  ExperimentConfig e;
  e.system = sys;
  e.detector = det;
  e.stop.min_bit_errors = min_errors;
  e.seed = seed;
  e.snr_grid_db = {0.0};
  return e;
}

// 1: combinadics
Outcome combinadics_exact() {
  Outcome o;
  const std::vector<std::vector<unsigned>> table = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  const GsmConfig t(4, 4, 3, bpsk());
  bool rows = true;
  for (std::uint64_t g = 0; g < 4; ++g) {
    const BitBlock bits{static_cast<std::uint8_t>(g >> 1), static_cast<std::uint8_t>(g & 1), 0, 0, 0};
    rows = rows && unrank(g, 3) == Combination(table[g]) && bits_to_symbol(bits, t).pattern.rank() == g &&
           rank(Combination(table[g])) == g;
  }
  o.require(rows, "table rows");

  const GsmConfig c(10, 10, 4, bpsk());
  const BitBlock b{0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0};
  o.require(antenna_list(bits_to_symbol(b, c).pattern) == "1,2,5,7", "map [0010011] -> 1,2,5,7");
  const ActivationPattern p = ActivationPattern::from_indices({2, 3, 4, 5});
  const GsmSymbol s{p, std::vector<std::uint32_t>(4, 0)};
  const BitBlock back = symbol_to_bits(s, c);
  o.require(BitBlock(back.begin(), back.begin() + 7) == BitBlock({0, 0, 0, 1, 1, 1, 0}), "demap 3,4,5,6 -> [0001110]");

  bool bijection = true;
  for (unsigned n = 1; n <= 12 && bijection; ++n) {
    for (unsigned r = 1; r <= n; ++r) {
      const auto subsets = colex_subsets(n, r);
      if (subsets.size() != binomial(n, r)) bijection = false;
      for (std::uint64_t v = 0; v < subsets.size() && bijection; ++v) {
        const Combination u = unrank(v, r);
        bijection = u.elements() == subsets[v] && rank(u) == v;
      }
    }
  }
  o.require(bijection, "bijection N<=12");
  return o;
}

// 2: spectral efficiency
Outcome spectral_efficiency_values() {
  Outcome o;
  const unsigned a = spectral_efficiency(GsmConfig(32, 32, 16, qam(2)));
  const unsigned b = spectral_efficiency(GsmConfig(64, 64, 16, qam(2)));
  const unsigned c = spectral_efficiency(GsmConfig(64, 64, 32, qam(2)));
  o.require(a == 61 && b == 80 && c == 124,
            "eta = " + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c));
  return o;
}

// 3: bound gaps for N=8, M=1
Outcome bound_gaps() {
  Outcome o;
  const std::uint64_t channels = 10000;
  for (const double snr : {2.0, 32.0}) {
    std::string gaps;
    for (unsigned r = 1; r <= 8; ++r) {
      const CapacityBounds b = capacity_bounds(GsmConfig(8, 1, r, bpsk()), snr, channels, 3);
      const double gap = b.upper - b.lower;
      gaps += (r > 1 ? "," : "") + fmt(gap, 3);
      if (r == 1) {
        const double want = snr < 10 ? 0.188 : 0.782;
        const double tol = snr < 10 ? 0.02 : 0.08;
        o.require(std::abs(gap - want) <= tol, fmt(snr, 3) + " dB R=1 gap " + fmt(gap) + " vs " + fmt(want) + "+-" +
                                                   fmt(tol));
      }
      const unsigned r_min = snr < 10 ? 6 : 7;
      if (r >= r_min) o.require(gap < 1e-2, fmt(snr, 3) + " dB R=" + std::to_string(r) + " gap " + fmt(gap) + " < 0.01");
    }
    o.detail += "; gaps@" + fmt(snr, 3) + "dB R=1..8: " + gaps;
  }
  return o;
}

// 4: identities
Outcome bound_identities() {
  Outcome o;
  RngStream rng = test_rng(4);
  double worst_u1 = 0.0, worst_u2 = 0.0, worst_collapse = 0.0;
  for (int t = 0; t < 200; ++t) {
    const unsigned n = 2 + static_cast<unsigned>(rng.uniform_index(7));
    const unsigned m = 1 + static_cast<unsigned>(rng.uniform_index(4));
    const unsigned r = 1 + static_cast<unsigned>(rng.uniform_index(n));
    const double snr_db = -5.0 + 40.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng.engine());
    const GsmConfig cfg = GsmConfig(n, m, r, bpsk()).with_snr_db(snr_db);
    const cmat h = sample_channel(m, n, rng);

    const auto sig = pattern_set(cfg);
    const MixtureParams mix = mixture_covariances(h, sig, cfg.sigma2_x(), cfg.sigma2());
    worst_u1 = std::max(worst_u1, std::abs(bound_u1(mix) - bound_l2(mix) - std::log2(static_cast<double>(sig.size()))));

    // Full-set U2 against log2 det(I + snr/N H H^H) from eigenvalues.
    const auto full = full_pattern_set(cfg);
    const double u2 = bound_u2(h, full, cfg.sigma2_x(), cfg.sigma2()) - m * std::log2(kPi * kE * cfg.sigma2());
    const double snr = cfg.sigma2_x() / cfg.sigma2();
    const cmat g = (snr / n) * (h * h.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> eig(g);
    double smp = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) smp += std::log2(1.0 + eig.eigenvalues()(k));
    worst_u2 = std::max(worst_u2, std::abs(u2 - smp) / std::max(1.0, std::abs(smp)));

    const GsmConfig all(n, m, n, bpsk(), cfg.sigma2_x(), cfg.sigma2());
    const BoundsSample s =
        bounds_for_channel(h, pattern_set(all), all.sigma2_x(), all.sigma2(), PairSumOptions{}, nullptr);
    worst_collapse = std::max({worst_collapse, std::abs(s.l2 - s.u1), std::abs(s.l2 - s.u2)});
  }
  o.require(worst_u1 < 1e-12, "max |u1-l2-log2 L| = " + fmt(worst_u1, 3));
  o.require(worst_u2 < 1e-10, "max rel |U2 - SMP| = " + fmt(worst_u2, 3));
  o.require(worst_collapse < 1e-10, "R=N max |L2-U1|,|L2-U2| = " + fmt(worst_collapse, 3));
  return o;
}

// 5: Monte Carlo mutual information inside the refined bounds
Outcome mutual_information_bracket() {
  Outcome o;
  const std::uint64_t channels = 300;
  const std::uint64_t samples = 200;
  int cases = 0, failures = 0;
  double worst = -1e9;
  std::string worst_case;
  for (unsigned n = 4; n <= 8; ++n) {
    for (unsigned m = 1; m <= 2; ++m) {
      for (unsigned r = 1; r <= n; ++r) {
        for (const double snr : {2.0, 12.0, 32.0}) {
          const GsmConfig cfg(n, m, r, bpsk());
          const CapacityBounds b = capacity_bounds(cfg, snr, channels, 5);
          const MeanEstimate mi = mc_mutual_information(cfg, snr, channels, samples, 5).estimate;
          const MeanEstimate& lo = b.l1.mean >= b.l2.mean ? b.l1 : b.l2;
          const MeanEstimate& hi = b.u1.mean <= b.u2.mean ? b.u1 : b.u2;
          const double se_lo = std::hypot(mi.std_error, lo.std_error);
          const double se_hi = std::hypot(mi.std_error, hi.std_error);
          // Excess outside the bracket in units of combined standard errors.
          const double z = std::max((b.lower - mi.mean) / std::max(se_lo, 1e-300),
                                    (mi.mean - b.upper) / std::max(se_hi, 1e-300));
          ++cases;
          if (z > 3.0) ++failures;
          if (z > worst) {
            worst = z;
            worst_case = "(" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(r) + ")@" +
                         fmt(snr, 3) + "dB";
          }
        }
      }
    }
  }
  o.require(failures == 0, std::to_string(cases - failures) + "/" + std::to_string(cases) + " cases inside");
  o.detail += "; worst excess " + fmt(worst, 3) + " se at " + worst_case;
  return o;
}

// 6: which bound is tighter at low and high SNR
Outcome bound_crossover() {
  Outcome o;
  CapacityOptions opts;
  opts.pairs.pair_budget = std::uint64_t{1} << 13;
  opts.pairs.allow_subsampling = true;
  const GsmConfig cfg(16, 16, 12, bpsk());
  const CapacityBounds lo = capacity_bounds(cfg, 0.0, 1000, 6, opts);
  const CapacityBounds hi = capacity_bounds(cfg, 30.0, 1000, 6, opts);
  o.require(lo.l2.mean > lo.l1.mean, "0 dB L2 " + fmt(lo.l2.mean, 5) + " > L1 " + fmt(lo.l1.mean, 5));
  o.require(lo.u2.mean < lo.u1.mean, "0 dB U2 " + fmt(lo.u2.mean, 5) + " < U1 " + fmt(lo.u1.mean, 5));
  o.require(hi.l1.mean > hi.l2.mean, "30 dB L1 " + fmt(hi.l1.mean, 5) + " > L2 " + fmt(hi.l2.mean, 5));
  o.require(hi.u1.mean < hi.u2.mean, "30 dB U1 " + fmt(hi.u1.mean, 5) + " < U2 " + fmt(hi.u2.mean, 5));
  return o;
}

// 7: detection oracles
Outcome detection_oracles() {
  Outcome o;
  {
    const GsmConfig base(4, 4, 2, bpsk());
    const auto subsets = colex_subsets(4, 2);
    const double scale = std::sqrt(base.sigma2_x() / base.n_rf());
    RngStream rng = test_rng(7);
    int match = 0;
    for (int t = 0; t < 1000; ++t) {
      const double snr = -5.0 + 25.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng.engine());
      const GsmConfig cfg = base.with_snr_db(snr);
      const Frame f = draw_frame(cfg, rng);
      double best = std::numeric_limits<double>::infinity();
      cvec best_x;
      for (std::uint64_t p = 0; p < cfg.num_patterns(); ++p) {
        for (unsigned c = 0; c < 4; ++c) {
          cvec x = cvec::Zero(4);
          x(subsets[p][0]) = scale * (c >> 1 ? -1.0 : 1.0);
          x(subsets[p][1]) = scale * (c & 1 ? -1.0 : 1.0);
          const double d = (f.y - f.h * x).squaredNorm();
          if (d < best) {
            best = d;
            best_x = x;
          }
        }
      }
      const DetectionResult r = ml_detect(f.y, f.h, cfg);
      match += (symbol_to_vector(r.symbol, cfg) - best_x).norm() < 1e-12;
    }
    o.require(match == 1000, "ML vs brute force " + std::to_string(match) + "/1000");
  }
  auto noiseless = [&](const GsmConfig& cfg, const std::function<BitBlock(const Frame&)>& det, const std::string& name) {
    RngStream rng = test_rng(70 + cfg.n_tx());
    int ok = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
      const Frame f = draw_frame(cfg, rng);
      ok += det(f) == f.bits;
    }
    o.require(ok == trials, name + " noiseless " + std::to_string(ok) + "/" + std::to_string(trials));
  };
  const GsmConfig ml_cfg(6, 4, 3, qam(2), 1.0, 0.0);
  const MlDetector ml(ml_cfg);
  noiseless(ml_cfg, [&](const Frame& f) { return ml(f.y, f.h).bits; }, "ML(6,4,3)");
  const GsmConfig mmse_cfg(8, 8, 4, qam(4), 1.0, 0.0);
  noiseless(mmse_cfg, [&](const Frame& f) { return mmse_detect(f.y, f.h, mmse_cfg).bits; }, "MMSE(8,8,4)");
  const GsmConfig lamp_cfg(8, 12, 4, bpsk(), 1.0, 0.0);
  noiseless(lamp_cfg, [&](const Frame& f) { return lamp_detect(f.y, f.h, lamp_cfg).bits; }, "LaMP(8,12,4)");
  return o;
}

// 8: LaMP to ML gap at BER 1e-3
Outcome lamp_ml_gap() {
  Outcome o;
  RequiredSnrOptions opt;
  opt.frame_cap_factor = 2.0;
  auto gap = [&](const GsmConfig& sys, double lo, double hi, const std::string& name) {
    opt.snr_min_db = lo;
    opt.snr_max_db = hi;
    ExperimentConfig ml = experiment(sys, DetectorKind::ml, 400, 8);
    ExperimentConfig lamp = experiment(sys, DetectorKind::lamp, 400, 8);
    lamp.lamp.iterations = 40;
    const RequiredSnrRow a = required_snr(ml, sys.n_rx(), opt);
    const RequiredSnrRow b = required_snr(lamp, sys.n_rx(), opt);
    o.detail += (o.detail.empty() ? "" : "; ") + name + " ML " + fmt(a.snr_db) + " dB, LaMP " + fmt(b.snr_db) + " dB";
    return b.snr_db - a.snr_db;
  };
  const double g8 = gap(GsmConfig(8, 8, 4, bpsk()), 6.0, 18.0, "(8,8,4)");
  const double g16 = gap(GsmConfig(16, 16, 4, bpsk()), 2.0, 14.0, "(16,16,4)");
  o.require(g8 <= 3.5, "gap8 " + fmt(g8, 3) + " <= 3.5 dB");
  o.require(g16 < g8, "gap16 " + fmt(g16, 3) + " < gap8");
  return o;
}

// 9: LaMP against MMSE at (32,32,16)
Outcome lamp_vs_mmse() {
  Outcome o;
  const GsmConfig sys(32, 32, 16, qam(2));
  RequiredSnrOptions opt;
  opt.frame_cap_factor = 2.0;
  opt.snr_min_db = 0.0;
  opt.snr_max_db = 24.0;
  const ExperimentConfig lamp = experiment(sys, DetectorKind::lamp, 400, 9);
  const RequiredSnrRow r = required_snr(lamp, sys.n_rx(), opt);
  o.require(r.reached, "LaMP reaches 1e-3 at " + fmt(r.snr_db) + " dB");
  if (!r.reached) return o;
  const std::uint64_t cap = 40000;
  const BerRow l = ber_point(lamp, r.snr_db, cap);
  const BerRow m = ber_point(experiment(sys, DetectorKind::mmse, 400, 9), r.snr_db, cap);
  o.require(m.ber >= 10.0 * l.ber, "MMSE BER " + fmt(m.ber) + " >= 10 x LaMP BER " + fmt(l.ber));
  return o;
}

// 10: phi methods
Outcome phi_equivalence() {
  Outcome o;
  RngStream rng = test_rng(10);
  double worst = 0.0;
  bool all_stable = true;
  for (int t = 0; t < 1000; ++t) {
    const unsigned n = 1 + static_cast<unsigned>(rng.uniform_index(64));
    std::vector<double> q(n);
    for (auto& v : q) {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng.engine());
      v = (t % 3 == 0) ? u * u * u : u;
    }
    const auto d = phi_deconvolution(q);
    if (!d) {
      all_stable = false;
      continue;
    }
    worst = std::max(worst, (*d - phi_fft(q)).cwiseAbs().maxCoeff());
  }
  o.require(all_stable && worst < 1e-9, "deconvolution vs FFT max diff " + fmt(worst, 3));

  const GsmConfig cfg = GsmConfig(16, 16, 8, qam(2)).with_snr_db(10.0);
  LampConfig exact;
  LampConfig gauss;
  gauss.phi = PhiMethod::gaussian;
  int same = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const Frame f = draw_frame(cfg, rng);
    const auto a = harden(lamp_run(f.y, f.h, cfg, exact), cfg);
    const auto b = harden(lamp_run(f.y, f.h, cfg, gauss), cfg);
    same += a.pattern().rank() == b.pattern().rank();
  }
  o.require(same >= 900, "Gaussian pattern agreement " + std::to_string(same) + "/" + std::to_string(trials));
  return o;
}

// 11: required SNR decreasing in M
Outcome required_snr_trend() {
  Outcome o;
  RequiredSnrOptions opt;
  opt.frame_cap_factor = 2.0;
  opt.snr_min_db = 0.0;
  opt.snr_max_db = 30.0;
  auto check = [&](const GsmConfig& sys, const std::vector<unsigned>& ms) {
    const ExperimentConfig e = experiment(sys, DetectorKind::lamp, 200, 11);
    const auto rows = find_required_snr(e, ms, opt);
    std::string list;
    bool decreasing = true;
    bool finite_below_n = false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      list += (k ? "," : "") + std::string("M=") + std::to_string(rows[k].n_rx) + ":" + fmt(rows[k].snr_db);
      if (k > 0) decreasing = decreasing && rows[k].reached && (!rows[k - 1].reached || rows[k].snr_db < rows[k - 1].snr_db);
      finite_below_n = finite_below_n || (rows[k].reached && rows[k].n_rx < sys.n_tx());
    }
    const std::string name = "N=" + std::to_string(sys.n_tx()) + " [" + list + "]";
    o.require(decreasing, name + " strictly decreasing");
    o.require(finite_below_n, "N=" + std::to_string(sys.n_tx()) + " finite for some M<N");
  };
  check(GsmConfig(16, 16, 8, qam(2)), {15, 16, 20});
  check(GsmConfig(32, 32, 16, qam(2)), {30, 32, 40});
  return o;
}

// 12: 8 bpcu comparison under ML
Outcome eight_bpcu_ordering() {
  Outcome o;
  RequiredSnrOptions opt;
  opt.frame_cap_factor = 2.0;
  opt.snr_min_db = 0.0;
  opt.snr_max_db = 30.0;
  const GsmConfig gsm(8, 8, 2, qam(2));
  const ExperimentConfig e = experiment(gsm, DetectorKind::ml, 400, 12);
  const RequiredSnrRow r = required_snr(e, 8, opt);
  o.require(r.reached, "GSM(8,8,2) 4-QAM reaches 1e-3 at " + fmt(r.snr_db) + " dB");
  if (!r.reached) return o;
  const std::uint64_t cap = 100000;
  const double g = ber_point(e, r.snr_db, cap).ber;
  const double sm = ber_point(experiment(GsmConfig(8, 8, 1, qam(5)), DetectorKind::ml, 400, 12), r.snr_db, cap).ber;
  const double smp = ber_point(experiment(GsmConfig(8, 8, 8, bpsk()), DetectorKind::ml, 400, 12), r.snr_db, cap).ber;
  o.require(g < sm, "GSM " + fmt(g) + " < (8,8,1) 32-QAM " + fmt(sm));
  o.require(g < smp, "GSM " + fmt(g) + " < (8,8,8) BPSK " + fmt(smp));
  return o;
}

// 13: byte-identical CSV across thread counts
Outcome thread_reproducibility() {
  Outcome o;
  auto ber_csv = [](unsigned threads) {
    ExperimentConfig e = experiment(GsmConfig(8, 8, 4, qam(2)), DetectorKind::lamp, 100, 13);
    e.snr_grid_db = {4.0, 8.0, 12.0};
    e.threads = threads;
    e.batch_frames = 64;
    std::ostringstream s;
    write_ber_csv(s, e, run_ber(e));
    return s.str();
  };
  auto cap_csv = [](unsigned threads) {
    CapacityExperiment e;
    e.system = GsmConfig(10, 4, 5, bpsk());
    e.snr_grid_db = {0.0, 20.0};
    e.channels = 200;
    e.mc_samples = 50;
    e.options.pairs.pair_budget = 1000;
    e.options.pairs.allow_subsampling = true;
    e.options.threads = threads;
    e.seed = 13;
    std::ostringstream s;
    write_capacity_csv(s, e, run_capacity(e));
    return s.str();
  };
  auto req_csv = [](unsigned threads) {
    ExperimentConfig e = experiment(GsmConfig(6, 6, 3, bpsk()), DetectorKind::ml, 100, 13);
    e.threads = threads;
    RequiredSnrOptions opt;
    opt.target_ber = 1e-2;
    opt.snr_max_db = 20.0;
    std::ostringstream s;
    write_required_snr_csv(s, e, opt, find_required_snr(e, {4, 6}, opt));
    return s.str();
  };
  for (const auto& [name, fn] : std::vector<std::pair<std::string, std::function<std::string(unsigned)>>>{
           {"ber", ber_csv}, {"capacity", cap_csv}, {"required-snr", req_csv}}) {
    const std::string one = fn(1);
    const bool same = one == fn(2) && one == fn(3) && one == fn(0);
    o.require(same, name + " identical at 1/2/3/default threads");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"combinadics exactness", combinadics_exact},
      {"spectral efficiency", spectral_efficiency_values},
      {"capacity-bound gaps N=8 M=1", bound_gaps},
      {"bound identities", bound_identities},
      {"mutual information bracketed by bounds", mutual_information_bracket},
      {"bound regime crossover", bound_crossover},
      {"detection oracles", detection_oracles},
      {"LaMP vs ML gap", lamp_ml_gap},
      {"LaMP vs MMSE at (32,32,16)", lamp_vs_mmse},
      {"phi method equivalence", phi_equivalence},
      {"required SNR decreasing in M", required_snr_trend},
      {"8 bpcu ordering", eight_bpcu_ordering},
      {"thread reproducibility", thread_reproducibility},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(static_cast<std::size_t>(std::atoi(argv[i])));
  std::printf("threads: %u\n", resolve_threads(0));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected.empty() && !selected.count(k + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}

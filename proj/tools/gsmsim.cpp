// gsmsim: command-line front end for the GSM toolkit.
//
//   gsmsim encode --n 10 --r 4 --bits 0010011
//   gsmsim decode --n 10 --r 4 --antennas 3,4,5,6
//   gsmsim ber --n 8 --m 8 --r 4 --alphabet bpsk --detector lamp --snr 0:2:16
//   gsmsim capacity --n 8 --m 1 --r 1 --snr 2,32 --channels 10000
//   gsmsim required-snr --n 16 --r 8 --alphabet 4qam --m-list 12,16,20
//
// Exit status: 0 ok, 1 usage, 2 infeasible configuration, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "gsm/harness/csv.hpp"
#include "gsm/harness/grid.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kNumerical = 3 };

struct Common {
  std::string out = "-";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string config;
};

struct SystemArgs {
  unsigned n = 0;
  unsigned m = 0;
  unsigned r = 0;
  std::string alphabet = "bpsk";
  double sigma2_x = 1.0;
};

struct DetectorArgs {
  std::string detector = "lamp";
  std::string phi = "deconv";
  unsigned iterations = 15;
  double damping = 0.5;
  std::uint64_t min_errors = 200;
  std::uint64_t max_frames = 10'000'000;
  std::uint64_t cap = gsm::kDefaultEnumerationCap;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out,-o", c.out, "output file ('-' for stdout)")->capture_default_str();
  app->add_option("--seed", c.seed, "master random seed")->capture_default_str();
  app->add_option("--threads", c.threads,
                  std::string("worker threads (0 = $") + gsm::kThreadsEnv + ", else all cores)")
      ->capture_default_str();
  app->add_option("--config", c.config, "flat 'key = value' file of long option names; flags on the command line win");
}

void add_system(CLI::App* app, SystemArgs& s, bool with_m, bool with_alphabet) {
  app->add_option("--n", s.n, "transmit antennas N")->required();
  if (with_m) app->add_option("--m", s.m, "receive antennas M")->required();
  app->add_option("--r", s.r, "RF chains R (active antennas)")->required();
  if (with_alphabet) app->add_option("--alphabet", s.alphabet, "bpsk, qpsk or <M>qam")->capture_default_str();
  app->add_option("--sigma2-x", s.sigma2_x, "total transmit power")->capture_default_str();
}

void add_detector(CLI::App* app, DetectorArgs& d) {
  app->add_option("--detector", d.detector, "ml, mmse or lamp")->capture_default_str();
  app->add_option("--phi", d.phi, "LaMP phi method: deconv, fft or gauss")->capture_default_str();
  app->add_option("--iterations", d.iterations, "LaMP iterations")->capture_default_str();
  app->add_option("--damping", d.damping, "LaMP damping in (0, 1]")->capture_default_str();
  app->add_option("--min-errors", d.min_errors, "stop once this many bit errors are seen")->capture_default_str();
  app->add_option("--max-frames", d.max_frames, "frame limit per SNR point")->capture_default_str();
  app->add_option("--ml-cap", d.cap, "largest signal set ML may enumerate")->capture_default_str();
}

gsm::GsmConfig make_system(const SystemArgs& s, unsigned m) {
  return gsm::GsmConfig(s.n, m, s.r, gsm::alphabet_from_name(s.alphabet), s.sigma2_x);
}

gsm::ExperimentConfig make_experiment(const SystemArgs& s, unsigned m, const DetectorArgs& d, const Common& c) {
  gsm::ExperimentConfig e;
  e.system = make_system(s, m);
  e.detector = gsm::detector_from_name(d.detector);
  e.lamp.iterations = d.iterations;
  e.lamp.damping = d.damping;
  e.lamp.phi = gsm::phi_method_from_name(d.phi);
  e.stop.min_bit_errors = d.min_errors;
  e.stop.max_frames = d.max_frames;
  e.enumeration_cap = d.cap;
  e.seed = c.seed;
  e.threads = c.threads;
  return e;
}

/// Runs `body` with the chosen output stream.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw gsm::usage_error("cannot open output file '" + path + "'");
  body(f);
  if (!f.flush()) throw gsm::usage_error("failed writing '" + path + "'");
}

gsm::BitBlock parse_bits(const std::string& text) {
  gsm::BitBlock bits;
  for (const char ch : text) {
    if (ch == '0' || ch == '1') {
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (ch != ' ' && ch != '_') {
      throw gsm::usage_error("bit string may only contain 0 and 1");
    }
  }
  return bits;
}

/// Reads a flat config file into "--key=value" tokens. Blank lines and
/// lines starting with '#' or ';' are skipped; values may be quoted.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw gsm::usage_error("cannot read config file '" + path + "'");
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string{};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  std::vector<std::string> out;
  std::string line;
  unsigned lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw gsm::usage_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") throw gsm::usage_error(path + ":" + std::to_string(lineno) + ": bad key");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

/// argv with the subcommand's config file expanded in front of its own
/// arguments, so that explicit flags (parsed later) take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;
  std::vector<std::string> out{args[0], args[1]};
  for (auto& t : config_tokens(path)) out.push_back(std::move(t));
  for (auto& t : rest) out.push_back(std::move(t));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GSM-MIMO encoding, detection and capacity experiments"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // encode / decode
  Common enc_c, dec_c;
  SystemArgs enc_s, dec_s;
  std::string enc_bits, dec_antennas;
  auto* enc = app.add_subcommand("encode", "antenna bits -> active antennas (1-based)");
  add_system(enc, enc_s, false, false);
  enc->add_option("--bits", enc_bits, "floor(log2 C(N,R)) antenna bits, most significant first")->required();
  add_common(enc, enc_c);
  auto* dec = app.add_subcommand("decode", "active antennas (1-based) -> antenna bits");
  add_system(dec, dec_s, false, false);
  dec->add_option("--antennas", dec_antennas, "comma list of R active antennas, 1-based")->required();
  add_common(dec, dec_c);

  // ber
  Common ber_c;
  SystemArgs ber_s;
  DetectorArgs ber_d;
  std::string ber_snr = "0:2:20";
  auto* ber = app.add_subcommand("ber", "Monte Carlo bit error rate sweep");
  add_system(ber, ber_s, true, true);
  add_detector(ber, ber_d);
  ber->add_option("--snr", ber_snr, "SNR grid in dB: start:step:stop or a comma list")->capture_default_str();
  add_common(ber, ber_c);

  // capacity
  Common cap_c;
  SystemArgs cap_s;
  std::string cap_snr = "0:5:30";
  std::uint64_t cap_channels = 1000, cap_mc = 0, cap_pairs = gsm::PairSumOptions{}.pair_budget;
  bool cap_full = false, cap_subsample = false;
  auto* cap = app.add_subcommand("capacity", "capacity bounds L1, L2, U1, U2 (and optional Monte Carlo estimate)");
  add_system(cap, cap_s, true, false);
  cap->add_option("--snr", cap_snr, "SNR grid in dB")->capture_default_str();
  cap->add_option("--channels", cap_channels, "channel realizations per SNR point")->capture_default_str();
  cap->add_option("--mc-samples", cap_mc, "Monte Carlo samples per channel for C_mc (0 = skip)")->capture_default_str();
  cap->add_flag("--full-set", cap_full, "use all C(N,R) patterns instead of the 2^eta_a signalling set");
  cap->add_option("--pair-budget", cap_pairs, "largest exact L1 pair sum")->capture_default_str();
  cap->add_flag("--subsample-pairs", cap_subsample, "subsample L1 pairs above the budget instead of failing");
  add_common(cap, cap_c);

  // required-snr
  Common req_c;
  SystemArgs req_s;
  DetectorArgs req_d;
  std::string req_m;
  gsm::RequiredSnrOptions req_o;
  auto* req = app.add_subcommand("required-snr", "SNR needed to reach a target BER, per receive antenna count");
  add_system(req, req_s, false, true);
  add_detector(req, req_d);
  req->add_option("--m-list", req_m, "comma list of receive antenna counts")->required();
  req->add_option("--target", req_o.target_ber, "target BER")->capture_default_str();
  req->add_option("--snr-min", req_o.snr_min_db, "search range lower end (dB)")->capture_default_str();
  req->add_option("--snr-max", req_o.snr_max_db, "search range upper end (dB)")->capture_default_str();
  req->add_option("--resolution", req_o.resolution_db, "bisection resolution (dB)")->capture_default_str();
  req->add_option("--frame-cap-factor", req_o.frame_cap_factor,
                  "per-probe frame cap as a multiple of min-errors / (target * eta); 0 = none")
      ->capture_default_str();
  add_common(req, req_c);

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const gsm::usage_error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
    std::reverse(args.begin(), args.end());
    args.pop_back();
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (enc->parsed()) {
      const gsm::GsmConfig cfg(enc_s.n, 1, enc_s.r, gsm::bpsk());
      const gsm::BitBlock bits = parse_bits(enc_bits);
      if (bits.size() != cfg.antenna_bits()) {
        throw gsm::usage_error("expected " + std::to_string(cfg.antenna_bits()) + " antenna bits, got " +
                               std::to_string(bits.size()));
      }
      const auto p = gsm::ActivationPattern::from_rank(gsm::bits_to_int(bits), cfg.n_rf());
      with_output(enc_c.out, [&](std::ostream& o) { o << "antennas: " << gsm::antenna_list(p) << '\n'; });
    } else if (dec->parsed()) {
      const gsm::GsmConfig cfg(dec_s.n, 1, dec_s.r, gsm::bpsk());
      std::vector<unsigned> idx = gsm::parse_unsigned_list(dec_antennas, "--antennas");
      if (idx.size() != cfg.n_rf()) throw gsm::usage_error("expected " + std::to_string(cfg.n_rf()) + " antennas");
      for (auto& i : idx) {
        if (i < 1 || i > cfg.n_tx()) throw gsm::usage_error("antenna labels must lie in 1.." + std::to_string(cfg.n_tx()));
        --i;
      }
      const auto p = gsm::ActivationPattern::from_indices(std::move(idx));
      if (!p.allowed_in(cfg)) {
        throw gsm::pattern_out_of_range("pattern rank " + std::to_string(p.rank()) + " is outside the " +
                                        std::to_string(cfg.num_patterns()) + " signalling patterns");
      }
      const auto bits = gsm::int_to_bits(p.rank(), cfg.antenna_bits());
      with_output(dec_c.out, [&](std::ostream& o) {
        o << "bits: ";
        for (const auto b : bits) o << static_cast<int>(b);
        o << '\n';
      });
    } else if (ber->parsed()) {
      gsm::ExperimentConfig e = make_experiment(ber_s, ber_s.m, ber_d, ber_c);
      e.snr_grid_db = gsm::parse_snr_grid(ber_snr);
      const auto rows = gsm::run_ber(e);
      with_output(ber_c.out, [&](std::ostream& o) { gsm::write_ber_csv(o, e, rows); });
    } else if (cap->parsed()) {
      gsm::CapacityExperiment e;
      e.system = make_system(cap_s, cap_s.m);
      e.snr_grid_db = gsm::parse_snr_grid(cap_snr);
      e.channels = cap_channels;
      e.mc_samples = cap_mc;
      e.options.full_pattern_set = cap_full;
      e.options.pairs.pair_budget = cap_pairs;
      e.options.pairs.allow_subsampling = cap_subsample;
      e.options.threads = cap_c.threads;
      e.seed = cap_c.seed;
      const auto rows = gsm::run_capacity(e);
      with_output(cap_c.out, [&](std::ostream& o) { gsm::write_capacity_csv(o, e, rows); });
    } else if (req->parsed()) {
      const auto ms = gsm::parse_unsigned_list(req_m, "--m-list");
      gsm::ExperimentConfig e = make_experiment(req_s, ms.front(), req_d, req_c);
      const auto rows = gsm::find_required_snr(e, ms, req_o);
      with_output(req_c.out, [&](std::ostream& o) { gsm::write_required_snr_csv(o, e, req_o, rows); });
    }
  } catch (const gsm::usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const gsm::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const gsm::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

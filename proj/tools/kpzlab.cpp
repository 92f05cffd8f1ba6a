// Command-line driver: seeded simulators, exact CDF tables, the
// Tracy-Widom table, the identity suite, and the scaling experiments.
// Everything is file-oriented: CSV/JSON/SVG artifacts under --out, exit code
// for CI.  All randomness flows through explicit seeds; reruns and different
// --workers counts produce byte-identical files.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kpzlab/combinatorics.hpp"
#include "kpzlab/ensembles.hpp"
#include "kpzlab/errors.hpp"
#include "kpzlab/growth.hpp"
#include "kpzlab/io.hpp"
#include "kpzlab/kernels_limits.hpp"
#include "kpzlab/rng.hpp"
#include "kpzlab/stats.hpp"
#include "kpzlab/toeplitz.hpp"
#include "kpzlab/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitStatistical = 4;

struct UsageFailure {
  std::string message;
};

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys{
      "model", "experiment", "method", "seed",   "samples", "out",  "workers", "threshold",
      "M",     "N",          "q",      "gamma",  "alpha",   "n",    "k",       "xi_min",
      "xi_max", "step",      "config"};
  return keys;
}

std::string normalize_key(std::string k) {
  for (char& c : k)
    if (c == '-') c = '_';
  return k;
}

struct Options {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }

  long get_long(const std::string& key, long fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      std::size_t used = 0;
      const long v = std::stol(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw UsageFailure{"value of " + key + " is not an integer: " + it->second};
    }
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      throw UsageFailure{"value of " + key + " is not an unsigned integer: " + it->second};
    }
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw UsageFailure{"value of " + key + " is not a number: " + it->second};
    }
  }
};

// Flat key=value config; blank lines and # comments skipped; CLI flags win.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageFailure{"cannot open config file: " + path};
  std::map<std::string, std::string> kv;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw UsageFailure{"config line " + std::to_string(lineno) + " is not key=value: " + body};
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    const std::string key = normalize_key(trim(body.substr(0, eq)));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw UsageFailure{"config line " + std::to_string(lineno) + " has an empty key or value"};
    if (!allowed_keys().count(key))
      throw UsageFailure{"config line " + std::to_string(lineno) + ": unknown key " + key};
    kv[key] = value;
  }
  return kv;
}

// argv after the subcommand: an optional positional word, then --key value /
// --key=value flags.  Config file applies first, flags override.
Options parse_options(int argc, char** argv, int start, const std::string& positional_key) {
  std::map<std::string, std::string> flags;
  std::string positional;
  for (int i = start; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) {
      if (!positional_key.empty() && positional.empty() && flags.empty()) {
        positional = arg;
        continue;
      }
      throw UsageFailure{"unexpected argument: " + arg};
    }
    arg = arg.substr(2);
    std::string key, value;
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      key = normalize_key(arg.substr(0, eq));
      value = arg.substr(eq + 1);
    } else {
      key = normalize_key(arg);
      if (i + 1 >= argc) throw UsageFailure{"flag --" + key + " is missing a value"};
      value = argv[++i];
    }
    if (!allowed_keys().count(key)) throw UsageFailure{"unknown flag --" + key};
    flags[key] = value;
  }
  Options opts;
  if (flags.count("config")) {
    opts.kv = parse_config_file(flags.at("config"));
    opts.kv.erase("config");
  }
  for (const auto& [k, v] : flags)
    if (k != "config") opts.kv[k] = v;
  if (!positional.empty()) opts.kv[positional_key] = positional;
  return opts;
}

long checked_samples(const Options& opts, long fallback) {
  const long s = opts.get_long("samples", fallback);
  if (s < 1) throw UsageFailure{"samples must be >= 1"};
  return s;
}

long checked_workers(const Options& opts) {
  const long w = opts.get_long("workers", 1);
  if (w < 1 || w > 64) throw UsageFailure{"workers must be in 1..64"};
  return w;
}

std::filesystem::path output_dir(const Options& opts) {
  const std::filesystem::path dir = opts.get("out", ".");
  std::filesystem::create_directories(dir);
  return dir;
}

// Samples are independent by construction: sample s always uses sub-stream s
// of the master seed, so any partition of indices over workers produces the
// same values.
template <typename F>
std::vector<long long> sample_batch(long samples, long workers, F&& one) {
  std::vector<long long> out(static_cast<std::size_t>(samples));
  const long w = std::min<long>(workers, samples);
  if (w <= 1) {
    for (long s = 0; s < samples; ++s) out[static_cast<std::size_t>(s)] = one(s);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (long id = 0; id < w; ++id)
    pool.emplace_back([&, id] {
      for (long s = id; s < samples; s += w) out[static_cast<std::size_t>(s)] = one(s);
    });
  for (auto& t : pool) t.join();
  return out;
}

void write_artifact(const std::filesystem::path& path, const std::string& content) {
  kpzlab::write_text_file(path.string(), content);
  std::cout << "wrote " << path.string() << "\n";
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Options& opts) {
  const std::string model = opts.get("model", "");
  if (model != "lpp" && model != "png" && model != "hammersley")
    throw UsageFailure{"simulate needs a model: lpp, png, or hammersley"};
  const std::uint64_t seed = opts.get_u64("seed", 1);
  const long samples = checked_samples(opts, 1000);
  const long workers = checked_workers(opts);
  const auto dir = output_dir(opts);

  kpzlab::CsvTable csv;
  if (model == "lpp" || model == "png") {
    const long M = opts.get_long("M", 1);
    const long N = opts.get_long("N", 1);
    const double q = opts.get_double("q", 0.5);
    if (M < 1 || N < 1) throw UsageFailure{"M and N must be >= 1"};
    if (!(q > 0.0 && q < 1.0)) throw UsageFailure{"q must be in (0,1)"};
    if (model == "lpp") {
      const auto values = sample_batch(samples, workers, [&](long s) {
        kpzlab::SeededStream rng(seed, static_cast<std::uint64_t>(s));
        return static_cast<long long>(kpzlab::lpp_value(kpzlab::sample_lpp_grid(M, N, q, rng)));
      });
      csv.header = {"sample_index", "value"};
      for (long s = 0; s < samples; ++s)
        csv.add_row({std::to_string(s), std::to_string(values[static_cast<std::size_t>(s)])});
    } else {
      // droplet growth fed by the same weights; the height at the light-cone
      // point (M-N, M+N-1) must equal the passage time, so both are emitted
      const auto heights = sample_batch(samples, workers, [&](long s) {
        kpzlab::SeededStream rng(seed, static_cast<std::uint64_t>(s));
        const kpzlab::LppGrid g = kpzlab::sample_lpp_grid(M, N, q, rng);
        const long long G = kpzlab::lpp_value(g);
        const long long h = kpzlab::png_from_lpp(g).height(M - N, M + N - 1);
        return (h << 32) | (G & 0xffffffffLL);
      });
      csv.header = {"sample_index", "value", "h", "G"};
      for (long s = 0; s < samples; ++s) {
        const long long packed = heights[static_cast<std::size_t>(s)];
        const long long h = packed >> 32;
        const long long G = packed & 0xffffffffLL;
        csv.add_row({std::to_string(s), std::to_string(G), std::to_string(h),
                     std::to_string(G)});
      }
    }
  } else {
    const double alpha = opts.get_double("alpha", 1.0);
    if (!(alpha > 0.0 && alpha <= 1e4)) throw UsageFailure{"alpha must be in (0, 1e4]"};
    const auto values = sample_batch(samples, workers, [&](long s) {
      kpzlab::SeededStream rng(seed, static_cast<std::uint64_t>(s));
      return static_cast<long long>(kpzlab::hammersley_sample(alpha, rng));
    });
    csv.header = {"sample_index", "value"};
    for (long s = 0; s < samples; ++s)
      csv.add_row({std::to_string(s), std::to_string(values[static_cast<std::size_t>(s)])});
  }

  write_artifact(dir / ("simulate_" + model + ".csv"), csv.to_string());
  return kExitPass;
}

// ------------------------------------------------------------------- exact

int cmd_exact(const Options& opts) {
  const std::string method = opts.get("method", "");
  if (method != "meixner" && method != "bessel" && method != "toeplitz")
    throw UsageFailure{"exact needs --method meixner|bessel|toeplitz"};
  const auto dir = output_dir(opts);

  kpzlab::CsvTable csv;
  if (method == "meixner") {
    const long M = opts.get_long("M", 3);
    const long N = opts.get_long("N", 3);
    const double q = opts.get_double("q", 0.3);
    const kpzlab::DiscreteWeight w = kpzlab::meixner_discrete_weight(M, N, q);
    csv.header = {"a", "cdf_value", "method", "est_error"};
    for (long a = 0; a <= w.max_point(); ++a)
      csv.add_row({std::to_string(a), kpzlab::fmt_g17(kpzlab::xmax_cdf_discrete(w, N, a)),
                   "meixner", kpzlab::fmt_g17(w.tail_bound)});
  } else if (method == "bessel") {
    const double alpha = opts.get_double("alpha", 1.0);
    const long n_max = opts.get_long("n", 10);
    if (n_max < 0) throw UsageFailure{"n must be >= 0"};
    csv.header = {"n", "cdf_value", "method", "est_error"};
    // the window-doubling route certifies its own settle at 1e-12
    for (long n = 0; n <= n_max; ++n)
      csv.add_row({std::to_string(n), kpzlab::fmt_g17(kpzlab::l_alpha_cdf(alpha, n)), "bessel",
                   kpzlab::fmt_g17(1e-12)});
  } else {
    const double alpha = opts.get_double("alpha", 1.0);
    const long n_max = opts.get_long("n", 6);
    if (n_max < 0) throw UsageFailure{"n must be >= 0"};
    csv.header = {"n", "cdf_value", "method", "est_error"};
    // report the measured deviation from the independent kernel route
    for (long n = 0; n <= n_max; ++n) {
      const double det_route = kpzlab::poissonized_toeplitz(alpha, n);
      const double kernel_route = kpzlab::l_alpha_cdf(alpha, n);
      csv.add_row({std::to_string(n), kpzlab::fmt_g17(det_route), "toeplitz",
                   kpzlab::fmt_g17(std::fabs(det_route - kernel_route))});
    }
  }

  write_artifact(dir / ("exact_" + method + ".csv"), csv.to_string());
  return kExitPass;
}

// ---------------------------------------------------------------- tw-table

int cmd_tw_table(const Options& opts) {
  const std::string method = opts.get("method", "both");
  if (method != "fredholm" && method != "painleve" && method != "both")
    throw UsageFailure{"tw-table needs --method fredholm|painleve|both"};
  const double xi_min = opts.get_double("xi_min", -8.0);
  const double xi_max = opts.get_double("xi_max", 4.0);
  const double step = opts.get_double("step", 0.1);
  if (!(step > 0.0)) throw UsageFailure{"step must be > 0"};
  if (!(xi_min <= xi_max) || xi_min < -10.0 || xi_max > 6.0)
    throw UsageFailure{"xi range must satisfy -10 <= xi_min <= xi_max <= 6"};
  const auto dir = output_dir(opts);

  kpzlab::CsvTable csv;
  double max_disc = 0.0;
  if (method == "both") {
    const kpzlab::Tw2Table tf = kpzlab::build_tw2_table(xi_min, xi_max, step, "fredholm");
    const kpzlab::Tw2Table tp = kpzlab::build_tw2_table(xi_min, xi_max, step, "painleve");
    csv.header = {"xi", "f2_fredholm", "f2_painleve", "discrepancy"};
    for (std::size_t i = 0; i < tf.xi_grid.size(); ++i) {
      const double d = std::fabs(tf.f2_values[i] - tp.f2_values[i]);
      max_disc = std::max(max_disc, d);
      csv.add_row({kpzlab::fmt_g17(tf.xi_grid[i]), kpzlab::fmt_g17(tf.f2_values[i]),
                   kpzlab::fmt_g17(tp.f2_values[i]), kpzlab::fmt_g17(d)});
    }
  } else {
    const kpzlab::Tw2Table t = kpzlab::build_tw2_table(xi_min, xi_max, step, method);
    csv.header = {"xi", "f2", "method"};
    for (std::size_t i = 0; i < t.xi_grid.size(); ++i)
      csv.add_row({kpzlab::fmt_g17(t.xi_grid[i]), kpzlab::fmt_g17(t.f2_values[i]), method});
  }

  write_artifact(dir / ("tw_table_" + method + ".csv"), csv.to_string());
  if (method == "both" && max_disc > 1e-6) {
    std::cerr << "error: cross-method discrepancy " << kpzlab::fmt_g17(max_disc)
              << " exceeds 1e-6\n";
    return kExitAccuracy;
  }
  return kExitPass;
}

// ------------------------------------------------------------------ verify

json record_to_json(const kpzlab::IdentityRecord& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return json{{"identity", r.identity}, {"params", params},   {"pass", r.pass},
              {"lhs", r.lhs},           {"rhs", r.rhs},       {"abs_diff", r.abs_diff}};
}

int cmd_verify(const Options& opts) {
  const auto dir = output_dir(opts);
  const std::vector<kpzlab::IdentityRecord> records = kpzlab::run_identity_suite();
  json report = json::array();
  bool all_pass = true;
  for (const auto& r : records) {
    report.push_back(record_to_json(r));
    std::cout << (r.pass ? "pass " : "FAIL ") << r.identity << " (abs_diff=" << r.abs_diff
              << ")\n";
    all_pass = all_pass && r.pass;
  }
  write_artifact(dir / "verify_report.json", report.dump(2) + "\n");
  if (!all_pass) {
    std::cerr << "error: identity suite has failures\n";
    return kExitIdentityFailure;
  }
  return kExitPass;
}

// -------------------------------------------------------------- experiment

struct ExperimentArtifacts {
  kpzlab::CsvTable samples_csv;
  kpzlab::CsvTable curve_csv;
  std::string svg;
  json summary;
  bool threshold_failed = false;
};

void write_experiment(const std::filesystem::path& dir, const std::string& name,
                      const ExperimentArtifacts& a) {
  write_artifact(dir / ("experiment_" + name + "_samples.csv"), a.samples_csv.to_string());
  write_artifact(dir / ("experiment_" + name + "_curve.csv"), a.curve_csv.to_string());
  write_artifact(dir / ("experiment_" + name + "_plot.svg"), a.svg);
  write_artifact(dir / ("experiment_" + name + "_summary.json"), a.summary.dump(2) + "\n");
}

// Shared tail for the two sampling experiments: rescaled samples vs the
// reference edge law on a fixed grid.
ExperimentArtifacts edge_law_artifacts(const std::string& title,
                                       const std::vector<double>& rescaled,
                                       const std::function<double(double)>& f2, double ks,
                                       double threshold, json parameters, std::uint64_t seed) {
  ExperimentArtifacts a;
  a.samples_csv.header = {"sample_index", "value"};
  for (std::size_t s = 0; s < rescaled.size(); ++s)
    a.samples_csv.add_row({std::to_string(s), kpzlab::fmt_g17(rescaled[s])});

  const kpzlab::EmpiricalDistribution dist = kpzlab::make_empirical(rescaled, seed, 0);
  a.curve_csv.header = {"xi", "ecdf", "f2"};
  kpzlab::SvgSeries emp{"empirical CDF", "#1f77b4", {}};
  kpzlab::SvgSeries ref{"reference edge law", "#d62728", {}};
  for (int i = 0; i <= 320; ++i) {
    const double xi = -10.0 + 0.05 * i;
    const double e = kpzlab::ecdf(dist, xi);
    const double f = f2(xi);
    a.curve_csv.add_row({kpzlab::fmt_g17(xi), kpzlab::fmt_g17(e), kpzlab::fmt_g17(f)});
    emp.points.emplace_back(xi, e);
    ref.points.emplace_back(xi, f);
  }
  a.svg = kpzlab::svg_line_chart(title, "rescaled value", "CDF", {emp, ref});

  a.summary = json{{"ks", ks},
                   {"samples", rescaled.size()},
                   {"seed", seed},
                   {"threshold", threshold},
                   {"pass", ks <= threshold},
                   {"parameters", std::move(parameters)}};
  a.threshold_failed = !(ks <= threshold);
  return a;
}

int cmd_experiment(const Options& opts) {
  const std::string name = opts.get("experiment", "");
  if (name != "thm32" && name != "thm33" && name != "gue_edge" && name != "transversal")
    throw UsageFailure{"experiment needs one of: thm32, thm33, gue_edge, transversal"};
  const std::uint64_t seed = opts.get_u64("seed", 1);
  const long workers = checked_workers(opts);
  const double threshold = opts.get_double("threshold", 0.05);
  const auto dir = output_dir(opts);

  ExperimentArtifacts a;

  if (name == "thm32") {
    const double gamma = opts.get_double("gamma", 1.0);
    const double q = opts.get_double("q", 0.25);
    const long N = opts.get_long("N", 200);
    const long samples = checked_samples(opts, 10000);
    if (N < 1) throw UsageFailure{"N must be >= 1"};
    const long M = static_cast<long>(std::floor(gamma * static_cast<double>(N) + 1e-9));
    const kpzlab::ScalingConstants sc = kpzlab::thm32_scaling(gamma, q);
    const auto raw = sample_batch(samples, workers, [&](long s) {
      kpzlab::SeededStream rng(seed, static_cast<std::uint64_t>(s));
      return static_cast<long long>(kpzlab::lpp_value(kpzlab::sample_lpp_grid(M, N, q, rng)));
    });
    const double center = sc.omega * static_cast<double>(N);
    const double scale = sc.sigma * std::cbrt(static_cast<double>(N));
    // plain affine rescaling: at desk-scale N the physical finite-size error
    // and the lattice discretization partially cancel, and the documented
    // thresholds were set under this convention
    std::vector<double> rescaled;
    rescaled.reserve(raw.size());
    for (long long g : raw) rescaled.push_back((static_cast<double>(g) - center) / scale);
    const kpzlab::Tw2Table table = kpzlab::build_tw2_table(-10.0, 6.0, 0.05, "fredholm");
    const auto f2 = kpzlab::tw2_table_cdf(table);
    const double ks = kpzlab::ks_distance(kpzlab::make_empirical(rescaled, seed, 0), f2);
    a = edge_law_artifacts(
        "Rectangle passage time vs edge law", rescaled, f2, ks, threshold,
        json{{"experiment", name}, {"gamma", gamma}, {"q", q}, {"N", N}, {"M", M},
             {"omega", sc.omega}, {"sigma", sc.sigma}},
        seed);
  } else if (name == "thm33") {
    const double alpha = opts.get_double("alpha", 400.0);
    const long samples = checked_samples(opts, 10000);
    if (!(alpha > 0.0 && alpha <= 1e4)) throw UsageFailure{"alpha must be in (0, 1e4]"};
    const auto raw = sample_batch(samples, workers, [&](long s) {
      kpzlab::SeededStream rng(seed, static_cast<std::uint64_t>(s));
      return static_cast<long long>(kpzlab::hammersley_sample(alpha, rng));
    });
    const double center = 2.0 * std::sqrt(alpha);
    const double scale = std::pow(alpha, 1.0 / 6.0);
    const kpzlab::Tw2Table table = kpzlab::build_tw2_table(-10.0, 6.0, 0.05, "fredholm");
    const auto f2 = kpzlab::tw2_table_cdf(table);
    // integer-valued law: KS on the lattice, with the reference CDF read at
    // the plainly rescaled lattice points
    std::vector<double> raw_d(raw.begin(), raw.end());
    const double ks = kpzlab::ks_distance_lattice(
        kpzlab::make_empirical(raw_d, seed, 0),
        [&](double t) { return f2((t - center) / scale); });
    std::vector<double> rescaled;
    rescaled.reserve(raw.size());
    for (long long g : raw) rescaled.push_back((static_cast<double>(g) - center) / scale);
    a = edge_law_artifacts("Poissonized increasing-chain length vs edge law", rescaled, f2, ks,
                           threshold,
                           json{{"experiment", name}, {"alpha", alpha}},
                           seed);
  } else if (name == "gue_edge") {
    const long N = opts.get_long("N", 50);
    if (N < 1 || N > 200) throw UsageFailure{"N must be in 1..200"};
    // exact finite-size law against the limit: sup-discrepancy on a grid
    a.samples_csv.header = {"sample_index", "value"};
    a.curve_csv.header = {"xi", "ecdf", "f2"};
    kpzlab::SvgSeries fin{"finite-size edge CDF", "#1f77b4", {}};
    kpzlab::SvgSeries ref{"limit edge law", "#d62728", {}};
    double sup = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double xi = -3.5 + 0.1 * i;
      const double lhs = kpzlab::gue_xmax_cdf(N, xi);
      const double rhs = kpzlab::tw2_fredholm(xi);
      sup = std::max(sup, std::fabs(lhs - rhs));
      a.curve_csv.add_row({kpzlab::fmt_g17(xi), kpzlab::fmt_g17(lhs), kpzlab::fmt_g17(rhs)});
      fin.points.emplace_back(xi, lhs);
      ref.points.emplace_back(xi, rhs);
    }
    a.svg = kpzlab::svg_line_chart("Hermite ensemble edge vs limit law", "xi", "CDF", {fin, ref});
    a.summary = json{{"ks", sup},          {"samples", 0},     {"seed", seed},
                     {"threshold", threshold}, {"pass", sup <= threshold},
                     {"parameters", json{{"experiment", name}, {"N", N}}}};
    a.threshold_failed = !(sup <= threshold);
  } else {  // transversal
    const double q = opts.get_double("q", 0.25);
    const long samples = checked_samples(opts, 100);
    const std::vector<long> sizes{64, 128, 256};
    a.samples_csv.header = {"N", "sample_index", "value"};
    a.curve_csv.header = {"N", "median_deviation"};
    kpzlab::SvgSeries med{"median transversal deviation", "#1f77b4", {}};
    json medians = json::object();
    for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
      const long N = sizes[idx];
      const auto devs = sample_batch(samples, workers, [&](long s) {
        kpzlab::SeededStream rng(seed,
                                 static_cast<std::uint64_t>(idx) * 1000000 +
                                     static_cast<std::uint64_t>(s));
        const kpzlab::LppGrid g = kpzlab::sample_lpp_grid(N, N, q, rng);
        return static_cast<long long>(kpzlab::transversal_deviation(kpzlab::lpp_maximal_path(g)));
      });
      for (long s = 0; s < samples; ++s)
        a.samples_csv.add_row({std::to_string(N), std::to_string(s),
                               std::to_string(devs[static_cast<std::size_t>(s)])});
      std::vector<long long> sorted = devs;
      std::sort(sorted.begin(), sorted.end());
      const long long median = sorted[(sorted.size() - 1) / 2];
      a.curve_csv.add_row({std::to_string(N), std::to_string(median)});
      med.points.emplace_back(static_cast<double>(N), static_cast<double>(median));
      medians[std::to_string(N)] = median;
    }
    a.svg = kpzlab::svg_line_chart("Transversal wandering of maximal paths", "grid size N",
                                   "median deviation", {med});
    // descriptive experiment: medians are reported, no exponent is asserted
    a.summary = json{{"ks", nullptr},       {"samples", samples}, {"seed", seed},
                     {"threshold", nullptr}, {"pass", true},
                     {"parameters", json{{"experiment", name},
                                         {"q", q},
                                         {"sizes", sizes},
                                         {"medians", medians}}}};
  }

  write_experiment(dir, name, a);
  if (a.threshold_failed) {
    std::cerr << "error: statistic exceeded the configured threshold (artifacts written)\n";
    return kExitStatistical;
  }
  return kExitPass;
}

// -------------------------------------------------------------------- main

void print_usage(std::ostream& os) {
  os << "usage: kpzlab <command> [name] [--flag value ...]\n"
        "\n"
        "commands:\n"
        "  simulate <lpp|png|hammersley>   seeded draws to CSV\n"
        "      lpp/png: --M --N --q; hammersley: --alpha; common: --seed --samples --workers\n"
        "  exact --method <meixner|bessel|toeplitz>\n"
        "      meixner: --M --N --q; bessel/toeplitz: --alpha --n (max threshold)\n"
        "  tw-table [--method fredholm|painleve|both] --xi-min --xi-max --step\n"
        "  verify                          run the exact identity suite, write JSON report\n"
        "  experiment <thm32|thm33|gue_edge|transversal>\n"
        "      thm32: --gamma --q --N; thm33: --alpha; gue_edge: --N; transversal: --q\n"
        "      common: --seed --samples --workers --threshold\n"
        "\n"
        "  every command accepts --config FILE (flat key=value lines; flags override)\n"
        "  and --out DIR for artifacts.  Seeds default to 1; there is no wall-clock\n"
        "  seeding, so identical configs give byte-identical outputs.\n"
        "\n"
        "exit codes: 0 pass, 1 identity failure, 2 usage, 3 accuracy, 4 statistical\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(std::cerr);
    return kExitUsage;
  }
  const std::string cmd = argv[1];
  if (cmd == "help" || cmd == "--help" || cmd == "-h") {
    print_usage(std::cout);
    return kExitPass;
  }
  try {
    if (cmd == "simulate") return cmd_simulate(parse_options(argc, argv, 2, "model"));
    if (cmd == "exact") return cmd_exact(parse_options(argc, argv, 2, "method"));
    if (cmd == "tw-table") return cmd_tw_table(parse_options(argc, argv, 2, "method"));
    if (cmd == "verify") return cmd_verify(parse_options(argc, argv, 2, ""));
    if (cmd == "experiment") return cmd_experiment(parse_options(argc, argv, 2, "experiment"));
    std::cerr << "error: unknown command " << cmd << "\n";
    print_usage(std::cerr);
    return kExitUsage;
  } catch (const UsageFailure& u) {
    std::cerr << "error: " << u.message << "\n";
    return kExitUsage;
  } catch (const kpzlab::accuracy_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const kpzlab::conditioning_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const kpzlab::instability_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

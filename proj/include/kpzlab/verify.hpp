#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/combinatorics.hpp"
#include "kpzlab/ensembles.hpp"
#include "kpzlab/growth.hpp"
#include "kpzlab/io.hpp"
#include "kpzlab/kernels_limits.hpp"
#include "kpzlab/rng.hpp"
#include "kpzlab/toeplitz.hpp"

namespace kpzlab {

// One verified identity.  For batteries of exact cases the passing record
// carries the battery checksum (exact sum of all left sides, which equals the
// sum of all right sides); a failing battery reports the first offending case
// with both of its values, so the report always names a concrete counterexample.
struct IdentityRecord {
  std::string identity;
  std::vector<std::pair<std::string, std::string>> params;
  bool pass = false;
  std::string lhs;
  std::string rhs;
  std::string abs_diff;
};

namespace detail {

struct ExactBattery {
  std::string name;
  std::vector<std::pair<std::string, std::string>> battery_params;
  long cases = 0;
  Rational lhs_sum = Rational(0);
  Rational rhs_sum = Rational(0);
  bool failed = false;
  IdentityRecord failure;

  void check(const std::vector<std::pair<std::string, std::string>>& case_params,
             const Rational& lhs, const Rational& rhs) {
    ++cases;
    lhs_sum += lhs;
    rhs_sum += rhs;
    if (failed || lhs == rhs) return;
    failed = true;
    failure.identity = name;
    failure.params = case_params;
    failure.pass = false;
    failure.lhs = lhs.get_str();
    failure.rhs = rhs.get_str();
    failure.abs_diff = Rational(abs(lhs - rhs)).get_str();
  }

  IdentityRecord record() const {
    if (failed) return failure;
    IdentityRecord r;
    r.identity = name;
    r.params = battery_params;
    r.params.emplace_back("cases", std::to_string(cases));
    r.pass = true;
    r.lhs = lhs_sum.get_str();
    r.rhs = rhs_sum.get_str();
    r.abs_diff = "0";
    return r;
  }
};

struct FloatBattery {
  std::string name;
  std::vector<std::pair<std::string, std::string>> battery_params;
  double tolerance = 0.0;
  long cases = 0;
  double worst = -1.0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  std::vector<std::pair<std::string, std::string>> worst_params;

  void check(const std::vector<std::pair<std::string, std::string>>& case_params, double lhs,
             double rhs) {
    ++cases;
    const double d = std::fabs(lhs - rhs);
    if (d > worst) {
      worst = d;
      worst_lhs = lhs;
      worst_rhs = rhs;
      worst_params = case_params;
    }
  }

  IdentityRecord record() const {
    IdentityRecord r;
    r.identity = name;
    r.pass = cases > 0 && worst <= tolerance;
    r.params = r.pass ? battery_params : worst_params;
    r.params.emplace_back("cases", std::to_string(cases));
    r.params.emplace_back("tolerance", fmt_g17(tolerance));
    r.lhs = fmt_g17(worst_lhs);
    r.rhs = fmt_g17(worst_rhs);
    r.abs_diff = fmt_g17(worst < 0 ? 0.0 : worst);
    return r;
  }
};

inline Rational int_pow(const Rational& base, long e) {
  Rational acc(1);
  for (long i = 0; i < e; ++i) acc *= base;
  return acc;
}

}  // namespace detail

// Weighted-symmetrization identity: the n!-fold symmetrized sum of
// det(phi_i(x_j)) det(psi_i(x_j)) against a product weight equals the
// determinant of the mixed moment matrix.  Exact rationals end to end.
inline IdentityRecord verify_heine_symmetrization() {
  detail::ExactBattery battery;
  battery.name = "heine-symmetrization";
  battery.battery_params = {{"carriers", "4,6,12"}, {"orders", "1..4"}, {"weight", "1/(x+1)"}};
  for (long carrier : {4L, 6L, 12L}) {
    std::vector<Rational> w;
    for (long x = 0; x < carrier; ++x) w.push_back(Rational(1) / Rational(x + 1));
    for (long n = 1; n <= 4; ++n) {
      std::vector<std::vector<Rational>> phi, psi;
      for (long k = 0; k < n; ++k) {
        std::vector<Rational> p, s;
        for (long x = 0; x < carrier; ++x) {
          p.push_back(detail::int_pow(Rational(x), k));
          s.push_back(detail::int_pow(Rational(x + 1), k));
        }
        phi.push_back(std::move(p));
        psi.push_back(std::move(s));
      }
      const auto [lhs, rhs] = heine_check(w, phi, psi);
      battery.check({{"carrier", std::to_string(carrier)}, {"order", std::to_string(n)}}, lhs,
                    rhs);
    }
  }
  return battery.record();
}

// Determinant route to Schur polynomials equals the column-strict tableau sum.
inline IdentityRecord verify_jacobi_trudi_vs_tableaux() {
  detail::ExactBattery battery;
  battery.name = "jacobi-trudi-vs-tableaux";
  battery.battery_params = {{"partition_sizes", "0..8"},
                            {"variable_sets", "(1/2,1/3,1/5) and (2/7,3/4)"}};
  const std::vector<Rational> vars3{Rational(1) / 2, Rational(1) / 3, Rational(1) / 5};
  const std::vector<Rational> vars2{Rational(2) / 7, Rational(3) / 4};
  const auto run_case = [&](const Partition& lam, const std::vector<Rational>& vars, int set) {
    const Rational jt = schur_jacobi_trudi(lam, vars, std::max(lam.first(), 1L));
    const Rational tab = schur_tableaux(lam, vars);
    std::string shape = "(";
    for (std::size_t i = 0; i < lam.parts.size(); ++i) {
      if (i) shape += ",";
      shape += std::to_string(lam.parts[i]);
    }
    shape += ")";
    battery.check({{"partition", shape}, {"variable_set", std::to_string(set)}}, jt, tab);
  };
  run_case(Partition{}, vars3, 3);
  run_case(Partition{}, vars2, 2);
  for (long size = 1; size <= 8; ++size) {
    std::vector<long> stack;
    detail::for_each_partition_bounded(size, size, stack, [&](const Partition& lam) {
      run_case(lam, vars3, 3);
      run_case(lam, vars2, 2);
    });
  }
  return battery.record();
}

// Toeplitz determinant of the two-sided generating symbol equals the
// restricted Schur-function sum.
inline IdentityRecord verify_gessel_restricted_schur() {
  detail::ExactBattery battery;
  battery.name = "gessel-restricted-schur";
  battery.battery_params = {{"orders", "0..4"}, {"parameter_values", "1/2 and 1/3, lists up to 2"}};
  const Rational h = Rational(1) / 2, t = Rational(1) / 3;
  const std::vector<std::vector<Rational>> lists{{}, {h}, {t}, {h, h}, {h, t}, {t, t}};
  const auto list_str = [](const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += v[i].get_str();
    }
    return s + ")";
  };
  for (long n = 0; n <= 4; ++n)
    for (const auto& a : lists)
      for (const auto& b : lists) {
        const auto [lhs, rhs] = gessel_check(n, a, b);
        battery.check({{"order", std::to_string(n)}, {"a", list_str(a)}, {"b", list_str(b)}}, lhs,
                      rhs);
      }
  return battery.record();
}

// First row of the insertion tableau equals the last-passage value of the
// same weight matrix, exactly, across seeded grids.
inline IdentityRecord verify_rsk_lpp_top_row() {
  detail::ExactBattery battery;
  battery.name = "rsk-lpp-top-row";
  battery.battery_params = {{"seeds", "100"}, {"grid_sizes", "up to 8x8"}};
  for (std::uint64_t s = 0; s < 100; ++s) {
    const long M = 1 + static_cast<long>(s % 8);
    const long N = 1 + static_cast<long>((s / 8) % 8);
    const double q = 0.30 + 0.05 * static_cast<double>(s % 5);
    SeededStream rng(9000 + s, 0);
    const LppGrid g = sample_lpp_grid(M, N, q, rng);
    std::vector<std::vector<long>> w(static_cast<std::size_t>(M),
                                     std::vector<long>(static_cast<std::size_t>(N)));
    for (long i = 1; i <= M; ++i)
      for (long j = 1; j <= N; ++j) w[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = g.at(i, j);
    const auto tableaux = rsk(w);
    const Partition shape = tableaux.first.shape();
    const long top = shape.parts.empty() ? 0 : shape.parts[0];
    battery.check({{"seed", std::to_string(s)},
                   {"M", std::to_string(M)},
                   {"N", std::to_string(N)},
                   {"q", fmt_g17(q)}},
                  Rational(top), Rational(lpp_value(g)));
  }
  return battery.record();
}

// Droplet growth driven by the LPP weights reproduces the passage-time table
// on the light-cone slices: h(i-j, i+j-1) = G(i,j).
inline IdentityRecord verify_png_lpp_coupling() {
  detail::ExactBattery battery;
  battery.name = "png-lpp-coupling";
  battery.battery_params = {{"seeds", "100"}, {"grid", "16x16"}, {"q", "0.3"}};
  for (std::uint64_t s = 0; s < 100; ++s) {
    SeededStream rng(17000 + s, 0);
    const LppGrid g = sample_lpp_grid(16, 16, 0.3, rng);
    const PngField f = png_from_lpp(g);
    std::vector<std::vector<long>> G(17, std::vector<long>(17, 0));
    for (long i = 1; i <= 16; ++i)
      for (long j = 1; j <= 16; ++j)
        G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            std::max(G[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)],
                     G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]) +
            g.at(i, j);
    for (long i = 1; i <= 16; ++i)
      for (long j = 1; j <= 16; ++j)
        battery.check({{"seed", std::to_string(s)},
                       {"i", std::to_string(i)},
                       {"j", std::to_string(j)}},
                      Rational(f.height(i - j, i + j - 1)),
                      Rational(G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
  }
  return battery.record();
}

// Toeplitz determinant of the signed-binomial symbol equals the boxed
// plane-partition product.
inline IdentityRecord verify_macmahon_toeplitz_product() {
  detail::ExactBattery battery;
  battery.name = "macmahon-toeplitz-product";
  battery.battery_params = {{"box_sides", "0..3"}, {"orders", "0..4"}};
  for (long a = 0; a <= 3; ++a)
    for (long b = 0; b <= 3; ++b)
      for (long n = 0; n <= 4; ++n) {
        const auto [lhs, rhs] = macmahon_toeplitz_check(a, b, n);
        battery.check(
            {{"a", std::to_string(a)}, {"b", std::to_string(b)}, {"n", std::to_string(n)}}, lhs,
            rhs);
      }
  return battery.record();
}

// Brute enumeration of plane partitions in a box agrees with the product
// formula; the 2x2x2 box holds the classical 20.
inline IdentityRecord verify_plane_partition_box_count() {
  detail::ExactBattery battery;
  battery.name = "plane-partition-box-count";
  battery.battery_params = {{"boxes", "all a*b<=9, c<=4, plus anchor 2x2x2=20"}};
  for (long a = 0; a <= 3; ++a)
    for (long b = 0; b <= 3; ++b)
      for (long c = 0; c <= 4; ++c) {
        if (a * b > 9) continue;
        battery.check(
            {{"a", std::to_string(a)}, {"b", std::to_string(b)}, {"c", std::to_string(c)}},
            plane_partition_count(a, b, c), macmahon_product(a, b, c));
      }
  battery.check({{"a", "2"}, {"b", "2"}, {"c", "2"}, {"anchor", "20"}},
                plane_partition_count(2, 2, 2), Rational(20));
  return battery.record();
}

// The averaged absolute-power of the characteristic polynomial at a fixed
// spectral point is an exact integer for integer parameters.
inline IdentityRecord verify_cue_moment_integrality() {
  detail::ExactBattery battery;
  battery.name = "cue-moment-integrality";
  battery.battery_params = {{"dimensions", "1..10"}, {"powers", "0..10"}};
  for (long n = 1; n <= 10; ++n)
    for (long k = 0; k <= 10; ++k) {
      const Rational m = cue_moment_exact(n, k);
      battery.check({{"n", std::to_string(n)}, {"k", std::to_string(k)}}, m,
                    Rational(m.get_num()));
    }
  battery.check({{"n", "1"}, {"k", "1"}, {"anchor", "2"}}, cue_moment_exact(1, 1), Rational(2));
  battery.check({{"n", "4"}, {"k", "1"}, {"anchor", "5"}}, cue_moment_exact(4, 1), Rational(5));
  return battery.record();
}

// Monte Carlo moment of |det(I - U)|^2 over Haar unitaries against the exact
// factorial-product value, judged at three standard errors.
inline IdentityRecord verify_cue_moment_mc() {
  IdentityRecord r;
  r.identity = "cue-moment-mc";
  const long n = 4, k = 1, samples = 10000;
  const SeededStream rng(77, 500);
  const McEstimate mc = cue_moment_mc(n, k, 0.0, samples, rng);
  const double exact = to_double(cue_moment_exact(n, k));
  const double diff = std::fabs(mc.value - exact);
  r.params = {{"n", std::to_string(n)},
              {"k", std::to_string(k)},
              {"samples", std::to_string(samples)},
              {"seed", "77"},
              {"std_error", fmt_g17(mc.std_error)},
              {"bound", fmt_g17(3.0 * mc.std_error)}};
  r.pass = diff <= 3.0 * mc.std_error;
  r.lhs = fmt_g17(mc.value);
  r.rhs = fmt_g17(exact);
  r.abs_diff = fmt_g17(diff);
  return r;
}

// Haar average of exp(trace g(U)) against the Toeplitz determinant of the
// exponentiated symbol, judged at three standard errors.
inline IdentityRecord verify_weyl_trace_mc() {
  IdentityRecord r;
  r.identity = "weyl-trace-mc";
  const std::map<long, std::complex<double>> g{{1, {0.5, 0.0}}, {-1, {0.5, 0.0}}};
  const long n = 8, samples = 20000;
  const WeylComparison c = weyl_mc_check(g, n, samples, SeededStream(78, 900));
  const double diff = std::fabs(c.mc - c.det_side);
  r.params = {{"symbol", "cosine, amplitude 1/2"},
              {"n", std::to_string(n)},
              {"samples", std::to_string(samples)},
              {"seed", "78"},
              {"std_error", fmt_g17(c.mc_std_error)},
              {"bound", fmt_g17(3.0 * c.mc_std_error)}};
  r.pass = diff <= 3.0 * c.mc_std_error;
  r.lhs = fmt_g17(c.mc);
  r.rhs = fmt_g17(c.det_side);
  r.abs_diff = fmt_g17(diff);
  return r;
}

namespace detail {

struct KernelConfig {
  long M;
  long N;
  double q;
};

inline const std::vector<KernelConfig>& kernel_configs() {
  static const std::vector<KernelConfig> configs{{3, 3, 0.3}, {5, 3, 0.5}, {4, 2, 0.35}};
  return configs;
}

}  // namespace detail

// The rank-N projection kernel has trace N.
inline IdentityRecord verify_kernel_trace() {
  detail::FloatBattery battery;
  battery.name = "kernel-trace";
  battery.battery_params = {{"configs", "(M,N,q) in {(3,3,0.3),(5,3,0.5),(4,2,0.35)}"}};
  battery.tolerance = 1e-10;
  for (const auto& c : detail::kernel_configs()) {
    const DiscreteWeight w = meixner_discrete_weight(c.M, c.N, c.q);
    const OrthoPolySystem sys = stieltjes_system(w, c.N - 1);
    const KernelMatrix km = kernel_matrix(sys, w, c.N);
    battery.check({{"M", std::to_string(c.M)},
                   {"N", std::to_string(c.N)},
                   {"q", fmt_g17(c.q)}},
                  km.entries.trace(), static_cast<double>(c.N));
  }
  return battery.record();
}

// The kernel matrix is idempotent: K^2 = K entrywise.
inline IdentityRecord verify_kernel_projection() {
  detail::FloatBattery battery;
  battery.name = "kernel-projection";
  battery.battery_params = {{"configs", "(M,N,q) in {(3,3,0.3),(5,3,0.5),(4,2,0.35)}"}};
  battery.tolerance = 1e-9;
  for (const auto& c : detail::kernel_configs()) {
    const DiscreteWeight w = meixner_discrete_weight(c.M, c.N, c.q);
    const OrthoPolySystem sys = stieltjes_system(w, c.N - 1);
    const KernelMatrix km = kernel_matrix(sys, w, c.N);
    const double dev = (km.entries * km.entries - km.entries).cwiseAbs().maxCoeff();
    battery.check(
        {{"M", std::to_string(c.M)}, {"N", std::to_string(c.N)}, {"q", fmt_g17(c.q)}}, dev, 0.0);
  }
  return battery.record();
}

// Kernel-determinant correlation functions equal brute-force sums over all
// particle configurations on a bounded support.
inline IdentityRecord verify_correlation_vs_brute() {
  detail::FloatBattery battery;
  battery.name = "correlation-vs-brute";
  battery.battery_params = {{"support", "geometric(0.55) on 0..8"}, {"ranks", "1..3"}};
  battery.tolerance = 1e-10;
  DiscreteWeight w;
  for (long x = 0; x < 9; ++x) w.values.push_back(std::pow(0.55, static_cast<double>(x)));
  const std::vector<std::vector<long>> point_sets{{0}, {2}, {7}, {0, 1}, {1, 5}, {0, 1, 2},
                                                  {2, 4, 8}};
  for (long N = 1; N <= 3; ++N) {
    const OrthoPolySystem sys = stieltjes_system(w, N - 1);
    const KernelMatrix km = kernel_matrix(sys, w, N);
    for (const auto& pts : point_sets) {
      if (static_cast<long>(pts.size()) > N) continue;
      std::string pstr = "(";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) pstr += ",";
        pstr += std::to_string(pts[i]);
      }
      pstr += ")";
      battery.check({{"N", std::to_string(N)}, {"points", pstr}}, correlation_fn(km, pts),
                    brute_correlation(w, N, pts));
    }
  }
  return battery.record();
}

// Mean multiplicative statistic: the ensemble average of prod(1 + f(x_i))
// equals det(I + f K) on the support, including the tail indicator that
// reproduces the rightmost-particle law.
inline IdentityRecord verify_mean_multiplicative_statistic() {
  detail::FloatBattery battery;
  battery.name = "mean-multiplicative-statistic";
  battery.battery_params = {{"support", "geometric(0.55) on 0..8"}, {"ranks", "1..4"},
                            {"test_functions", "zero, minus-one, oscillatory, tail indicator"}};
  battery.tolerance = 1e-10;
  DiscreteWeight w;
  for (long x = 0; x < 9; ++x) w.values.push_back(std::pow(0.55, static_cast<double>(x)));
  for (long N = 1; N <= 4; ++N) {
    const auto nstr = std::to_string(N);
    const auto [l0, r0] = fredholm_expectation_check(w, N, [](long) { return 0.0; });
    battery.check({{"N", nstr}, {"f", "zero"}}, l0, r0);
    const auto [l1, r1] = fredholm_expectation_check(w, N, [](long) { return -1.0; });
    battery.check({{"N", nstr}, {"f", "minus-one"}}, l1, r1);
    const auto [l2, r2] =
        fredholm_expectation_check(w, N, [](long x) { return 0.3 * std::sin(1.7 * x); });
    battery.check({{"N", nstr}, {"f", "oscillatory"}}, l2, r2);
    const long a = 2;
    const auto [l3, r3] =
        fredholm_expectation_check(w, N, [a](long x) { return x > a ? -1.0 : 0.0; });
    battery.check({{"N", nstr}, {"f", "tail-indicator"}}, l3, r3);
    battery.check({{"N", nstr}, {"f", "tail-indicator-vs-max-law"}}, r3,
                  xmax_cdf_discrete(w, N, a));
  }
  return battery.record();
}

// Three independent routes to the Poissonized longest-increasing-subsequence
// law: Toeplitz determinant of the exponential symbol, Fredholm determinant
// of the discrete Bessel kernel, and the Poisson mixture of exhaustive
// fixed-size laws.
inline IdentityRecord verify_poissonization_triangle() {
  detail::FloatBattery battery;
  battery.name = "poissonization-triangle";
  battery.battery_params = {{"rates", "0.5, 1, 2"}, {"thresholds", "1..6"}};
  battery.tolerance = 1e-9;
  for (double alpha : {0.5, 1.0, 2.0})
    for (long n = 1; n <= 6; ++n) {
      const double det_route = poissonized_toeplitz(alpha, n);
      const double kernel_route = l_alpha_cdf(alpha, n);
      const double mixture_route = poissonized_lis_cdf(alpha, n);
      const auto base = std::vector<std::pair<std::string, std::string>>{
          {"alpha", fmt_g17(alpha)}, {"n", std::to_string(n)}};
      auto p1 = base;
      p1.emplace_back("pair", "toeplitz-vs-kernel");
      battery.check(p1, det_route, kernel_route);
      auto p2 = base;
      p2.emplace_back("pair", "toeplitz-vs-mixture");
      battery.check(p2, det_route, mixture_route);
      auto p3 = base;
      p3.emplace_back("pair", "kernel-vs-mixture");
      battery.check(p3, kernel_route, mixture_route);
    }
  return battery.record();
}

inline std::vector<IdentityRecord> run_identity_suite() {
  std::vector<IdentityRecord> records;
  records.push_back(verify_heine_symmetrization());
  records.push_back(verify_jacobi_trudi_vs_tableaux());
  records.push_back(verify_gessel_restricted_schur());
  records.push_back(verify_rsk_lpp_top_row());
  records.push_back(verify_png_lpp_coupling());
  records.push_back(verify_macmahon_toeplitz_product());
  records.push_back(verify_plane_partition_box_count());
  records.push_back(verify_cue_moment_integrality());
  records.push_back(verify_cue_moment_mc());
  records.push_back(verify_weyl_trace_mc());
  records.push_back(verify_kernel_trace());
  records.push_back(verify_kernel_projection());
  records.push_back(verify_correlation_vs_brute());
  records.push_back(verify_mean_multiplicative_statistic());
  records.push_back(verify_poissonization_triangle());
  return records;
}

}  // namespace kpzlab

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "kpzlab/dd.hpp"
#include "kpzlab/errors.hpp"

namespace kpzlab {

struct AiryValue {
  double ai;
  double ai_prime;
};

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, inside (a,b)
  std::vector<double> weights;  // positive, summing to b-a
  double a = 0.0;
  double b = 0.0;
};

namespace detail {

// Ai(0) and -Ai'(0) as double-double constants.
inline constexpr double kAi0Hi = 0.3550280538878172;
inline constexpr double kAi0Lo = 2.05233632436212e-17;
inline constexpr double kNegAip0Hi = 0.2588194037928068;
inline constexpr double kNegAip0Lo = -2.522243111610832e-17;

inline constexpr double kTwoSqrtPi = 3.5449077018110320545963349666823;  // 2*sqrt(pi)
inline constexpr double kSqrtPi = 1.7724538509055160272981674833411;

// Maclaurin evaluation in plain double, adequate for |x| <= 4.5.
inline AiryValue airy_series_double(double x) {
  const double x3 = x * x * x;
  double f = 1.0, tf = 1.0;
  double g = x, tg = x;
  double fp = 0.5 * x * x, tfp = 0.5 * x * x;
  double gp = 1.0, tgp = 1.0;
  for (int k = 0; k < 80; ++k) {
    const double k3 = 3.0 * k;
    tf *= x3 / ((k3 + 2.0) * (k3 + 3.0));
    tg *= x3 / ((k3 + 3.0) * (k3 + 4.0));
    tgp *= x3 / ((k3 + 1.0) * (k3 + 3.0));
    f += tf;
    g += tg;
    gp += tgp;
    // fp terms are indexed from 1: t_{k+1} = t_k * (k+1) x^3 / (k (3k+2)(3k+3))
    if (k >= 1) {
      tfp *= x3 * (k + 1.0) / (k * (k3 + 2.0) * (k3 + 3.0));
      fp += tfp;
    }
    if (std::fabs(tf) < 1e-20 * (std::fabs(f) + 1.0) &&
        std::fabs(tg) < 1e-20 * (std::fabs(g) + 1.0))
      break;
  }
  const double c1h = kAi0Hi, c2h = kNegAip0Hi;
  return {c1h * f - c2h * g + (kAi0Lo * f - kNegAip0Lo * g),
          c1h * fp - c2h * gp + (kAi0Lo * fp - kNegAip0Lo * gp)};
}

// Maclaurin evaluation in compensated double-double for the band where the
// alternating series cancels too heavily for double but the asymptotic
// expansions cannot yet certify 1e-10 relative error (4.5 < |x| < 9).
inline AiryValue airy_series_dd(double x) {
  const dd x3 = dd_mul(two_prod(x, x), x);
  dd f{1.0, 0.0}, tf{1.0, 0.0};
  dd g{x, 0.0}, tg{x, 0.0};
  dd fp = dd_mul(two_prod(x, x), 0.5), tfp = fp;
  dd gp{1.0, 0.0}, tgp{1.0, 0.0};
  double peak = 1.0;
  for (int k = 0; k < 250; ++k) {
    const double k3 = 3.0 * k;
    tf = dd_div(dd_mul(tf, x3), (k3 + 2.0) * (k3 + 3.0));
    tg = dd_div(dd_mul(tg, x3), (k3 + 3.0) * (k3 + 4.0));
    tgp = dd_div(dd_mul(tgp, x3), (k3 + 1.0) * (k3 + 3.0));
    f = dd_add(f, tf);
    g = dd_add(g, tg);
    gp = dd_add(gp, tgp);
    if (k >= 1) {
      tfp = dd_div(dd_mul(tfp, x3), k * (k3 + 2.0) * (k3 + 3.0));
      tfp = dd_mul(tfp, static_cast<double>(k + 1));
      fp = dd_add(fp, tfp);
    }
    const double m = std::max(dd_abs(tf), dd_abs(tg));
    peak = std::max(peak, m);
    if (m < 1e-33 * peak) break;
  }
  const dd c1{kAi0Hi, kAi0Lo};
  const dd c2{kNegAip0Hi, kNegAip0Lo};
  const dd ai = dd_sub(dd_mul(c1, f), dd_mul(c2, g));
  const dd aip = dd_sub(dd_mul(c1, fp), dd_mul(c2, gp));
  return {ai.hi + ai.lo, aip.hi + aip.lo};
}

// Poincare expansions for x >= 9 (monotone side).
inline AiryValue airy_asymptotic_pos(double x) {
  const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
  double su = 1.0, sv = 1.0;
  double u = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
         (216.0 * k * (2.0 * k - 1.0));
    double tu = u / std::pow(zeta, k);
    if (tu > prev) break;  // past the smallest term
    prev = tu;
    double sgn = (k % 2) ? -1.0 : 1.0;
    su += sgn * tu;
    sv += sgn * tu * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    if (tu < 1e-18) break;
  }
  const double lp_ai = -zeta - std::log(kTwoSqrtPi) - 0.25 * std::log(x);
  const double lp_aip = -zeta - std::log(kTwoSqrtPi) + 0.25 * std::log(x);
  double ai = (lp_ai < -745.0) ? 0.0 : std::exp(lp_ai) * su;
  double aip = (lp_aip < -745.0) ? 0.0 : -std::exp(lp_aip) * sv;
  return {ai, aip};
}

// Oscillatory expansions for x <= -9.
inline AiryValue airy_asymptotic_neg(double x) {
  const double t = -x;
  const double zeta = (2.0 / 3.0) * t * std::sqrt(t);
  const double chi = zeta - 0.78539816339744830961566084581988;  // zeta - pi/4
  double se = 1.0, so = 0.0, te = 1.0, to = 0.0;
  double u = 1.0;
  double prev = 1e308;
  for (int j = 1; j < 80; ++j) {
    u *= (6.0 * j - 5.0) * (6.0 * j - 3.0) * (6.0 * j - 1.0) /
         (216.0 * j * (2.0 * j - 1.0));
    const double v = u * (6.0 * j + 1.0) / (1.0 - 6.0 * j);
    const double tj = u / std::pow(zeta, j);
    if (tj > prev) break;
    prev = tj;
    const double vj = v / std::pow(zeta, j);
    if (j % 2 == 1) {
      const double sgn = ((j - 1) / 2 % 2) ? -1.0 : 1.0;
      so += sgn * tj;
      to += sgn * vj;
    } else {
      const double sgn = (j / 2 % 2) ? -1.0 : 1.0;
      se += sgn * tj;
      te += sgn * vj;
    }
    if (tj < 1e-18) break;
  }
  const double root4 = std::pow(t, 0.25);
  const double c = std::cos(chi), s = std::sin(chi);
  double ai = (c * se + s * so) / (kSqrtPi * root4);
  double aip = (root4 / kSqrtPi) * (s * te - c * to);
  return {ai, aip};
}

}  // namespace detail

// Airy function of the first kind with derivative.  Branches: plain-double
// Maclaurin on |x| <= 4.5, compensated Maclaurin on 4.5 < |x| < 9, Poincare
// asymptotics for |x| >= 9.  Magnitudes below 1e-300 flush to exact zero.
inline AiryValue airy(double x) {
  if (!std::isfinite(x)) throw domain_error("airy: argument must be finite");
  if (std::fabs(x) > 200.0) throw domain_error("airy: |x| must be <= 200");
  AiryValue v;
  const double ax = std::fabs(x);
  if (ax <= 4.5)
    v = detail::airy_series_double(x);
  else if (ax < 9.0)
    v = detail::airy_series_dd(x);
  else if (x > 0)
    v = detail::airy_asymptotic_pos(x);
  else
    v = detail::airy_asymptotic_neg(x);
  if (std::fabs(v.ai) < 1e-300) v.ai = 0.0;
  if (std::fabs(v.ai_prime) < 1e-300) v.ai_prime = 0.0;
  return v;
}

namespace detail {

// Start index for Miller's backward recurrence.  order + max(20, ceil(1.5x))
// alone leaves a normalization tail of ~J_{n_start}(x) which for small orders
// at moderate x (e.g. order 1, x = 10) is ~1e-6, far above the 1e-13 target;
// the second operand pushes the start beyond the turning point by enough
// Airy-transition widths that the tail is < 1e-16.
inline long miller_start_index(long order, double x) {
  const long spec_floor =
      order + std::max<long>(20, static_cast<long>(std::ceil(1.5 * x)));
  const long turning = std::max(order, static_cast<long>(std::ceil(x)));
  const long tail_safe =
      turning + 40 + static_cast<long>(16.0 * std::cbrt(std::max(x, 1.0)));
  return std::max(spec_floor, tail_safe);
}

// One backward (Miller) sweep at fixed argument, returning J_0..J_{n_max}.
// The recurrence is run downward with periodic rescaling, then normalized via
// J_0 + 2 sum J_{2k} = 1.
inline std::vector<double> bessel_j_all(long n_max, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw domain_error("bessel_j: x must be finite and >= 0");
  if (n_max < 0) throw domain_error("bessel_j: order must be >= 0");
  std::vector<long double> acc(static_cast<std::size_t>(n_max) + 1, 0.0L);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const long n_start = miller_start_index(n_max, x);
  const long double lx = static_cast<long double>(x);
  long double jp = 0.0L;  // J~_{k+1}
  long double jc = 1.0L;  // J~_k  (arbitrary seed)
  long double norm = 0.0L;
  for (long k = n_start; k >= 0; --k) {
    if (k <= n_max) acc[static_cast<std::size_t>(k)] = jc;
    if (k % 2 == 0) norm += (k == 0) ? jc : 2.0L * jc;
    const long double jm = (2.0L * k / lx) * jc - jp;
    jp = jc;
    jc = jm;
    if (std::fabs(static_cast<double>(jc)) > 1e250) {
      const long double s = 1e-250L;
      jc *= s;
      jp *= s;
      norm *= s;
      for (auto& o : acc) o *= s;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    out[i] = static_cast<double>(acc[i] / norm);
  return out;
}

}  // namespace detail

// Bessel function of the first kind, integer order, by Miller's backward
// recurrence with even-order normalization.
inline double bessel_j(long order, double x) {
  if (!std::isfinite(x)) throw domain_error("bessel_j: argument must be finite");
  if (x < 0.0) throw domain_error("bessel_j: x must be >= 0");
  if (order < 0 || order > 1000000) throw domain_error("bessel_j: order out of range");
  if (x > 1000000.0) throw domain_error("bessel_j: x out of range");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const long n_start = detail::miller_start_index(order, x);
  const long double lx = static_cast<long double>(x);
  long double jp = 0.0L;
  long double jc = 1.0L;
  long double norm = 0.0L;
  long double target = 0.0L;
  bool have_target = false;
  for (long k = n_start; k >= 0; --k) {
    if (k == order) {
      target = jc;
      have_target = true;
    }
    if (k % 2 == 0) norm += (k == 0) ? jc : 2.0L * jc;
    const long double jm = (2.0L * k / lx) * jc - jp;
    jp = jc;
    jc = jm;
    if (std::fabs(static_cast<double>(jc)) > 1e250) {
      const long double s = 1e-250L;
      jc *= s;
      jp *= s;
      norm *= s;
      if (have_target) target *= s;
    }
  }
  return static_cast<double>(target / norm);
}

// Gauss-Legendre rule on [a,b]: Newton iteration on the Legendre recurrence,
// exact for polynomials of degree <= 2m-1.
inline QuadratureRule gauss_legendre(int m, double a, double b) {
  if (m < 1 || m > 512) throw domain_error("gauss_legendre: m must be in [1,512]");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw domain_error("gauss_legendre: need finite a < b");
  std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
  const int half = (m + 1) / 2;
  const double pi = 3.1415926535897932384626433832795;
  for (int i = 0; i < half; ++i) {
    // root i (from the +1 end), initial guess by Chebyshev angle
    double z = std::cos(pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < m; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = m * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    const std::size_t hi = static_cast<std::size_t>(m - 1 - i);
    const std::size_t lo = static_cast<std::size_t>(i);
    x[hi] = z;
    x[lo] = -z;
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    w[hi] = wi;
    w[lo] = wi;
  }
  if (m % 2 == 1) x[static_cast<std::size_t>(m / 2)] = 0.0;
  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = mid + hw * x[static_cast<std::size_t>(i)];
    rule.weights[static_cast<std::size_t>(i)] = hw * w[static_cast<std::size_t>(i)];
  }
  return rule;
}

}  // namespace kpzlab

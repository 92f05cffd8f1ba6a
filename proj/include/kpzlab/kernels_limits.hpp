#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kpzlab/errors.hpp"
#include "kpzlab/special_functions.hpp"

namespace kpzlab {

// Airy kernel; the diagonal uses the limit formula Ai'(x)^2 - x Ai(x)^2,
// applied at the midpoint whenever the quotient would cancel.
inline double airy_kernel(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > 50.0 || std::abs(y) > 50.0)
    throw domain_error("airy_kernel: arguments must be finite with |x|,|y| <= 50");
  if (std::abs(x - y) < 1e-6) {
    const double m = 0.5 * (x + y);
    const AiryValue a = airy(m);
    return a.ai_prime * a.ai_prime - m * a.ai * a.ai;
  }
  const AiryValue ax = airy(x);
  const AiryValue ay = airy(y);
  return (ax.ai * ay.ai_prime - ax.ai_prime * ay.ai) / (x - y);
}

namespace detail {

inline double bessel_j_signed(const std::vector<double>& table, long order) {
  if (order >= 0) return table[static_cast<std::size_t>(order)];
  const double v = table[static_cast<std::size_t>(-order)];
  return (-order) % 2 == 1 ? -v : v;
}

}  // namespace detail

// Discrete Bessel kernel through the series sum_{s>=1} J_{x+s} J_{y+s} (2 sqrt(alpha)),
// which is symmetric and covers the diagonal; truncated once the orders are
// past the Bessel turning point and the terms have collapsed.
inline double discrete_bessel_kernel(double alpha, long x, long y) {
  if (!(alpha > 0.0) || alpha > 1e4)
    throw domain_error("discrete_bessel_kernel: alpha must be in (0, 1e4]");
  if (std::labs(x) > 10000 || std::labs(y) > 10000)
    throw domain_error("discrete_bessel_kernel: |x|, |y| <= 1e4");
  const double t = 2.0 * std::sqrt(alpha);
  const long n_hi = std::max(std::labs(x), std::labs(y)) +
                    static_cast<long>(std::ceil(t)) + 140;
  const std::vector<double> j = detail::bessel_j_all(n_hi, t);
  double acc = 0.0;
  int small_run = 0;
  for (long s = 1;; ++s) {
    const long ox = x + s;
    const long oy = y + s;
    if (std::max(ox, oy) > n_hi)
      throw accuracy_error("discrete_bessel_kernel: tail not certified", std::abs(acc));
    const double term = detail::bessel_j_signed(j, ox) * detail::bessel_j_signed(j, oy);
    acc += term;
    if (std::min(ox, oy) > static_cast<long>(t) + 4 &&
        std::abs(term) < 1e-20 * std::max(1.0, std::abs(acc))) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
  }
  return acc;
}

// Off-diagonal quotient form of the same kernel; used as a verification
// oracle against the series.
inline double discrete_bessel_kernel_quotient(double alpha, long x, long y) {
  if (x == y) throw precondition_error("discrete_bessel_kernel_quotient: needs x != y");
  if (!(alpha > 0.0) || alpha > 1e4)
    throw domain_error("discrete_bessel_kernel_quotient: alpha must be in (0, 1e4]");
  const double t = 2.0 * std::sqrt(alpha);
  const long n_hi = std::max(std::labs(x), std::labs(y)) + 2 +
                    static_cast<long>(std::ceil(t)) + 140;
  const std::vector<double> j = detail::bessel_j_all(n_hi, t);
  const double jx = detail::bessel_j_signed(j, x);
  const double jx1 = detail::bessel_j_signed(j, x + 1);
  const double jy = detail::bessel_j_signed(j, y);
  const double jy1 = detail::bessel_j_signed(j, y + 1);
  return std::sqrt(alpha) * (jx * jy1 - jx1 * jy) / static_cast<double>(x - y);
}

// P[L(alpha) <= n] = det(I - B) on l^2({n, n+1, ...}), truncated to a window
// that is doubled until the determinant settles.
inline double l_alpha_cdf(double alpha, long n) {
  if (!(alpha > 0.0) || alpha > 1e4) throw domain_error("l_alpha_cdf: alpha must be in (0, 1e4]");
  if (n < 0) throw domain_error("l_alpha_cdf: n must be >= 0");
  const double t = 2.0 * std::sqrt(alpha);
  long K = static_cast<long>(std::ceil(4.0 * std::sqrt(alpha))) + 40;
  double prev = -2.0;
  for (int round = 0; round < 4; ++round, K *= 2) {
    const long S = static_cast<long>(std::ceil(t)) + 120;
    const std::vector<double> j = detail::bessel_j_all(n + K + S, t);
    Eigen::MatrixXd V(S, K);
    for (long s = 1; s <= S; ++s)
      for (long i = 0; i < K; ++i)
        V(s - 1, i) = j[static_cast<std::size_t>(n + i + s)];
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(K, K) - V.transpose() * V;
    const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
    if (prev > -1.5 && std::abs(det - prev) < 1e-12) {
      if (!std::isfinite(det) || det < -1e-10 || det > 1.0 + 1e-10)
        throw conditioning_error("l_alpha_cdf: determinant outside [0,1]");
      return std::min(1.0, std::max(0.0, det));
    }
    prev = det;
  }
  throw accuracy_error("l_alpha_cdf: window doubling did not settle", std::abs(prev));
}

namespace detail {

// Nystrom determinant of I - A on [xi, xi+L], symmetrized with the
// square-root quadrature weights.
inline double airy_fredholm_det(double xi, int m, double L) {
  const QuadratureRule gl = gauss_legendre(m, xi, xi + L);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      const double k = airy_kernel(gl.nodes[static_cast<std::size_t>(i)],
                                   gl.nodes[static_cast<std::size_t>(j)]);
      const double v = std::sqrt(gl.weights[static_cast<std::size_t>(i)] *
                                 gl.weights[static_cast<std::size_t>(j)]) *
                       k;
      A(i, j) -= v;
      if (i != j) A(j, i) -= v;
    }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
}

}  // namespace detail

// Tracy-Widom F2 through the Airy-kernel Fredholm determinant.
inline double tw2_fredholm(double xi) {
  if (!std::isfinite(xi) || xi < -10.0 || xi > 6.0)
    throw domain_error("tw2_fredholm: xi must be in [-10, 6]");
  const double base = detail::airy_fredholm_det(xi, 60, 14.0);
  const double refined = detail::airy_fredholm_det(xi, 80, 18.0);
  const double est = std::abs(base - refined);
  if (!std::isfinite(refined) || est > 1e-8)
    throw accuracy_error("tw2_fredholm: quadrature did not converge", est);
  return std::min(1.0, std::max(0.0, refined));
}

struct HastingsMcLeodSolution {
  std::vector<double> x_grid;  // descending, from 8 down to x_min
  std::vector<double> u;
  std::vector<double> u_prime;
};

namespace detail {

// Large-negative expansion sqrt(-x/2)(1 + sum c_k x^{-3k}) of the connecting
// solution; the coefficients come from matching powers in u'' = xu + 2u^3.
// At x = -10 the truncation error is ~1e-10.
inline double hm_left_boundary(double x) {
  const double t = 1.0 / (x * x * x);
  return std::sqrt(-x / 2.0) *
         (1.0 + t * (1.0 / 8.0 +
                     t * (-73.0 / 128.0 +
                          t * (10657.0 / 1024.0 +
                               t * (-13912277.0 / 32768.0 + t * (8045883943.0 / 262144.0))))));
}

struct HmIntegrals {
  std::vector<double> x, u, up, i1, i2;  // descending grid from 8 down to -10
  double tail_i1 = 0.0, tail_i2 = 0.0;   // int_8^inf of u^2 and x u^2 (u = Ai there)
};

// The connecting solution is a separatrix of the ODE, so initial-value
// integration loses it: adjacent double slopes at x = 8 already disagree by
// ~3e-3 at x = -10. Solved instead as a two-point boundary problem with a
// Numerov discretization and Newton iteration; both boundary values are known
// to ~1e-10 and the scheme is O(h^4).
inline HmIntegrals hm_solve(double h) {
  const double left = -10.0, right = 8.0;
  const long n = std::lround((right - left) / h);
  if (!(h > 0.0) || std::abs(static_cast<double>(n) * h - (right - left)) > 1e-9)
    throw precondition_error("hm_solve: step must divide the range [-10, 8]");

  std::vector<double> xg(n + 1), u(n + 1);
  for (long i = 0; i <= n; ++i) xg[i] = left + static_cast<double>(i) * h;
  xg[n] = right;
  const double u_right = airy(right).ai;
  const double u_left = hm_left_boundary(left);
  const double blend_lo = std::sqrt(0.5), blend_hi = airy(1.0).ai;
  for (long i = 0; i <= n; ++i) {
    const double x = xg[i];
    if (x >= 1.0)
      u[i] = airy(x).ai;
    else if (x <= -1.0)
      u[i] = std::sqrt(-x / 2.0);
    else
      u[i] = blend_lo + 0.5 * (x + 1.0) * (blend_hi - blend_lo);
  }
  u[0] = u_left;
  u[n] = u_right;

  const auto f = [](double x, double v) { return x * v + 2.0 * v * v * v; };
  const auto fu = [](double x, double v) { return x + 6.0 * v * v; };
  const double h2 = h * h;
  std::vector<double> sub(n - 1), diag(n - 1), sup(n - 1), rhs(n - 1);
  bool converged = false;
  for (int iter = 0; iter < 60 && !converged; ++iter) {
    for (long i = 1; i < n; ++i) {
      const double fm = f(xg[i - 1], u[i - 1]);
      const double f0 = f(xg[i], u[i]);
      const double fp = f(xg[i + 1], u[i + 1]);
      rhs[i - 1] = -(u[i - 1] - 2.0 * u[i] + u[i + 1] - h2 / 12.0 * (fm + 10.0 * f0 + fp));
      sub[i - 1] = 1.0 - h2 / 12.0 * fu(xg[i - 1], u[i - 1]);
      diag[i - 1] = -2.0 - h2 * 10.0 / 12.0 * fu(xg[i], u[i]);
      sup[i - 1] = 1.0 - h2 / 12.0 * fu(xg[i + 1], u[i + 1]);
    }
    // Thomas solve (boundary corrections vanish: du = 0 at both ends)
    for (long i = 1; i < n - 1; ++i) {
      const double m = sub[i] / diag[i - 1];
      diag[i] -= m * sup[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> du(n - 1);
    du[n - 2] = rhs[n - 2] / diag[n - 2];
    for (long i = n - 3; i >= 0; --i) du[i] = (rhs[i] - sup[i] * du[i + 1]) / diag[i];
    double worst = 0.0;
    for (long i = 1; i < n; ++i) {
      const double step_i = std::clamp(du[i - 1], -0.25, 0.25);
      u[i] += step_i;
      worst = std::max(worst, std::abs(step_i));
      if (!std::isfinite(u[i]) || std::abs(u[i]) > 1e3)
        throw instability_error("hm_solve: Newton iteration left the solution branch");
    }
    converged = worst < 1e-13;
  }
  if (!converged) throw instability_error("hm_solve: Newton iteration did not converge");

  HmIntegrals out;
  out.x.resize(n + 1);
  out.u.resize(n + 1);
  out.up.resize(n + 1);
  for (long k = 0; k <= n; ++k) {
    out.x[k] = right - static_cast<double>(k) * h;
    out.u[k] = u[n - k];
  }
  // 5-point first derivative on the descending grid (spacing -h)
  const auto d5 = [&](long k) {
    return (out.u[k - 2] - 8.0 * out.u[k - 1] + 8.0 * out.u[k + 1] - out.u[k + 2]) / (-12.0 * h);
  };
  for (long k = 2; k <= n - 2; ++k) out.up[k] = d5(k);
  const auto one_sided = [&](long k, long dir) {
    // derivative at k using the five points k, k+dir, ..., k+4 dir
    return (-25.0 * out.u[k] + 48.0 * out.u[k + dir] - 36.0 * out.u[k + 2 * dir] +
            16.0 * out.u[k + 3 * dir] - 3.0 * out.u[k + 4 * dir]) /
           (12.0 * static_cast<double>(dir) * -h);
  };
  out.up[0] = one_sided(0, +1);
  out.up[1] = one_sided(1, +1);
  out.up[n - 1] = one_sided(n - 1, -1);
  out.up[n] = one_sided(n, -1);

  // cumulative integrals from the right boundary, corrected trapezoid
  // (uses the exact integrand derivatives, O(h^4) overall)
  out.i1.assign(n + 1, 0.0);
  out.i2.assign(n + 1, 0.0);
  for (long k = 0; k < n; ++k) {
    const double xa = out.x[k + 1], xb = out.x[k];
    const double ua = out.u[k + 1], ub = out.u[k];
    const double da = out.up[k + 1], db = out.up[k];
    const double f1a = ua * ua, f1b = ub * ub;
    const double g1a = 2.0 * ua * da, g1b = 2.0 * ub * db;
    out.i1[k + 1] = out.i1[k] + 0.5 * h * (f1a + f1b) - h2 / 12.0 * (g1b - g1a);
    const double f2a = xa * ua * ua, f2b = xb * ub * ub;
    const double g2a = ua * ua + 2.0 * xa * ua * da, g2b = ub * ub + 2.0 * xb * ub * db;
    out.i2[k + 1] = out.i2[k] + 0.5 * h * (f2a + f2b) - h2 / 12.0 * (g2b - g2a);
  }

  const QuadratureRule tail = gauss_legendre(40, 8.0, 30.0);
  for (std::size_t i = 0; i < tail.nodes.size(); ++i) {
    const double ai = airy(tail.nodes[i]).ai;
    out.tail_i1 += tail.weights[i] * ai * ai;
    out.tail_i2 += tail.weights[i] * tail.nodes[i] * ai * ai;
  }
  return out;
}

}  // namespace detail

// Connecting Painleve-II solution with u ~ Ai at +infinity, on [x_min, 8].
inline HastingsMcLeodSolution hastings_mcleod(double x_min, double step = 1e-3) {
  if (!(x_min >= -10.0) || x_min >= 8.0)
    throw domain_error("hastings_mcleod: need -10 <= x_min < 8");
  const detail::HmIntegrals sol = detail::hm_solve(step);
  const long k_last = static_cast<long>(std::ceil((8.0 - x_min) / step - 1e-9));
  HastingsMcLeodSolution out;
  out.x_grid.assign(sol.x.begin(), sol.x.begin() + k_last + 1);
  out.u.assign(sol.u.begin(), sol.u.begin() + k_last + 1);
  out.u_prime.assign(sol.up.begin(), sol.up.begin() + k_last + 1);
  return out;
}

// F2 via exp(-int (x-xi) u^2); the stored integrals are interpolated with a
// cubic using their exact derivatives -u^2 and -x u^2.
inline double tw2_painleve(double xi) {
  if (!std::isfinite(xi) || xi < -10.0) throw domain_error("tw2_painleve: xi must be >= -10");
  if (xi >= 8.0) {
    const QuadratureRule gl = gauss_legendre(48, xi, xi + 22.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double ai = airy(gl.nodes[i]).ai;
      integral += gl.weights[i] * (gl.nodes[i] - xi) * ai * ai;
    }
    return std::exp(-integral);
  }
  static const detail::HmIntegrals sol = detail::hm_solve(1e-3);
  const double h = 1e-3;
  const std::size_t k = std::min(
      sol.x.size() - 2, static_cast<std::size_t>(std::max(0.0, std::floor((8.0 - xi) / h))));
  // Hermite cubic on [x_{k+1}, x_k] (descending grid)
  const double x1 = sol.x[k], x0 = sol.x[k + 1];
  const double s = (xi - x0) / (x1 - x0);
  const auto hermite = [&](double f0, double f1, double d0, double d1) {
    const double dx = x1 - x0;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * dx * d0 +
           (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * dx * d1;
  };
  const double du0 = -sol.u[k + 1] * sol.u[k + 1];
  const double du1 = -sol.u[k] * sol.u[k];
  const double i1 = hermite(sol.i1[k + 1], sol.i1[k], du0, du1) + sol.tail_i1;
  const double i2 =
      hermite(sol.i2[k + 1], sol.i2[k], x0 * du0, x1 * du1) + sol.tail_i2;
  return std::exp(-(i2 - xi * i1));
}

struct ScalingConstants {
  double omega = 0.0;
  double sigma = 0.0;
};

// Centering and scaling constants of the rectangular-grid passage time:
// G([gamma N], N) ~ omega N + sigma N^{1/3} * (edge fluctuation).
inline ScalingConstants thm32_scaling(double gamma, double q) {
  if (!(gamma >= 1.0)) throw domain_error("thm32_scaling: gamma must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw domain_error("thm32_scaling: q must be in (0,1)");
  const double sq = std::sqrt(q * gamma);
  ScalingConstants c;
  c.omega = (1.0 + sq) * (1.0 + sq) / (1.0 - q) - 1.0;
  c.sigma = std::pow(q / gamma, 1.0 / 6.0) *
            std::pow(std::sqrt(gamma) + std::sqrt(q), 2.0 / 3.0) *
            std::pow(1.0 + sq, 2.0 / 3.0) / (1.0 - q);
  return c;
}

struct Tw2Table {
  std::vector<double> xi_grid;
  std::vector<double> f2_values;
  std::string method;
  double tolerance = 0.0;
  bool clamped = false;  // grid was clipped to the method's numeric range
};

inline Tw2Table build_tw2_table(double xi_min, double xi_max, double step,
                                const std::string& method) {
  if (!(step > 0.0) || !(xi_min <= xi_max))
    throw domain_error("build_tw2_table: need step > 0 and xi_min <= xi_max");
  if (method != "fredholm" && method != "painleve")
    throw domain_error("build_tw2_table: method must be fredholm or painleve");
  Tw2Table t;
  t.method = method;
  t.tolerance = 1e-8;
  double lo = xi_min, hi = xi_max;
  if (lo < -10.0) {
    lo = -10.0;
    t.clamped = true;
  }
  if (method == "fredholm" && hi > 6.0) {
    hi = 6.0;
    t.clamped = true;
  }
  for (double xi = lo; xi <= hi + 1e-12; xi += step) {
    t.xi_grid.push_back(xi);
    t.f2_values.push_back(method == "fredholm" ? tw2_fredholm(xi) : tw2_painleve(xi));
  }
  return t;
}

// Piecewise-linear CDF read off a table; constant beyond the grid ends.
inline std::function<double(double)> tw2_table_cdf(const Tw2Table& t) {
  if (t.xi_grid.size() < 2) throw precondition_error("tw2_table_cdf: table too small");
  return [grid = t.xi_grid, vals = t.f2_values](double x) {
    if (x <= grid.front()) return vals.front();
    if (x >= grid.back()) return vals.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - grid.begin());
    const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return vals[j - 1] * (1.0 - w) + vals[j] * w;
  };
}

}  // namespace kpzlab

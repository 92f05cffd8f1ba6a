#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/combinatorics.hpp"
#include "kpzlab/errors.hpp"
#include "kpzlab/rational.hpp"
#include "kpzlab/rng.hpp"

namespace kpzlab {

// Laurent coefficients of a symbol on the unit circle.  Exact symbols carry
// rationals and complete support, so an absent index is an exact zero.
// Numeric symbols are truncated at the computed window; an index outside it
// is unknown, not zero, and consumers must refuse to invent it.
struct FourierSymbol {
  std::map<long, Rational> exact_coeffs;
  std::map<long, std::complex<double>> numeric_coeffs;
  bool exact = false;
  bool support_complete = true;
  bool real_on_circle = false;
  // relative aliasing certificate from the numeric constructor: the largest
  // coefficient movement under one grid doubling, scaled by the largest
  // coefficient magnitude (floored at 1 so small symbols read absolutely)
  double aliasing_error = 0.0;
};

// A symbol that is real-valued on the circle has conjugate-symmetric
// coefficients; enforced only when the flag is set.
inline void validate(const FourierSymbol& s) {
  if (!s.real_on_circle) return;
  if (s.exact) {
    for (const auto& [k, v] : s.exact_coeffs) {
      auto it = s.exact_coeffs.find(-k);
      const Rational mirror = (it == s.exact_coeffs.end()) ? Rational(0) : it->second;
      if (mirror != v)
        throw precondition_error("fourier symbol: flagged real but coefficients asymmetric");
    }
    return;
  }
  double scale = 1.0;
  for (const auto& [k, v] : s.numeric_coeffs) scale = std::max(scale, std::abs(v));
  for (const auto& [k, v] : s.numeric_coeffs) {
    auto it = s.numeric_coeffs.find(-k);
    const std::complex<double> mirror =
        (it == s.numeric_coeffs.end()) ? std::complex<double>(0.0, 0.0) : it->second;
    if (std::abs(mirror - std::conj(v)) > 1e-12 * scale)
      throw precondition_error("fourier symbol: flagged real but coefficients asymmetric");
  }
}

// Trapezoidal Fourier coefficients of a real periodic function on a uniform
// grid, spectrally accurate for analytic symbols.  The grid is doubled once
// and the refined values are returned; the movement under that doubling is
// attached as the aliasing certificate.
inline FourierSymbol fourier_coeffs_numeric(const std::function<double(double)>& f, long K,
                                            long grid) {
  if (K < 0) throw domain_error("fourier_coeffs_numeric: K must be >= 0");
  if (grid < 1 || (grid & (grid - 1)) != 0)
    throw precondition_error("fourier_coeffs_numeric: grid must be a power of two");
  if (grid < 4 * K)
    throw precondition_error("fourier_coeffs_numeric: grid must be at least 4K");
  const double two_pi = 6.283185307179586476925286766559;
  const long fine = 2 * grid;
  std::vector<double> fv(static_cast<std::size_t>(fine));
  for (long m = 0; m < fine; ++m) {
    const double v = f(two_pi * static_cast<double>(m) / static_cast<double>(fine));
    if (!std::isfinite(v)) throw domain_error("fourier_coeffs_numeric: non-finite sample");
    fv[static_cast<std::size_t>(m)] = v;
  }
  // the coarse grid is the even-index subset of the fine one, so both passes
  // see identical function values
  auto pass = [&](long g, long stride) {
    std::map<long, std::complex<double>> c;
    for (long k = -K; k <= K; ++k) {
      std::complex<double> acc(0.0, 0.0);
      for (long m = 0; m < g; ++m) {
        long r = (k * m) % g;
        if (r < 0) r += g;
        acc += fv[static_cast<std::size_t>(m * stride)] *
               std::polar(1.0, -two_pi * static_cast<double>(r) / static_cast<double>(g));
      }
      c[k] = acc / static_cast<double>(g);
    }
    return c;
  };
  const auto coarse = pass(grid, 2);
  auto refined = pass(fine, 1);
  double scale = 1.0;
  for (const auto& [k, v] : refined) scale = std::max(scale, std::abs(v));
  double moved = 0.0;
  for (const auto& [k, v] : refined) moved = std::max(moved, std::abs(v - coarse.at(k)));
  FourierSymbol s;
  s.numeric_coeffs = std::move(refined);
  s.exact = false;
  s.support_complete = false;
  s.real_on_circle = true;
  s.aliasing_error = moved / scale;
  validate(s);
  return s;
}

// Exact Laurent coefficients of prod (1 + a_l / z) * prod (1 + b_l z) by
// elementary-symmetric convolution: coefficient of z^k is
// sum_j e_j(a) e_{j+k}(b), supported on [-|a|, |b|].
inline FourierSymbol fourier_coeffs_exact(const std::vector<Rational>& a,
                                          const std::vector<Rational>& b) {
  if (a.size() > 8 || b.size() > 8)
    throw resource_error("fourier_coeffs_exact: factor lists longer than 8");
  FourierSymbol s;
  s.exact = true;
  s.support_complete = true;
  const long alen = static_cast<long>(a.size());
  const long blen = static_cast<long>(b.size());
  for (long k = -alen; k <= blen; ++k) {
    Rational c(0);
    for (long j = 0; j <= alen; ++j) c += elementary_symmetric(a, j) * elementary_symmetric(b, j + k);
    s.exact_coeffs[k] = c;
  }
  bool symmetric = true;
  for (const auto& [k, v] : s.exact_coeffs) {
    auto it = s.exact_coeffs.find(-k);
    const Rational mirror = (it == s.exact_coeffs.end()) ? Rational(0) : it->second;
    if (mirror != v) symmetric = false;
  }
  s.real_on_circle = symmetric;
  validate(s);
  return s;
}

// Integer Laurent coefficients of (1 - 1/z)^a (1 - z)^b by signed binomial
// convolution: coefficient of z^k is (-1)^k sum_j C(a,j) C(b,j+k).
inline FourierSymbol macmahon_symbol(long a, long b) {
  if (a < 0 || b < 0) throw domain_error("macmahon_symbol: need a, b >= 0");
  if (a > 4 || b > 4) throw resource_error("macmahon_symbol: exponents above 4");
  FourierSymbol s;
  s.exact = true;
  s.support_complete = true;
  for (long k = -a; k <= b; ++k) {
    Integer acc(0);
    for (long j = 0; j <= a; ++j) {
      if (j + k < 0 || j + k > b) continue;
      acc += binomial(static_cast<unsigned long>(a), static_cast<unsigned long>(j)) *
             binomial(static_cast<unsigned long>(b), static_cast<unsigned long>(j + k));
    }
    if (k % 2 != 0) acc = -acc;
    s.exact_coeffs[k] = Rational(acc);
  }
  s.real_on_circle = (a == b);
  validate(s);
  return s;
}

// det(f_{i-j})_{1<=i,j<=n} over the rationals; order 0 gives 1.
inline Rational toeplitz_det_exact(const FourierSymbol& s, long n) {
  if (!s.exact) throw precondition_error("toeplitz_det_exact: symbol is not exact");
  if (n < 0) throw domain_error("toeplitz_det_exact: order must be >= 0");
  if (n == 0) return Rational(1);
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(n),
                                       std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      auto it = s.exact_coeffs.find(i - j);
      if (it != s.exact_coeffs.end())
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = it->second;
    }
  return exact_det(std::move(m));
}

// Floating Toeplitz determinant by pivoted elimination.  Exact symbols are
// routed through the rational determinant; numeric ones must carry every
// index |i-j| <= n-1 in their window.  The result must come out real (all
// symbols in scope are real on the circle, giving Hermitian matrices).
inline double toeplitz_det(const FourierSymbol& s, long n) {
  if (n < 0) throw domain_error("toeplitz_det: order must be >= 0");
  if (s.exact) return to_double(toeplitz_det_exact(s, n));
  if (n == 0) return 1.0;
  Eigen::MatrixXcd t(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      auto it = s.numeric_coeffs.find(i - j);
      if (it == s.numeric_coeffs.end()) {
        if (!s.support_complete)
          throw precondition_error("toeplitz_det: coefficient window smaller than the order");
        t(i, j) = std::complex<double>(0.0, 0.0);
        continue;
      }
      t(i, j) = it->second;
    }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t);
  const std::complex<double> det = lu.determinant();
  // Pivoted elimination loses about eps*kappa_1(T) of relative accuracy, and the
  // estimate underreports by at most ~25x in calibration, so refusing above 2e-8
  // certifies the returned value to roughly 1e-6 or better.  A vanishing or
  // non-finite determinant cannot be certified at all in doubles.
  double cond_est = std::numeric_limits<double>::infinity();
  if (std::abs(det) > 0.0 && std::isfinite(std::abs(det))) {
    const double norm_a = t.cwiseAbs().colwise().sum().maxCoeff();
    const double norm_inv = lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
    cond_est = std::numeric_limits<double>::epsilon() * norm_a * norm_inv;
  }
  if (!(cond_est <= 2e-8)) {
    char est[32];
    std::snprintf(est, sizeof(est), "%.3g", cond_est);
    throw conditioning_error(
        "toeplitz_det: matrix too ill conditioned to certify the determinant "
        "in double precision (eps*kappa estimate " + std::string(est) + ")");
  }
  if (std::abs(det.imag()) > 1e-8 * std::max(1.0, std::abs(det.real())))
    throw accuracy_error("toeplitz_det: determinant has a material imaginary part",
                         std::abs(det.imag()));
  return det.real();
}

// Both sides of the weighted symmetrization identity on a finite carrier:
// (1/n!) sum over tuples of prod w(x_i) det(phi_i(x_j)) det(psi_i(x_j))
// against the determinant of the weighted pairing matrix.  Functions are
// given as value tables along the carrier.
inline std::pair<Rational, Rational> heine_check(
    const std::vector<Rational>& weight, const std::vector<std::vector<Rational>>& phi,
    const std::vector<std::vector<Rational>>& psi) {
  const std::size_t carrier = weight.size();
  if (carrier == 0 || carrier > 12)
    throw resource_error("heine_check: carrier size must be in 1..12");
  const std::size_t n = phi.size();
  if (psi.size() != n) throw precondition_error("heine_check: function counts differ");
  if (n > 4) throw resource_error("heine_check: more than 4 functions");
  for (const auto& t : phi)
    if (t.size() != carrier) throw precondition_error("heine_check: table length mismatch");
  for (const auto& t : psi)
    if (t.size() != carrier) throw precondition_error("heine_check: table length mismatch");

  std::vector<std::vector<Rational>> gram(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t x = 0; x < carrier; ++x) gram[i][j] += weight[x] * phi[i][x] * psi[j][x];
  const Rational rhs = exact_det(std::move(gram));

  Rational lhs(0);
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    // tuples with a repeated point contribute a vanishing determinant
    bool distinct = true;
    for (std::size_t u = 0; u < n && distinct; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (idx[u] == idx[v]) {
          distinct = false;
          break;
        }
    if (distinct) {
      Rational w(1);
      for (std::size_t j = 0; j < n; ++j) w *= weight[idx[j]];
      std::vector<std::vector<Rational>> mp(n, std::vector<Rational>(n));
      std::vector<std::vector<Rational>> mq(n, std::vector<Rational>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          mp[i][j] = phi[i][idx[j]];
          mq[i][j] = psi[i][idx[j]];
        }
      lhs += w * exact_det(std::move(mp)) * exact_det(std::move(mq));
    }
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == carrier) idx[pos++] = 0;
    if (pos == n) break;
  }
  lhs /= Rational(factorial(static_cast<unsigned long>(n)));
  return {lhs, rhs};
}

// Toeplitz determinant of the two-parameter generating symbol against the
// bounded-first-row Schur sum; the two sides must agree exactly.
inline std::pair<Rational, Rational> gessel_check(long n, const std::vector<Rational>& a,
                                                  const std::vector<Rational>& b) {
  if (n < 0) throw domain_error("gessel_check: n must be >= 0");
  if (n > 5 || a.size() > 3 || b.size() > 3)
    throw resource_error("gessel_check: enumeration bounds exceeded");
  for (const auto& v : a)
    if (v < 0 || v >= 1) throw domain_error("gessel_check: parameters must lie in [0,1)");
  for (const auto& v : b)
    if (v < 0 || v >= 1) throw domain_error("gessel_check: parameters must lie in [0,1)");
  return {toeplitz_det_exact(fourier_coeffs_exact(a, b), n), gessel_rhs(n, a, b)};
}

// Toeplitz determinant of the signed-binomial symbol against the boxed
// plane-partition product with box height n.  The determinant equals the box
// count directly, with no parity factor in either exponent.
inline std::pair<Rational, Rational> macmahon_toeplitz_check(long a, long b, long n) {
  if (a < 0 || b < 0 || n < 0)
    throw domain_error("macmahon_toeplitz_check: need a, b, n >= 0");
  if (a > 4 || b > 4 || n > 5)
    throw resource_error("macmahon_toeplitz_check: bounds exceeded");
  return {toeplitz_det_exact(macmahon_symbol(a, b), n), macmahon_product(a, b, n)};
}

// e^{-alpha} times the Toeplitz determinant of e^{2 sqrt(alpha) cos theta},
// which is the probability that a rate-alpha Poissonized longest increasing
// subsequence stays at or below n.
inline double poissonized_toeplitz(double alpha, long n) {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || alpha > 100.0)
    throw domain_error("poissonized_toeplitz: alpha must lie in (0, 100]");
  if (n < 0 || n > 40) throw domain_error("poissonized_toeplitz: order must lie in 0..40");
  if (n == 0) return std::exp(-alpha);
  const double t = 2.0 * std::sqrt(alpha);
  const FourierSymbol s =
      fourier_coeffs_numeric([t](double th) { return std::exp(t * std::cos(th)); }, n - 1, 4096);
  if (s.aliasing_error > 1e-12)
    throw accuracy_error("poissonized_toeplitz: aliasing certificate failed", s.aliasing_error);
  return std::exp(-alpha) * toeplitz_det(s, n);
}

// prod_{j=0}^{n-1} j! (j+2k)! / ((j+k)!)^2, an integer for every n, k.
inline Rational cue_moment_exact(long n, long k) {
  if (n < 0 || k < 0) throw domain_error("cue_moment_exact: need n, k >= 0");
  if (n > 1000 || k > 30) throw resource_error("cue_moment_exact: bounds exceeded");
  Rational r(1);
  for (long j = 0; j < n; ++j) {
    Rational term(factorial(static_cast<unsigned long>(j)) *
                      factorial(static_cast<unsigned long>(j + 2 * k)),
                  factorial(static_cast<unsigned long>(j + k)) *
                      factorial(static_cast<unsigned long>(j + k)));
    term.canonicalize();
    r *= term;
  }
  if (r.get_den() != 1)
    throw accuracy_error("cue_moment_exact: moment failed to be an integer", 0.0);
  return r;
}

struct UnitarySample {
  Eigen::MatrixXcd matrix;
};

// Haar-distributed unitary: complex Ginibre matrix, QR orthonormalization,
// then each column is rotated so the matching triangular diagonal entry is
// real positive (plain QR alone is not Haar).
inline UnitarySample haar_unitary(long n, SeededStream& rng) {
  if (n < 1) throw domain_error("haar_unitary: n must be >= 1");
  if (n > 64) throw resource_error("haar_unitary: n above 64");
  const double inv_sqrt2 = 0.70710678118654752440;
  Eigen::MatrixXcd g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = std::complex<double>(re * inv_sqrt2, im * inv_sqrt2);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd u = qr.householderQ();
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  for (long j = 0; j < n; ++j) {
    const std::complex<double> d = packed(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) u.col(j) *= d / mag;
  }
  const double residual =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > 1e-12)
    throw accuracy_error("haar_unitary: unitarity residual above tolerance", residual);
  const std::complex<double> det = Eigen::PartialPivLU<Eigen::MatrixXcd>(u).determinant();
  const double det_defect = std::fabs(std::abs(det) - 1.0);
  if (det_defect > 1e-12)
    throw accuracy_error("haar_unitary: determinant modulus away from 1", det_defect);
  return {std::move(u)};
}

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo moment of |det(I - U e^{-i theta})|^{2k} over Haar unitaries.
// Sample s draws from stream_id + s of the caller's seed, so results are
// independent of batching order.
inline McEstimate cue_moment_mc(long n, long k, double theta, long samples,
                                const SeededStream& rng) {
  if (n < 1) throw domain_error("cue_moment_mc: n must be >= 1");
  if (n > 64) throw resource_error("cue_moment_mc: n above 64");
  if (k < 0) throw domain_error("cue_moment_mc: k must be >= 0");
  if (k > 4) throw resource_error("cue_moment_mc: k above 4");
  if (!std::isfinite(theta)) throw domain_error("cue_moment_mc: theta must be finite");
  if (samples < 2) throw precondition_error("cue_moment_mc: need at least 2 samples");
  if (k == 0) return {1.0, 0.0};  // the integrand is identically 1
  const std::complex<double> rot = std::polar(1.0, -theta);
  double sum = 0.0;
  double sumsq = 0.0;
  for (long s = 0; s < samples; ++s) {
    SeededStream draw(rng.seed(), rng.stream_id() + static_cast<std::uint64_t>(s));
    const UnitarySample u = haar_unitary(n, draw);
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - rot * u.matrix;
    const std::complex<double> det = Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
    const double base = std::norm(det);
    double v = 1.0;
    for (long p = 0; p < k; ++p) v *= base;
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(
      0.0, (sumsq - static_cast<double>(samples) * mean * mean) / static_cast<double>(samples - 1));
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

struct WeylComparison {
  double mc = 0.0;
  double mc_std_error = 0.0;
  double det_side = 0.0;
};

// Haar average of e^{tr g(U)} against the Toeplitz determinant of e^g.
// Traces of U^k come from explicit matrix powers; unitarity supplies the
// negative harmonics as conjugates, so no eigensolver is involved.
inline WeylComparison weyl_mc_check(const std::map<long, std::complex<double>>& g_coeffs,
                                    long n, long samples, const SeededStream& rng) {
  if (n < 1) throw domain_error("weyl_mc_check: n must be >= 1");
  if (n > 16) throw resource_error("weyl_mc_check: n above 16");
  if (samples < 2) throw precondition_error("weyl_mc_check: need at least 2 samples");
  long kmax = 0;
  for (const auto& [k, v] : g_coeffs) {
    if (k > 3 || k < -3) throw resource_error("weyl_mc_check: harmonics above |k| = 3");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw domain_error("weyl_mc_check: non-finite coefficient");
    kmax = std::max(kmax, k >= 0 ? k : -k);
  }
  auto gc = [&](long k) -> std::complex<double> {
    auto it = g_coeffs.find(k);
    return it == g_coeffs.end() ? std::complex<double>(0.0, 0.0) : it->second;
  };
  // e^{tr g(U)} is compared as a real quantity, so g itself must be real on
  // the circle: conjugate-symmetric coefficients
  for (long k = 0; k <= kmax; ++k)
    if (std::abs(gc(-k) - std::conj(gc(k))) > 1e-12)
      throw domain_error("weyl_mc_check: coefficients are not conjugate-symmetric");

  double sum = 0.0;
  double sumsq = 0.0;
  for (long s = 0; s < samples; ++s) {
    SeededStream draw(rng.seed(), rng.stream_id() + static_cast<std::uint64_t>(s));
    const UnitarySample u = haar_unitary(n, draw);
    std::complex<double> tr_g = gc(0) * static_cast<double>(n);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
    for (long k = 1; k <= kmax; ++k) {
      p = p * u.matrix;
      const std::complex<double> tau = p.trace();
      tr_g += gc(k) * tau + gc(-k) * std::conj(tau);
    }
    const double v = std::exp(tr_g.real());
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(
      0.0, (sumsq - static_cast<double>(samples) * mean * mean) / static_cast<double>(samples - 1));

  auto g_at = [&](double th) {
    double acc = gc(0).real();
    for (long k = 1; k <= kmax; ++k)
      acc += 2.0 * (gc(k) * std::polar(1.0, static_cast<double>(k) * th)).real();
    return acc;
  };
  const FourierSymbol symbol = fourier_coeffs_numeric(
      [&](double th) { return std::exp(g_at(th)); }, std::max<long>(n - 1, 0), 4096);
  if (symbol.aliasing_error > 1e-12)
    throw accuracy_error("weyl_mc_check: aliasing certificate failed", symbol.aliasing_error);
  return {mean, std::sqrt(var / static_cast<double>(samples)), toeplitz_det(symbol, n)};
}

}  // namespace kpzlab

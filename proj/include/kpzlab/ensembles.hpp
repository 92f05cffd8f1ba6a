#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "kpzlab/errors.hpp"
#include "kpzlab/special_functions.hpp"

namespace kpzlab {

// Positive weight on {0, 1, ..., M_cut}; when the weight is a truncation of a
// law on all of N, tail_bound records the (relative) mass cut off.
struct DiscreteWeight {
  std::vector<double> values;
  double tail_bound = 0.0;

  long max_point() const { return static_cast<long>(values.size()) - 1; }
  double at(long x) const { return values[static_cast<std::size_t>(x)]; }
};

inline void validate(const DiscreteWeight& w) {
  if (w.values.empty()) throw precondition_error("DiscreteWeight: empty support");
  for (double v : w.values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw precondition_error("DiscreteWeight: weight values must be positive and finite");
}

// Truncate a weight on N at the smallest cutoff whose estimated relative tail
// mass is below tol.  The estimate is geometric, driven by the observed ratio
// w(x+1)/w(x); certification requires the ratio to have dropped below 1.
inline DiscreteWeight truncate_weight(const std::function<double(long)>& w, double tol = 1e-14,
                                      long hard_cap = 200000) {
  DiscreteWeight out;
  double total = 0.0;
  double prev = -1.0;
  for (long x = 0; x <= hard_cap; ++x) {
    const double v = w(x);
    if (!(v > 0.0) || !std::isfinite(v))
      throw domain_error("truncate_weight: weight must be positive and finite on N");
    out.values.push_back(v);
    total += v;
    if (prev > 0.0) {
      const double r = v / prev;
      if (r < 1.0) {
        const double tail = v * r / (1.0 - r);
        if (tail < tol * total) {
          out.tail_bound = tail / total;
          return out;
        }
      }
    }
    prev = v;
  }
  throw resource_error("truncate_weight: no certified cutoff within the hard cap");
}

// Three-term recurrence data of the orthonormal polynomials of a weight:
//   sqrt(beta_{k+1}) p_{k+1}(x) = (x - alpha_k) p_k(x) - sqrt(beta_k) p_{k-1}(x)
// with p_0 = 1/sqrt(beta_0), beta_0 the total mass.  kappa_ratio_k is the
// leading-coefficient ratio kappa_{k-1}/kappa_k = sqrt(beta_k), and norm_k the
// squared norm of the monic polynomial pi_k.
struct OrthoPolySystem {
  long K = 0;
  std::vector<double> alpha;        // alpha_0..alpha_K
  std::vector<double> beta;         // beta_0..beta_K
  std::vector<double> norm;         // ||pi_k||^2, k = 0..K
  std::vector<double> kappa_ratio;  // kappa_{k-1}/kappa_k, entry 0 unused (0)
};

// Discrete Stieltjes procedure carried on the orthonormal vectors, so the
// iterates stay O(1) and the inner products stay well scaled.
inline OrthoPolySystem stieltjes_system(const DiscreteWeight& weight, long K) {
  validate(weight);
  const long n = static_cast<long>(weight.values.size());
  if (K < 0) throw precondition_error("stieltjes_system: K must be >= 0");
  if (K > n - 1) throw precondition_error("stieltjes_system: K exceeds support dimension");

  OrthoPolySystem sys;
  sys.K = K;
  const double beta0 = [&] {
    double s = 0.0;
    for (double v : weight.values) s += v;
    return s;
  }();
  std::vector<double> pk(static_cast<std::size_t>(n), 1.0 / std::sqrt(beta0));
  std::vector<double> pkm1(static_cast<std::size_t>(n), 0.0);
  sys.beta.push_back(beta0);
  sys.norm.push_back(beta0);
  sys.kappa_ratio.push_back(0.0);

  double running_norm = beta0;
  for (long k = 0; k <= K; ++k) {
    double a = 0.0;
    for (long x = 0; x < n; ++x)
      a += static_cast<double>(x) * pk[static_cast<std::size_t>(x)] *
           pk[static_cast<std::size_t>(x)] * weight.at(x);
    if (!std::isfinite(a)) throw conditioning_error("stieltjes_system: indefinite moments");
    sys.alpha.push_back(a);
    if (k == K) break;

    const double sb = std::sqrt(sys.beta.back());
    std::vector<double> r(static_cast<std::size_t>(n));
    double b_next = 0.0;
    for (long x = 0; x < n; ++x) {
      const double v = (static_cast<double>(x) - a) * pk[static_cast<std::size_t>(x)] -
                       (k > 0 ? sb * pkm1[static_cast<std::size_t>(x)] : 0.0);
      r[static_cast<std::size_t>(x)] = v;
      b_next += v * v * weight.at(x);
    }
    if (!(b_next > 0.0) || !std::isfinite(b_next))
      throw conditioning_error("stieltjes_system: recurrence lost positivity");
    const double sb_next = std::sqrt(b_next);
    for (long x = 0; x < n; ++x) r[static_cast<std::size_t>(x)] /= sb_next;
    pkm1 = pk;
    pk = std::move(r);
    sys.beta.push_back(b_next);
    running_norm *= b_next;
    sys.norm.push_back(running_norm);
    sys.kappa_ratio.push_back(sb_next);
  }
  return sys;
}

// Orthonormal values p_0(x)..p_kmax(x) by the stored recurrence.
inline std::vector<double> orthonormal_values(const OrthoPolySystem& sys, long kmax, double x) {
  if (kmax < 0 || kmax > sys.K)
    throw precondition_error("orthonormal_values: k out of the constructed range");
  std::vector<double> p(static_cast<std::size_t>(kmax) + 1);
  p[0] = 1.0 / std::sqrt(sys.beta[0]);
  double prev = 0.0;
  for (long k = 0; k < kmax; ++k) {
    const double next = ((x - sys.alpha[static_cast<std::size_t>(k)]) * p[static_cast<std::size_t>(k)] -
                         std::sqrt(sys.beta[static_cast<std::size_t>(k)]) * prev) /
                        std::sqrt(sys.beta[static_cast<std::size_t>(k) + 1]);
    prev = p[static_cast<std::size_t>(k)];
    p[static_cast<std::size_t>(k) + 1] = next;
  }
  return p;
}

// Christoffel-Darboux kernel with the weight folded in symmetrically.  The
// diagonal uses the CD sum, which is the algebraic limit of the quotient.
inline double cd_kernel(const OrthoPolySystem& sys, const DiscreteWeight& weight, long N, long x,
                        long y) {
  validate(weight);
  if (N < 1 || N > sys.K) throw precondition_error("cd_kernel: need 1 <= N <= K");
  if (x < 0 || x > weight.max_point() || y < 0 || y > weight.max_point())
    throw domain_error("cd_kernel: point off support");
  const double sw = std::sqrt(weight.at(x) * weight.at(y));
  if (x == y) {
    const auto p = orthonormal_values(sys, N - 1, static_cast<double>(x));
    double s = 0.0;
    for (double v : p) s += v * v;
    return s * sw;
  }
  const auto px = orthonormal_values(sys, N, static_cast<double>(x));
  const auto py = orthonormal_values(sys, N, static_cast<double>(y));
  const double ratio = sys.kappa_ratio[static_cast<std::size_t>(N)];
  return ratio *
         (px[static_cast<std::size_t>(N)] * py[static_cast<std::size_t>(N) - 1] -
          px[static_cast<std::size_t>(N) - 1] * py[static_cast<std::size_t>(N)]) /
         (static_cast<double>(x) - static_cast<double>(y)) * sw;
}

struct KernelMatrix {
  std::vector<long> domain;
  Eigen::MatrixXd entries;
};

// Full-support kernel matrix via the CD sum (rank-N projection form); needs
// only p_0..p_{N-1}, so it exists even when N equals the support size.
inline KernelMatrix kernel_matrix(const OrthoPolySystem& sys, const DiscreteWeight& weight,
                                  long N) {
  validate(weight);
  if (N < 1 || N - 1 > sys.K) throw precondition_error("kernel_matrix: need 1 <= N <= K+1");
  const long n = weight.max_point() + 1;
  Eigen::MatrixXd P(n, N);
  for (long x = 0; x < n; ++x) {
    const auto p = orthonormal_values(sys, N - 1, static_cast<double>(x));
    const double sw = std::sqrt(weight.at(x));
    for (long k = 0; k < N; ++k) P(x, k) = p[static_cast<std::size_t>(k)] * sw;
  }
  KernelMatrix km;
  km.domain.resize(static_cast<std::size_t>(n));
  for (long x = 0; x < n; ++x) km.domain[static_cast<std::size_t>(x)] = x;
  km.entries = P * P.transpose();
  return km;
}

// m-point correlation as the m x m determinant of kernel values.
inline double correlation_fn(const KernelMatrix& kernel, const std::vector<long>& points) {
  if (points.empty()) throw precondition_error("correlation_fn: need at least one point");
  std::vector<long> idx;
  for (long p : points) {
    const auto it = std::lower_bound(kernel.domain.begin(), kernel.domain.end(), p);
    if (it == kernel.domain.end() || *it != p)
      throw domain_error("correlation_fn: point off the kernel domain");
    idx.push_back(static_cast<long>(it - kernel.domain.begin()));
  }
  std::vector<long> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw precondition_error("correlation_fn: repeated points");
  const long m = static_cast<long>(idx.size());
  Eigen::MatrixXd sub(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) sub(i, j) = kernel.entries(idx[static_cast<std::size_t>(i)],
                                                            idx[static_cast<std::size_t>(j)]);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(sub).determinant();
}

namespace detail {

// Squared Vandermonde times weights, the unnormalized N-point density.
inline double ensemble_density(const std::vector<long>& x, const DiscreteWeight& w) {
  double d = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double diff = static_cast<double>(x[i] - x[j]);
      d *= diff * diff;
    }
  for (long xi : x) d *= w.at(xi);
  return d;
}

template <typename F>
inline void for_each_tuple(long slots, long lo, long hi, std::vector<long>& tuple, F&& f) {
  if (slots == 0) {
    f(tuple);
    return;
  }
  for (long v = lo; v <= hi; ++v) {
    tuple.push_back(v);
    for_each_tuple(slots - 1, lo, hi, tuple, f);
    tuple.pop_back();
  }
}

}  // namespace detail

// Direct-summation marginal of the N-point ensemble; an oracle for
// correlation_fn, kept deliberately small.
inline double brute_correlation(const DiscreteWeight& weight, long N,
                                const std::vector<long>& points) {
  validate(weight);
  const long n = weight.max_point() + 1;
  if (n > 30 || N > 3) throw resource_error("brute_correlation: support or N too large");
  if (N < 1) throw precondition_error("brute_correlation: need N >= 1");
  const long m = static_cast<long>(points.size());
  if (m < 1 || m > N) throw precondition_error("brute_correlation: need 1 <= m <= N");
  for (long p : points)
    if (p < 0 || p >= n) throw domain_error("brute_correlation: point off support");
  std::vector<long> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw precondition_error("brute_correlation: repeated points");

  double z = 0.0;
  std::vector<long> tuple;
  detail::for_each_tuple(N, 0, n - 1, tuple,
                         [&](const std::vector<long>& t) { z += detail::ensemble_density(t, weight); });

  double marginal = 0.0;
  std::vector<long> free_part;
  detail::for_each_tuple(N - m, 0, n - 1, free_part, [&](const std::vector<long>& t) {
    std::vector<long> full = points;
    full.insert(full.end(), t.begin(), t.end());
    marginal += detail::ensemble_density(full, weight);
  });

  double perms = 1.0;  // N!/(N-m)!
  for (long i = 0; i < m; ++i) perms *= static_cast<double>(N - i);
  return perms * marginal / z;
}

// Both sides of the expectation identity E prod_j (1 + f(x_j)) = det(I + fK).
inline std::pair<double, double> fredholm_expectation_check(
    const DiscreteWeight& weight, long N, const std::function<double(long)>& f) {
  validate(weight);
  const long n = weight.max_point() + 1;
  if (n > 30 || N > 4) throw resource_error("fredholm_expectation_check: support or N too large");
  if (N < 1 || N > n) throw precondition_error("fredholm_expectation_check: need 1 <= N <= support size");

  double z = 0.0;
  double expectation = 0.0;
  std::vector<long> tuple;
  detail::for_each_tuple(N, 0, n - 1, tuple, [&](const std::vector<long>& t) {
    const double d = detail::ensemble_density(t, weight);
    z += d;
    double prod = 1.0;
    for (long x : t) prod *= 1.0 + f(x);
    expectation += d * prod;
  });
  const double lhs = expectation / z;

  const OrthoPolySystem sys = stieltjes_system(weight, N - 1);
  const KernelMatrix km = kernel_matrix(sys, weight, N);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) A(i, j) += f(i) * km.entries(i, j);
  const double rhs = Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
  return {lhs, rhs};
}

// Meixner weight binom(M-N+x, x) q^x (the q^x factor makes the weight
// summable and reproduces the geometric law at M = N = 1).
inline double meixner_weight(long M, long N, double q, long x) {
  if (M < N) throw precondition_error("meixner_weight: need M >= N");
  if (N < 1) throw precondition_error("meixner_weight: need N >= 1");
  if (!(q > 0.0 && q < 1.0)) throw domain_error("meixner_weight: q must be in (0,1)");
  if (x < 0) throw domain_error("meixner_weight: x must be >= 0");
  const double a = static_cast<double>(M - N);
  const double lg = std::lgamma(a + x + 1.0) - std::lgamma(x + 1.0) - std::lgamma(a + 1.0);
  return std::exp(lg + static_cast<double>(x) * std::log(q));
}

inline DiscreteWeight meixner_discrete_weight(long M, long N, double q, double tol = 1e-15) {
  return truncate_weight([&](long x) { return meixner_weight(M, N, q, x); }, tol);
}

// P[x_max <= a] = det(I - K_N) over the support points > a.
inline double xmax_cdf_discrete(const DiscreteWeight& weight, long N, long a) {
  validate(weight);
  if (weight.tail_bound > 1e-14)
    throw precondition_error("xmax_cdf_discrete: truncation tail too large");
  const long n = weight.max_point() + 1;
  if (N < 1 || N > n) throw precondition_error("xmax_cdf_discrete: need 1 <= N <= support size");
  if (a >= weight.max_point()) return 1.0;
  const OrthoPolySystem sys = stieltjes_system(weight, N - 1);
  const KernelMatrix km = kernel_matrix(sys, weight, N);
  const long lo = std::max<long>(a + 1, 0);
  const long m = n - lo;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) A(i, j) -= km.entries(lo + i, lo + j);
  const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
  if (!std::isfinite(det) || det < -1e-10 || det > 1.0 + 1e-10)
    throw conditioning_error("xmax_cdf_discrete: determinant outside [0,1]");
  return std::min(1.0, std::max(0.0, det));
}

namespace detail {

// Orthonormal Hermite functions psi_0..psi_kmax at x, weight e^{-x^2} folded
// in as e^{-x^2/2}.  Forward recurrence; in the tunneling region the wanted
// solution grows, so forward is the stable direction.
inline std::vector<double> hermite_psi_values(long kmax, double x) {
  std::vector<double> psi(static_cast<std::size_t>(kmax) + 1);
  psi[0] = std::exp(-0.5 * x * x) / std::sqrt(kSqrtPi);
  if (kmax == 0) return psi;
  psi[1] = std::sqrt(2.0) * x * psi[0];
  for (long k = 1; k < kmax; ++k)
    psi[static_cast<std::size_t>(k) + 1] =
        x * std::sqrt(2.0 / (k + 1.0)) * psi[static_cast<std::size_t>(k)] -
        std::sqrt(static_cast<double>(k) / (k + 1.0)) * psi[static_cast<std::size_t>(k) - 1];
  return psi;
}

inline double hermite_cd_kernel(long N, double x, double y) {
  if (std::abs(x - y) < 1e-9) {
    const double mid = 0.5 * (x + y);
    const auto psi = hermite_psi_values(N - 1, mid);
    double s = 0.0;
    for (double v : psi) s += v * v;
    return s;
  }
  const auto px = hermite_psi_values(N, x);
  const auto py = hermite_psi_values(N, y);
  return std::sqrt(N / 2.0) *
         (px[static_cast<std::size_t>(N)] * py[static_cast<std::size_t>(N) - 1] -
          px[static_cast<std::size_t>(N) - 1] * py[static_cast<std::size_t>(N)]) /
         (x - y);
}

}  // namespace detail

// Edge-scaled law of the largest GUE eigenvalue, P[(sqrt(2N) x_max - 2N)/N^{1/3} <= xi],
// as a Nystrom determinant of the Hermite kernel on (a, infinity).
inline double gue_xmax_cdf(long N, double xi) {
  if (N < 1 || N > 100) throw domain_error("gue_xmax_cdf: need 1 <= N <= 100");
  if (!std::isfinite(xi)) throw domain_error("gue_xmax_cdf: xi must be finite");
  const double edge = std::sqrt(2.0 * static_cast<double>(N));
  const double delta = 1.0 / (std::sqrt(2.0) * std::pow(static_cast<double>(N), 1.0 / 6.0));
  const double a = edge + xi * delta;
  // integrate out to 12 fluctuation units past the edge; beyond that the
  // eigenvalue density is negligible at this tolerance
  const double L = std::max(4.0 * delta, (12.0 - xi) * delta);

  const auto det_for = [&](int m) {
    const QuadratureRule gl = gauss_legendre(m, a, a + L);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        const double k = detail::hermite_cd_kernel(N, gl.nodes[static_cast<std::size_t>(i)],
                                                   gl.nodes[static_cast<std::size_t>(j)]);
        const double v = std::sqrt(gl.weights[static_cast<std::size_t>(i)] *
                                   gl.weights[static_cast<std::size_t>(j)]) *
                         k;
        A(i, j) -= v;
        if (i != j) A(j, i) -= v;
      }
    return Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
  };

  const int m1 = std::clamp(static_cast<int>(std::ceil(7.0 * L / delta)) + 20, 48, 260);
  const double d1 = det_for(m1);
  const double d2 = det_for(m1 + 40);
  const double diff = std::abs(d1 - d2);
  if (!std::isfinite(d2) || diff > 1e-6)
    throw accuracy_error("gue_xmax_cdf: quadrature did not converge", diff);
  return std::min(1.0, std::max(0.0, d2));
}

}  // namespace kpzlab

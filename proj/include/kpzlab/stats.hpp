#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "kpzlab/errors.hpp"

namespace kpzlab {

// Sorted sample set with the addressing information needed to regenerate it.
struct EmpiricalDistribution {
  std::vector<double> samples;  // ascending
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
};

inline EmpiricalDistribution make_empirical(std::vector<double> v, std::uint64_t seed,
                                            std::uint64_t stream_base) {
  if (v.empty()) throw precondition_error("make_empirical: need at least one sample");
  for (double s : v)
    if (!std::isfinite(s)) throw domain_error("make_empirical: non-finite sample");
  std::sort(v.begin(), v.end());
  return {std::move(v), seed, stream_base};
}

// Right-continuous empirical CDF: F_n(x) = #{samples <= x} / n.
inline double ecdf(const EmpiricalDistribution& d, double x) {
  const auto it = std::upper_bound(d.samples.begin(), d.samples.end(), x);
  return static_cast<double>(it - d.samples.begin()) /
         static_cast<double>(d.samples.size());
}

// Kolmogorov-Smirnov distance against a reference CDF, evaluated as the exact
// sup over the sample points (both one-sided gaps at every jump).  The
// reference must be non-decreasing along the sorted samples.
inline double ks_distance(const EmpiricalDistribution& d,
                          const std::function<double(double)>& cdf) {
  const std::size_t n = d.samples.size();
  double ks = 0.0;
  double prev_f = -1.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && d.samples[j] == d.samples[i]) ++j;
    const double f = cdf(d.samples[i]);
    if (!std::isfinite(f) || f < prev_f - 1e-12)
      throw domain_error("ks_distance: reference CDF is not non-decreasing");
    prev_f = std::max(prev_f, f);
    const double lo = static_cast<double>(i) / n;   // F_n just below the atom
    const double hi = static_cast<double>(j) / n;   // F_n at the atom
    ks = std::max(ks, std::max(std::fabs(hi - f), std::fabs(lo - f)));
    i = j;
  }
  return ks;
}

// KS distance when both the samples and the reference law live on the
// integer lattice.  Both CDFs are flat between integers, so the sup is
// attained at integer arguments; ks_distance would pair the empirical left
// limit with the reference's right value and overstate the gap by one atom.
inline double ks_distance_lattice(const EmpiricalDistribution& d,
                                  const std::function<double(double)>& cdf) {
  for (double s : d.samples)
    if (s != std::floor(s)) throw domain_error("ks_distance_lattice: samples must be integers");
  const long lo = static_cast<long>(d.samples.front()) - 1;
  const long hi = static_cast<long>(d.samples.back());
  double ks = 0.0;
  double prev = -1.0;
  for (long t = lo; t <= hi; ++t) {
    const double f = cdf(static_cast<double>(t));
    if (!std::isfinite(f) || f < prev - 1e-12)
      throw domain_error("ks_distance_lattice: reference CDF is not non-decreasing");
    prev = std::max(prev, f);
    ks = std::max(ks, std::fabs(ecdf(d, static_cast<double>(t)) - f));
  }
  return ks;
}

// Two-sample KS distance (sup over the union of atoms).
inline double ks_distance_two_sample(const EmpiricalDistribution& a,
                                     const EmpiricalDistribution& b) {
  const auto& x = a.samples;
  const auto& y = b.samples;
  std::size_t i = 0, j = 0;
  double ks = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j]))
      v = x[i];
    else
      v = y[j];
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(x.size());
    const double fb = static_cast<double>(j) / static_cast<double>(y.size());
    ks = std::max(ks, std::fabs(fa - fb));
  }
  return ks;
}

// Lattice-valued samples compared against a continuous limit law carry a
// half-integer correction: the atom at integer g represents mass on
// [g, g+1), so g + 1/2 is centered before the affine rescaling.
inline std::vector<double> rescale_lattice_samples(const std::vector<long long>& raw,
                                                   double center, double scale) {
  if (!(scale > 0.0)) throw domain_error("rescale_lattice_samples: scale must be > 0");
  std::vector<double> out;
  out.reserve(raw.size());
  for (long long g : raw)
    out.push_back((static_cast<double>(g) + 0.5 - center) / scale);
  return out;
}

}  // namespace kpzlab

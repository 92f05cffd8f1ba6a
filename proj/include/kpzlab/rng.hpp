#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "kpzlab/errors.hpp"

namespace kpzlab {

// Deterministic counter-based generator.  A stream is addressed by
// (seed, stream_id); draw i of a stream depends only on that address and i,
// never on which thread or in what order streams are consumed.  This is what
// makes sample-parallel runs bit-identical to serial ones.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    h ^= mix64(stream_id + 0xD1B54A32D192ED03ull);
    base_ = mix64(h);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix64(base_ + counter_);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1 exactly.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller; the second member of each pair is cached
  // so consecutive calls consume uniforms at a deterministic rate.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Poisson(alpha): sequential inversion for small alpha, transformed
  // rejection (PTRD) for large.  alpha <= 1e7 keeps inversion/rejection exact
  // in double.
  long long poisson(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw domain_error("poisson: alpha must be positive and finite");
    if (alpha <= 30.0) return poisson_inversion(alpha);
    return poisson_ptrd(alpha);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  long long poisson_inversion(double alpha) {
    double p = std::exp(-alpha);
    double cum = p;
    double u = uniform01();
    long long k = 0;
    while (u > cum && k < 4000) {
      ++k;
      p *= alpha / static_cast<double>(k);
      cum += p;
    }
    return k;
  }

  long long poisson_ptrd(double alpha) {
    // Hormann's PTRD rejection sampler.
    const double smu = std::sqrt(alpha);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = uniform01() - 0.5;
      double v = uniform01();
      double us = 0.5 - std::fabs(u);
      long long k =
          static_cast<long long>(std::floor((2.0 * a / us + b) * u + alpha + 0.43));
      if (us >= 0.07 && v <= v_r) return k;
      if (k < 0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          k * std::log(alpha) - alpha - std::lgamma(static_cast<double>(k) + 1.0))
        return k;
    }
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace kpzlab

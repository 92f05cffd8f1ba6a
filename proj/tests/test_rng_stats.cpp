#include "kpzlab/rng.hpp"
#include "kpzlab/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using kpzlab::EmpiricalDistribution;
using kpzlab::SeededStream;

TEST(SeededStream, DeterministicAndStreamIndependent) {
  SeededStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> va, vb;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
  }
  EXPECT_EQ(va, vb);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 64; ++i) {
    if (c.next_u64() != va[static_cast<std::size_t>(i)]) differs_stream = true;
    if (d.next_u64() != va[static_cast<std::size_t>(i)]) differs_seed = true;
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(SeededStream, UniformStaysInsideOpenInterval) {
  SeededStream g(1, 0);
  double mn = 1.0, mx = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = g.uniform01();
    mn = std::min(mn, u);
    mx = std::max(mx, u);
    sum += u;
  }
  EXPECT_GT(mn, 0.0);
  EXPECT_LT(mx, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(SeededStream, NormalMoments) {
  SeededStream g(9, 3);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = g.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(SeededStream, PoissonMomentsSmallAndLarge) {
  for (double alpha : {3.0, 25.0, 120.0, 900.0}) {
    SeededStream g(5, static_cast<std::uint64_t>(alpha));
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double k = static_cast<double>(g.poisson(alpha));
      s1 += k;
      s2 += k * k;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, alpha, 5.0 * std::sqrt(alpha / n) + 0.01) << alpha;
    EXPECT_NEAR(var / alpha, 1.0, 0.05) << alpha;
  }
}

TEST(SeededStream, PoissonRejectsBadAlpha) {
  SeededStream g(1, 1);
  EXPECT_THROW(g.poisson(0.0), kpzlab::domain_error);
  EXPECT_THROW(g.poisson(-2.0), kpzlab::domain_error);
  EXPECT_THROW(g.poisson(std::nan("")), kpzlab::domain_error);
}

TEST(Ecdf, RightContinuousSteps) {
  auto d = kpzlab::make_empirical({1.0, 2.0, 2.0, 5.0}, 0, 0);
  EXPECT_EQ(kpzlab::ecdf(d, 0.5), 0.0);
  EXPECT_EQ(kpzlab::ecdf(d, 1.0), 0.25);
  EXPECT_EQ(kpzlab::ecdf(d, 1.999), 0.25);
  EXPECT_EQ(kpzlab::ecdf(d, 2.0), 0.75);
  EXPECT_EQ(kpzlab::ecdf(d, 4.999), 0.75);
  EXPECT_EQ(kpzlab::ecdf(d, 5.0), 1.0);
  EXPECT_EQ(kpzlab::ecdf(d, 100.0), 1.0);
}

TEST(Ecdf, SumOfUpperTailsEqualsMean) {
  // For non-negative samples, integral of (1 - F_n) over [0, inf) = mean.
  SeededStream g(77, 1);
  std::vector<double> v;
  double mean = 0.0;
  for (int i = 0; i < 500; ++i) {
    double s = -std::log(g.uniform01());
    v.push_back(s);
    mean += s;
  }
  mean /= 500.0;
  auto d = kpzlab::make_empirical(v, 77, 1);
  // integrate the step function exactly between consecutive order statistics
  double integral = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(d.samples.size());
    integral += (1.0 - f) * (d.samples[i] - prev);
    prev = d.samples[i];
  }
  EXPECT_NEAR(integral, mean, 1e-12);
}

TEST(KsDistance, ExactOnHandComputedCase) {
  auto d = kpzlab::make_empirical({0.25, 0.5}, 0, 0);
  // against U(0,1): F(0.25)=0.25 vs F_n jumps 0->1/2; F(0.5)=0.5 vs 1/2->1
  const double ks =
      kpzlab::ks_distance(d, [](double x) { return std::min(1.0, std::max(0.0, x)); });
  EXPECT_NEAR(ks, 0.5, 1e-15);
}

TEST(KsDistance, InvariantUnderAffineRescaling) {
  SeededStream g(3, 11);
  std::vector<double> raw;
  for (int i = 0; i < 4000; ++i) raw.push_back(g.normal());
  auto d0 = kpzlab::make_empirical(raw, 3, 11);
  const double ks0 = kpzlab::ks_distance(
      d0, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
  std::vector<double> scaled;
  for (double s : raw) scaled.push_back(2.5 * s - 1.75);
  auto d1 = kpzlab::make_empirical(scaled, 3, 11);
  const double ks1 = kpzlab::ks_distance(d1, [](double x) {
    return 0.5 * std::erfc(-((x + 1.75) / 2.5) / std::sqrt(2.0));
  });
  EXPECT_NEAR(ks0, ks1, 1e-12);
}

TEST(KsDistance, SelfTestAtDkwScale) {
  // 1e5 uniforms against U(0,1); KS should sit well below 0.01
  SeededStream g(2026, 0);
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) v.push_back(g.uniform01());
  auto d = kpzlab::make_empirical(v, 2026, 0);
  const double ks =
      kpzlab::ks_distance(d, [](double x) { return std::min(1.0, std::max(0.0, x)); });
  EXPECT_LE(ks, 0.01);
}

TEST(KsDistanceLattice, ExactOnHandComputedCase) {
  auto d = kpzlab::make_empirical({0.0, 0.0, 1.0}, 0, 0);
  // reference: F(-1)=0.2, F(0)=0.5, F(1)=1; F_n: 0, 2/3, 1.
  // the sup is at t=-1 where the empirical CDF is still 0
  const auto cdf = [](double t) {
    if (t < 0.0) return 0.2;
    if (t < 1.0) return 0.5;
    return 1.0;
  };
  EXPECT_NEAR(kpzlab::ks_distance_lattice(d, cdf), 0.2, 1e-15);
  // the continuous-reference estimator pairs F_n(0-)=0 with F(0)=0.5 and
  // would report 0.5 for the same data
  EXPECT_NEAR(kpzlab::ks_distance(d, cdf), 0.5, 1e-15);
}

TEST(KsDistanceLattice, RejectsNonIntegerSamples) {
  auto d = kpzlab::make_empirical({0.5, 1.0}, 0, 0);
  EXPECT_THROW(kpzlab::ks_distance_lattice(d, [](double) { return 1.0; }),
               kpzlab::domain_error);
}

TEST(KsDistance, RejectsNonMonotoneReference) {
  auto d = kpzlab::make_empirical({0.1, 0.9}, 0, 0);
  EXPECT_THROW(kpzlab::ks_distance(d, [](double x) { return -x; }),
               kpzlab::domain_error);
}

TEST(KsDistanceTwoSample, MatchesHandComputation) {
  auto a = kpzlab::make_empirical({1.0, 3.0}, 0, 0);
  auto b = kpzlab::make_empirical({2.0, 4.0}, 0, 0);
  // F_a jumps at 1,3; F_b at 2,4; sup gap = 1/2
  EXPECT_NEAR(kpzlab::ks_distance_two_sample(a, b), 0.5, 1e-15);
  EXPECT_NEAR(kpzlab::ks_distance_two_sample(a, a), 0.0, 1e-15);
}

TEST(RescaleLatticeSamples, CentersAtomsOnHalfIntegers) {
  const auto out = kpzlab::rescale_lattice_samples({4, 6}, 2.0, 2.0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out[0], (4.5 - 2.0) / 2.0, 1e-15);
  EXPECT_NEAR(out[1], (6.5 - 2.0) / 2.0, 1e-15);
  EXPECT_THROW(kpzlab::rescale_lattice_samples({1}, 0.0, 0.0), kpzlab::domain_error);
}

}  // namespace

#include "kpzlab/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using kpzlab::airy;
using kpzlab::bessel_j;
using kpzlab::gauss_legendre;

struct AiryRef {
  double x, ai, aip;
};

// Reference values computed offline with 50-digit arbitrary-precision
// arithmetic and rounded to nearest double.
const AiryRef kAiryTable[] = {
    {-15.0, 0.27821749087082893, 0.27237420430864202},
    {-12.5, -0.27627456138116025, -0.41933133041950516},
    {-9.5, 0.3191032477191282, -0.10809531881187124},
    {-8.0, -0.052705050356386203, 0.93556093819830655},
    {-6.25, -0.34961205161089051, -0.19108625952341715},
    {-4.5, 0.29215278105595947, -0.5233625323157477},
    {-3.0, -0.37881429367765807, 0.31458376921659881},
    {-1.0, 0.53556088329235212, -0.010160567116645209},
    {-0.5, 0.47572809161053959, -0.20408167033954739},
    {0.0, 0.35502805388781724, -0.2588194037928068},
    {0.5, 0.23169360648083349, -0.22491053266468389},
    {1.3, 0.093474665771502705, -0.12033386559018358},
    {2.0, 0.034924130423274379, -0.053090384433653632},
    {3.7, 0.0017455720006099785, -0.0034669407490276271},
    {4.5, 0.00033025032351430898, -0.00071786656755750889},
    {5.5, 3.3685311908599814e-5, -8.0463391305565143e-5},
    {6.5, 2.7958823432049136e-6, -7.2319314666017926e-6},
    {8.0, 4.6922076160992316e-8, -1.3414392979067866e-7},
    {9.5, 5.3302637046174916e-10, -1.6566394593740666e-9},
    {12.0, 1.3931846888753608e-13, -4.8547365549853085e-13},
    {20.0, 1.6916728686705403e-27, -7.586391625748355e-27},
    {50.0, 4.5849417240748285e-104, -3.2443318198287993e-103},
    {100.0, 2.6344821520881845e-291, -2.6351403616044099e-290},
};

TEST(Airy, MatchesReferenceTable) {
  for (const auto& r : kAiryTable) {
    const auto v = airy(r.x);
    EXPECT_NEAR(v.ai, r.ai, 1e-12) << "x=" << r.x;
    EXPECT_NEAR(v.ai_prime, r.aip, 1e-12) << "x=" << r.x;
    // relative accuracy on the oscillatory/decaying range
    EXPECT_LE(std::fabs(v.ai - r.ai), 1e-10 * std::fabs(r.ai) + 1e-306) << "x=" << r.x;
    EXPECT_LE(std::fabs(v.ai_prime - r.aip), 1e-10 * std::fabs(r.aip) + 1e-306)
        << "x=" << r.x;
  }
}

TEST(Airy, SolvesItsDifferentialEquation) {
  // five-point second difference of Ai reproduces x*Ai(x); the O(h^4)
  // stencil keeps truncation negligible while h stays large enough that
  // evaluation jitter is not amplified
  const double h = 1e-3;
  for (double x = -10.0; x <= 5.0 + 1e-9; x += 0.5) {
    const double am2 = airy(x - 2.0 * h).ai;
    const double am = airy(x - h).ai;
    const double a0 = airy(x).ai;
    const double ap = airy(x + h).ai;
    const double ap2 = airy(x + 2.0 * h).ai;
    const double second =
        (-am2 + 16.0 * am - 30.0 * a0 + 16.0 * ap - ap2) / (12.0 * h * h);
    EXPECT_NEAR(second, x * a0, 1e-6) << "x=" << x;
  }
}

TEST(Airy, DerivativeConsistentWithValues) {
  const double h = 1e-5;
  for (double x = -9.7; x <= 7.0; x += 0.7) {
    const double num = (airy(x + h).ai - airy(x - h).ai) / (2.0 * h);
    EXPECT_NEAR(num, airy(x).ai_prime, 1e-7) << "x=" << x;
  }
}

TEST(Airy, UnderflowFlushesToZero) {
  const auto v = airy(200.0);
  EXPECT_EQ(v.ai, 0.0);
  EXPECT_EQ(v.ai_prime, 0.0);
}

TEST(Airy, RejectsBadArguments) {
  EXPECT_THROW(airy(std::nan("")), kpzlab::domain_error);
  EXPECT_THROW(airy(std::numeric_limits<double>::infinity()), kpzlab::domain_error);
  EXPECT_THROW(airy(200.5), kpzlab::domain_error);
  EXPECT_THROW(airy(-201.0), kpzlab::domain_error);
}

struct BesselRef {
  long n;
  double x, j;
};

const BesselRef kBesselTable[] = {
    {0, 0.0, 1.0},
    {1, 2.0, 0.57672480775687339},
    {0, 1.0, 0.76519768655796655},
    {5, 2.0, 0.0070396297558716855},
    {20, 10.0, 1.1513369247813398e-5},
    {50, 10.0, 1.7845136078715953e-30},
    {3, 41.7, 0.022005715961829481},
    {0, 200.0, -0.015437439930565092},
    {100, 100.0, 0.09636667329586156},
    {250, 200.0, 2.5017890997210434e-12},
    {0, 1000000.0, 0.00033104301373987374},
};

TEST(BesselJ, MatchesReferenceTable) {
  for (const auto& r : kBesselTable) {
    EXPECT_NEAR(bessel_j(r.n, r.x), r.j, 1e-13) << "n=" << r.n << " x=" << r.x;
  }
}

TEST(BesselJ, ThreeTermRecurrence) {
  for (double x : {1.0, 2.0, 10.0}) {
    for (long n = 1; n <= 50; ++n) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      const double rhs = (2.0 * n / x) * bessel_j(n, x);
      const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-280});
      EXPECT_LE(std::fabs(lhs - rhs) / scale, 1e-11) << "n=" << n << " x=" << x;
    }
  }
}

TEST(BesselJ, BatchSweepAgreesWithSingleOrder) {
  const double x = 7.3;
  const auto all = kpzlab::detail::bessel_j_all(40, x);
  ASSERT_EQ(all.size(), 41u);
  for (long n = 0; n <= 40; ++n)
    EXPECT_NEAR(all[static_cast<std::size_t>(n)], bessel_j(n, x), 5e-14) << n;
}

TEST(BesselJ, RejectsBadArguments) {
  EXPECT_THROW(bessel_j(0, -1.0), kpzlab::domain_error);
  EXPECT_THROW(bessel_j(-1, 1.0), kpzlab::domain_error);
  EXPECT_THROW(bessel_j(0, std::nan("")), kpzlab::domain_error);
  EXPECT_THROW(bessel_j(1000001, 1.0), kpzlab::domain_error);
  EXPECT_THROW(bessel_j(0, 1000001.0), kpzlab::domain_error);
}

TEST(GaussLegendre, ThreePointRuleIsClassical) {
  const auto r = gauss_legendre(3, -1.0, 1.0);
  ASSERT_EQ(r.nodes.size(), 3u);
  EXPECT_NEAR(r.nodes[0], -0.77459666924148338, 1e-14);
  EXPECT_NEAR(r.nodes[1], 0.0, 1e-15);
  EXPECT_NEAR(r.nodes[2], 0.77459666924148338, 1e-14);
  EXPECT_NEAR(r.weights[0], 5.0 / 9.0, 1e-14);
  EXPECT_NEAR(r.weights[1], 8.0 / 9.0, 1e-14);
  EXPECT_NEAR(r.weights[2], 5.0 / 9.0, 1e-14);
}

TEST(GaussLegendre, StructuralInvariants) {
  for (int m : {1, 2, 7, 32, 81, 512}) {
    const auto r = gauss_legendre(m, -2.5, 7.25);
    ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(m));
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      EXPECT_GT(r.nodes[i], r.a);
      EXPECT_LT(r.nodes[i], r.b);
      if (i) EXPECT_GT(r.nodes[i], r.nodes[i - 1]);
      EXPECT_GT(r.weights[i], 0.0);
      sum += r.weights[i];
    }
    EXPECT_NEAR(sum, r.b - r.a, 1e-13);
  }
}

TEST(GaussLegendre, IntegratesMonomialsExactly) {
  // degree <= 2m-1 exactness on random intervals
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    double a = U(gen), b = a + 0.5 + std::fabs(U(gen));
    int m = 1 + static_cast<int>(gen() % 12);
    const auto r = gauss_legendre(m, a, b);
    for (int d = 0; d <= 2 * m - 1; ++d) {
      double q = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i)
        q += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact =
          (std::pow(b, d + 1) - std::pow(a, d + 1)) / static_cast<double>(d + 1);
      const double scale = std::max(std::fabs(exact), 1.0);
      EXPECT_LE(std::fabs(q - exact) / scale, 1e-12) << "m=" << m << " d=" << d;
    }
  }
}

TEST(GaussLegendre, RejectsBadArguments) {
  EXPECT_THROW(gauss_legendre(0, 0.0, 1.0), kpzlab::domain_error);
  EXPECT_THROW(gauss_legendre(513, 0.0, 1.0), kpzlab::domain_error);
  EXPECT_THROW(gauss_legendre(4, 1.0, 1.0), kpzlab::domain_error);
  EXPECT_THROW(gauss_legendre(4, 2.0, 1.0), kpzlab::domain_error);
}

}  // namespace

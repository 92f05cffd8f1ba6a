#include "kpzlab/growth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kpzlab/combinatorics.hpp"

namespace kpzlab {
namespace {

LppGrid make_grid(std::vector<std::vector<long>> rows, double q = 0.0) {
  LppGrid g;
  g.M = static_cast<long>(rows.size());
  g.N = static_cast<long>(rows[0].size());
  g.q = q;
  for (const auto& r : rows)
    for (long v : r) g.w.push_back(v);
  return g;
}

// Full passage-time table G(i,j) for all corners, zero boundary.
std::vector<std::vector<long>> passage_table(const LppGrid& g) {
  std::vector<std::vector<long>> G(g.M + 1, std::vector<long>(g.N + 1, 0));
  for (long i = 1; i <= g.M; ++i)
    for (long j = 1; j <= g.N; ++j)
      G[i][j] = g.at(i, j) + std::max(G[i - 1][j], G[i][j - 1]);
  return G;
}

TEST(Geometric, MomentsAndMass) {
  SeededStream rng(2026, 1);
  const long n = 1000000;
  double sum = 0.0;
  for (long i = 0; i < n; ++i) sum += static_cast<double>(sample_geometric(0.5, rng));
  EXPECT_NEAR(sum / n, 1.0, 0.01);

  SeededStream rng2(2026, 2);
  long zeros = 0;
  for (long i = 0; i < n; ++i)
    if (sample_geometric(0.25, rng2) == 0) ++zeros;
  EXPECT_NEAR(static_cast<double>(zeros) / n, 0.75, 0.005);
}

TEST(Geometric, RejectsBadParameter) {
  SeededStream rng(1, 1);
  EXPECT_THROW(sample_geometric(0.0, rng), domain_error);
  EXPECT_THROW(sample_geometric(1.0, rng), domain_error);
  EXPECT_THROW(sample_geometric(-0.3, rng), domain_error);
  EXPECT_THROW(sample_geometric(1.7, rng), domain_error);
  EXPECT_THROW(sample_geometric(std::nan(""), rng), domain_error);
}

TEST(LppValue, HandCases) {
  EXPECT_EQ(lpp_value(make_grid({{5}})), 5);
  EXPECT_EQ(lpp_value(make_grid({{1, 2}, {3, 4}})), 8);
  // single row: the only path collects everything
  EXPECT_EQ(lpp_value(make_grid({{2, 0, 7, 1}})), 10);
  EXPECT_EQ(lpp_value(make_grid({{0, 0}, {0, 0}})), 0);
}

TEST(LppValue, MatchesExhaustivePathEnumeration) {
  SeededStream rng(7, 0);
  const LppGrid g = sample_lpp_grid(5, 5, 0.5, rng);
  long best = -1;
  long count = 0;
  // walk every up/right path explicitly
  std::vector<std::pair<long, long>> stack{{1, 1}};
  std::function<void(long, long, long)> walk = [&](long i, long j, long acc) {
    acc += g.at(i, j);
    if (i == g.M && j == g.N) {
      best = std::max(best, acc);
      ++count;
      return;
    }
    if (i < g.M) walk(i + 1, j, acc);
    if (j < g.N) walk(i, j + 1, acc);
  };
  walk(1, 1, 0);
  EXPECT_EQ(count, 70);  // C(8,4) monotone lattice paths in a 5x5 grid
  EXPECT_EQ(lpp_value(g), best);
}

TEST(LppPath, HandCases) {
  using Cells = std::vector<std::pair<long, long>>;
  const UpRightPath p = lpp_maximal_path(make_grid({{1, 2}, {3, 4}}));
  EXPECT_EQ(p.cells, (Cells{{1, 1}, {2, 1}, {2, 2}}));

  const UpRightPath row = lpp_maximal_path(make_grid({{4, 0, 2, 9, 1}}));
  EXPECT_EQ(row.cells, (Cells{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}));

  // all ties: the backtrack prefers the row-above predecessor, so the
  // forward path runs right along row 1 and takes its down steps last
  const UpRightPath z = lpp_maximal_path(make_grid({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(z.cells, (Cells{{1, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 3}}));
}

TEST(LppPath, AchievesValueOnRandomGrids) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SeededStream rng(seed, 5);
    const LppGrid g = sample_lpp_grid(6, 9, 0.4, rng);
    const UpRightPath p = lpp_maximal_path(g);
    ASSERT_FALSE(p.cells.empty());
    EXPECT_EQ(p.cells.front(), (std::pair<long, long>{1, 1}));
    EXPECT_EQ(p.cells.back(), (std::pair<long, long>{g.M, g.N}));
    long sum = 0;
    for (std::size_t k = 0; k < p.cells.size(); ++k) {
      sum += g.at(p.cells[k].first, p.cells[k].second);
      if (k > 0) {
        const long di = p.cells[k].first - p.cells[k - 1].first;
        const long dj = p.cells[k].second - p.cells[k - 1].second;
        EXPECT_TRUE((di == 1 && dj == 0) || (di == 0 && dj == 1));
      }
    }
    EXPECT_EQ(sum, lpp_value(g));
  }
}

TEST(TransversalDeviation, HandCasesAndPrecondition) {
  EXPECT_EQ(transversal_deviation(lpp_maximal_path(make_grid({{1, 2}, {3, 4}}))), 1);

  // staircase hugging the top edge then the right edge of a 7x7 grid
  UpRightPath p;
  for (long j = 1; j <= 7; ++j) p.cells.emplace_back(1, j);
  for (long i = 2; i <= 7; ++i) p.cells.emplace_back(i, 7);
  EXPECT_EQ(transversal_deviation(p), 6);

  const UpRightPath bad = lpp_maximal_path(make_grid({{1, 2, 3}, {4, 5, 6}}));
  EXPECT_THROW(transversal_deviation(bad), precondition_error);
}

TEST(TransversalDeviation, SeededSquareGridStaysInRange) {
  SeededStream rng(42, 9);
  const LppGrid g = sample_lpp_grid(64, 64, 0.25, rng);
  const long dev = transversal_deviation(lpp_maximal_path(g));
  EXPECT_GE(dev, 0);
  EXPECT_LT(dev, 64);
}

TEST(Lpp, DeterministicPerStream) {
  SeededStream a(11, 3), b(11, 3), c(11, 4);
  const LppGrid ga = sample_lpp_grid(10, 10, 0.5, a);
  const LppGrid gb = sample_lpp_grid(10, 10, 0.5, b);
  const LppGrid gc = sample_lpp_grid(10, 10, 0.5, c);
  EXPECT_EQ(ga.w, gb.w);
  EXPECT_NE(ga.w, gc.w);
  EXPECT_EQ(lpp_value(ga), lpp_value(gb));
}

TEST(Lpp, MonotoneUnderSingleWeightIncrease) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SeededStream rng(seed, 2);
    LppGrid g = sample_lpp_grid(8, 8, 0.3, rng);
    const long before = lpp_value(g);
    const std::size_t cell = static_cast<std::size_t>(rng.next_u64() % g.w.size());
    const long bump = 1 + static_cast<long>(rng.next_u64() % 3);
    g.w[cell] += bump;
    EXPECT_GE(lpp_value(g), before);
    EXPECT_LE(lpp_value(g), before + bump);
  }
}

TEST(Lpp, Superadditivity) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    SeededStream rng(seed, 8);
    const long M = 12;
    const LppGrid g = sample_lpp_grid(M, M, 0.3, rng);
    const long k = 1 + static_cast<long>(rng.next_u64() % (M - 1));

    LppGrid top;
    top.M = top.N = k;
    for (long i = 1; i <= k; ++i)
      for (long j = 1; j <= k; ++j) top.w.push_back(g.at(i, j));

    LppGrid bot;
    bot.M = bot.N = M - k;
    for (long i = k + 1; i <= M; ++i)
      for (long j = k + 1; j <= M; ++j) bot.w.push_back(g.at(i, j));

    EXPECT_GE(lpp_value(g), lpp_value(top) + lpp_value(bot));
  }
}

TEST(Png, FlatWithoutNucleations) {
  const long T = 6;
  std::vector<std::vector<long>> a(T + 1, std::vector<long>(2 * T + 1, 0));
  const PngField f = png_evolve(a, T);
  for (long t = 0; t <= T; ++t)
    for (long x = -T; x <= T; ++x) EXPECT_EQ(f.height(x, t), 0);
}

TEST(Png, SingleNucleationSpreadsAtUnitSpeed) {
  const long T = 6;
  std::vector<std::vector<long>> a(T + 1, std::vector<long>(2 * T + 1, 0));
  a[1][0 + T] = 3;
  const PngField f = png_evolve(a, T);
  EXPECT_EQ(f.height(0, 2), 3);
  EXPECT_GE(f.height(1, 3), 3);
  EXPECT_GE(f.height(-1, 3), 3);
  // a single island of height 3 born at (0,1) covers |x| <= t-1
  for (long t = 0; t <= T; ++t)
    for (long x = -T; x <= T; ++x)
      EXPECT_EQ(f.height(x, t), (t >= 1 && std::labs(x) <= t - 1) ? 3 : 0);
}

TEST(Png, RejectsInvalidNucleations) {
  const long T = 4;
  std::vector<std::vector<long>> a(T + 1, std::vector<long>(2 * T + 1, 0));
  a[2][0 + T] = 1;  // x - t = -2, even
  EXPECT_THROW(png_evolve(a, T), precondition_error);

  std::vector<std::vector<long>> neg(T + 1, std::vector<long>(2 * T + 1, 0));
  neg[1][0 + T] = -2;
  EXPECT_THROW(png_evolve(neg, T), precondition_error);

  std::vector<std::vector<long>> ragged(T, std::vector<long>(2 * T + 1, 0));
  EXPECT_THROW(png_evolve(ragged, T), precondition_error);
}

TEST(Png, CouplesToLastPassageValues) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SeededStream rng(seed, 6);
    const LppGrid g = sample_lpp_grid(6, 6, 0.45, rng);
    const PngField f = png_from_lpp(g);
    const auto G = passage_table(g);
    for (long i = 1; i <= g.M; ++i)
      for (long j = 1; j <= g.N; ++j) EXPECT_EQ(f.height(i - j, i + j - 1), G[i][j]);
  }
}

TEST(Rsk, FirstRowLengthEqualsPassageValue) {
  std::uint64_t seed = 0;
  for (long n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 15; ++rep) {
      SeededStream rng(++seed, 13);
      const LppGrid g = sample_lpp_grid(n, n, 0.35, rng);
      std::vector<std::vector<long>> w(n, std::vector<long>(n));
      for (long i = 1; i <= n; ++i)
        for (long j = 1; j <= n; ++j) w[i - 1][j - 1] = g.at(i, j);
      const auto [P, Q] = rsk(w);
      const long lambda1 = P.rows.empty() ? 0 : static_cast<long>(P.rows[0].size());
      EXPECT_EQ(lambda1, lpp_value(g));
      EXPECT_EQ(P.shape().parts, Q.shape().parts);
    }
  }
}

TEST(Hammersley, DegenerateIntensity) {
  for (std::uint64_t s = 1; s <= 100; ++s) {
    SeededStream rng(s, 1);
    EXPECT_EQ(hammersley_sample(1e-12, rng), 0);
  }
  SeededStream rng(3, 3);
  EXPECT_THROW(hammersley_sample(0.0, rng), domain_error);
  EXPECT_THROW(hammersley_sample(-1.0, rng), domain_error);
  EXPECT_THROW(hammersley_sample(2e6, rng), domain_error);
}

TEST(Hammersley, LawAnchorAtUnitIntensity) {
  // P[L <= 1] at intensity 1 equals e^{-1} I_0(2) = 0.83861256712602582
  const long n = 1000000;
  long at_most_one = 0;
  long at_most_two = 0;
  for (long i = 0; i < n; ++i) {
    SeededStream rng(909, static_cast<std::uint64_t>(i));
    const long L = hammersley_sample(1.0, rng);
    if (L <= 1) ++at_most_one;
    if (L <= 2) ++at_most_two;
  }
  EXPECT_NEAR(static_cast<double>(at_most_one) / n, 0.83861256712602582, 0.002);
  EXPECT_NEAR(static_cast<double>(at_most_two) / n, 0.98090768932801132, 0.002);
}

TEST(Lis, MeanGrowthRate) {
  auto mean_ratio = [](long N, long samples, std::uint64_t seed) {
    double total = 0.0;
    for (long s = 0; s < samples; ++s) {
      SeededStream rng(seed, static_cast<std::uint64_t>(s));
      std::vector<double> y(static_cast<std::size_t>(N));
      for (auto& v : y) v = rng.uniform01();
      std::vector<double> tails;
      for (double v : y) {
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end())
          tails.push_back(v);
        else
          *it = v;
      }
      total += static_cast<double>(tails.size());
    }
    return total / static_cast<double>(samples) / std::sqrt(static_cast<double>(N));
  };
  const double r100 = mean_ratio(100, 4000, 501);
  const double r400 = mean_ratio(400, 4000, 502);
  const double r900 = mean_ratio(900, 4000, 503);
  // true ratios: 1.6747, 1.7872, 1.8336 (each +-0.0005); the approach to 2
  // is slow, so only the larger sizes clear 1.70
  EXPECT_GT(r100, 1.60);
  EXPECT_LT(r100, 1.75);
  EXPECT_GT(r400, 1.70);
  EXPECT_GT(r900, 1.70);
  EXPECT_GT(r400, r100);
  EXPECT_GT(r900, r400);
  EXPECT_LT(r900, 2.00);
}

TEST(LimitCheck, SquareGridMatchesPointProcess) {
  SeededStream rng(77, 100);
  const LimitCheckReport r = lpp_to_l_alpha_limit_check(1.0, 50, rng, 100000);
  EXPECT_EQ(r.g_dist.samples.size(), 100000u);
  EXPECT_EQ(r.l_dist.samples.size(), 100000u);
  EXPECT_LE(r.ks, 0.01);
}

TEST(LimitCheck, SmokeAndDomainErrors) {
  SeededStream rng(5, 0);
  const LimitCheckReport r = lpp_to_l_alpha_limit_check(1.0, 2, rng, 200);
  EXPECT_GE(r.ks, 0.0);
  EXPECT_LE(r.ks, 1.0);

  SeededStream rng2(5, 1);
  EXPECT_THROW(lpp_to_l_alpha_limit_check(5.0, 2, rng2, 10), domain_error);
  EXPECT_THROW(lpp_to_l_alpha_limit_check(-1.0, 10, rng2, 10), domain_error);
  EXPECT_THROW(lpp_to_l_alpha_limit_check(1.0, 10, rng2, 0), precondition_error);
}

}  // namespace
}  // namespace kpzlab

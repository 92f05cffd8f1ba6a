#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "kpzlab/combinatorics.hpp"
#include "kpzlab/errors.hpp"
#include "kpzlab/rng.hpp"
#include "kpzlab/stats.hpp"

namespace kpzlab {

// Geometric law supported on {0,1,2,...} with P[k] = (1-q) q^k.
inline long sample_geometric(double q, SeededStream& rng) {
  if (!(q > 0.0 && q < 1.0)) throw domain_error("sample_geometric: q must be in (0,1)");
  const double u = rng.uniform01();
  return static_cast<long>(std::floor(std::log(u) / std::log(q)));
}

// Rectangular grid of non-negative integer weights, rows indexed 1..M and
// columns 1..N.  Immutable once sampled.
struct LppGrid {
  long M = 0;
  long N = 0;
  double q = 0.0;
  std::vector<long> w;  // row-major

  long at(long i, long j) const {
    return w[static_cast<std::size_t>((i - 1) * N + (j - 1))];
  }
};

inline void validate(const LppGrid& g) {
  if (g.M < 1 || g.N < 1) throw precondition_error("LppGrid: M, N must be >= 1");
  if (g.w.size() != static_cast<std::size_t>(g.M * g.N))
    throw precondition_error("LppGrid: weight array has wrong size");
  for (long v : g.w)
    if (v < 0) throw precondition_error("LppGrid: weights must be >= 0");
}

// Draw an M x N grid of i.i.d. geometric(q) weights in row-major order.
inline LppGrid sample_lpp_grid(long M, long N, double q, SeededStream& rng) {
  if (M < 1 || N < 1) throw domain_error("sample_lpp_grid: M, N must be >= 1");
  LppGrid g;
  g.M = M;
  g.N = N;
  g.q = q;
  g.w.reserve(static_cast<std::size_t>(M * N));
  for (long i = 0; i < M * N; ++i) g.w.push_back(sample_geometric(q, rng));
  return g;
}

// Last-passage value G(M,N): max over up/right paths from (1,1) to (M,N) of
// the collected weights, via the DP recursion with O(N) extra space.
inline long lpp_value(const LppGrid& g) {
  validate(g);
  std::vector<long> dp(static_cast<std::size_t>(g.N) + 1, 0);
  for (long i = 1; i <= g.M; ++i)
    for (long j = 1; j <= g.N; ++j) {
      auto& cur = dp[static_cast<std::size_t>(j)];
      cur = g.at(i, j) + std::max(cur, dp[static_cast<std::size_t>(j) - 1]);
    }
  return dp[static_cast<std::size_t>(g.N)];
}

struct UpRightPath {
  std::vector<std::pair<long, long>> cells;  // from (1,1) to (M,N)
};

// Backtracked optimal path.  Deterministic tie rule: when both predecessors
// achieve the optimum, step to (i-1, j).
inline UpRightPath lpp_maximal_path(const LppGrid& g) {
  validate(g);
  const std::size_t rows = static_cast<std::size_t>(g.M) + 1;
  const std::size_t cols = static_cast<std::size_t>(g.N) + 1;
  std::vector<std::vector<long>> G(rows, std::vector<long>(cols, 0));
  for (long i = 1; i <= g.M; ++i)
    for (long j = 1; j <= g.N; ++j)
      G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          g.at(i, j) + std::max(G[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)],
                                G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]);
  UpRightPath path;
  long i = g.M, j = g.N;
  while (true) {
    path.cells.emplace_back(i, j);
    if (i == 1 && j == 1) break;
    if (i == 1) {
      --j;
    } else if (j == 1) {
      --i;
    } else if (G[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] >=
               G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

// Maximal distance of a square-grid path from the diagonal.
inline long transversal_deviation(const UpRightPath& p) {
  if (p.cells.empty()) throw precondition_error("transversal_deviation: empty path");
  if (p.cells.back().first != p.cells.back().second)
    throw precondition_error("transversal_deviation: path endpoint must be diagonal (M=N)");
  long dev = 0;
  for (const auto& [i, j] : p.cells) dev = std::max(dev, std::labs(i - j));
  return dev;
}

// Polynuclear-growth field on the space-time window |x| <= T, t = 0..T.
// Layout: h[t][x+T], a[t][x+T].
struct PngField {
  long T = 0;
  std::vector<std::vector<long>> h;
  std::vector<std::vector<long>> a;

  long height(long x, long t) const { return h[static_cast<std::size_t>(t)][static_cast<std::size_t>(x + T)]; }
};

// Evolve the deposition recursion from a flat start:
//   h(x, t+1) = max(h(x-1,t), h(x,t), h(x+1,t)) + a(x, t+1)
// where the nucleation a enters at the time step it is dated with (the
// lattice parity constraint a(x,t) = 0 for x-t even makes any other
// placement inconsistent with the growth coupling).  Sites outside the
// window are read as 0.
inline PngField png_evolve(const std::vector<std::vector<long>>& a, long T) {
  if (T < 0) throw precondition_error("png_evolve: T must be >= 0");
  const std::size_t width = 2 * static_cast<std::size_t>(T) + 1;
  if (a.size() != static_cast<std::size_t>(T) + 1)
    throw precondition_error("png_evolve: nucleation array must have T+1 time rows");
  for (long t = 0; t <= T; ++t) {
    if (a[static_cast<std::size_t>(t)].size() != width)
      throw precondition_error("png_evolve: nucleation row has wrong width");
    for (long x = -T; x <= T; ++x) {
      const long v = a[static_cast<std::size_t>(t)][static_cast<std::size_t>(x + T)];
      if (v < 0) throw precondition_error("png_evolve: nucleations must be >= 0");
      if (v != 0 && (((x - t) % 2) + 2) % 2 == 0)
        throw precondition_error("png_evolve: nucleation on even x-t site");
    }
  }
  PngField f;
  f.T = T;
  f.a = a;
  f.h.assign(static_cast<std::size_t>(T) + 1, std::vector<long>(width, 0));
  for (long t = 0; t < T; ++t) {
    for (long x = -T; x <= T; ++x) {
      long best = f.h[static_cast<std::size_t>(t)][static_cast<std::size_t>(x + T)];
      if (x - 1 >= -T)
        best = std::max(best, f.h[static_cast<std::size_t>(t)][static_cast<std::size_t>(x - 1 + T)]);
      if (x + 1 <= T)
        best = std::max(best, f.h[static_cast<std::size_t>(t)][static_cast<std::size_t>(x + 1 + T)]);
      f.h[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(x + T)] =
          best + a[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(x + T)];
    }
  }
  return f;
}

// Embed a weight grid as PNG nucleations, a(i-j, i+j-1) = w(i,j).  The window
// T = 2(M+N) is wide enough that no read cell's backward light cone touches
// the window boundary, so the evolved heights are exact.
inline PngField png_from_lpp(const LppGrid& g) {
  validate(g);
  const long T = 2 * (g.M + g.N);
  std::vector<std::vector<long>> a(static_cast<std::size_t>(T) + 1,
                                   std::vector<long>(2 * static_cast<std::size_t>(T) + 1, 0));
  for (long i = 1; i <= g.M; ++i)
    for (long j = 1; j <= g.N; ++j)
      a[static_cast<std::size_t>(i + j - 1)][static_cast<std::size_t>((i - j) + T)] = g.at(i, j);
  return png_evolve(a, T);
}

// One draw of the Poissonized LIS: K ~ Poisson(alpha) points uniform in the
// unit square (coordinate collisions redrawn), LIS length of the rank
// permutation of y taken in increasing-x order.
inline long hammersley_sample(double alpha, SeededStream& rng) {
  if (!(alpha > 0.0) || alpha > 1e6)
    throw domain_error("hammersley_sample: alpha must be in (0, 1e6]");
  const long long K = rng.poisson(alpha);
  if (K == 0) return 0;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(K));
  std::set<double> seen_x, seen_y;
  while (static_cast<long long>(pts.size()) < K) {
    const double x = rng.uniform01();
    const double y = rng.uniform01();
    if (!seen_x.insert(x).second || !seen_y.insert(y).second) continue;
    pts.emplace_back(x, y);
  }
  std::sort(pts.begin(), pts.end());
  // patience sorting on the y-sequence
  std::vector<double> tails;
  for (const auto& [x, y] : pts) {
    auto it = std::lower_bound(tails.begin(), tails.end(), y);
    if (it == tails.end())
      tails.push_back(y);
    else
      *it = y;
  }
  return static_cast<long>(tails.size());
}

struct LimitCheckReport {
  EmpiricalDistribution g_dist;
  EmpiricalDistribution l_dist;
  double ks = 0.0;
};

// Compare the square-grid last-passage law at q = alpha/N^2 against the
// Poissonized LIS law with the same sample budget.  Streams are derived from
// the caller's (seed, stream_id): sample s uses stream_id + 2s for the grid
// and stream_id + 2s + 1 for the point process.
inline LimitCheckReport lpp_to_l_alpha_limit_check(double alpha, long N,
                                                   const SeededStream& rng, long samples) {
  if (!(alpha > 0.0)) throw domain_error("lpp_to_l_alpha_limit_check: alpha must be > 0");
  if (N < 1) throw domain_error("lpp_to_l_alpha_limit_check: N must be >= 1");
  const double q = alpha / (static_cast<double>(N) * static_cast<double>(N));
  if (q >= 1.0) throw domain_error("lpp_to_l_alpha_limit_check: alpha/N^2 must be < 1");
  if (samples < 1) throw precondition_error("lpp_to_l_alpha_limit_check: need samples >= 1");
  std::vector<double> gs, ls;
  gs.reserve(static_cast<std::size_t>(samples));
  ls.reserve(static_cast<std::size_t>(samples));
  for (long s = 0; s < samples; ++s) {
    SeededStream grid_rng(rng.seed(), rng.stream_id() + 2 * static_cast<std::uint64_t>(s));
    SeededStream pts_rng(rng.seed(), rng.stream_id() + 2 * static_cast<std::uint64_t>(s) + 1);
    const LppGrid g = sample_lpp_grid(N, N, q, grid_rng);
    gs.push_back(static_cast<double>(lpp_value(g)));
    ls.push_back(static_cast<double>(hammersley_sample(alpha, pts_rng)));
  }
  LimitCheckReport r;
  r.g_dist = make_empirical(std::move(gs), rng.seed(), rng.stream_id());
  r.l_dist = make_empirical(std::move(ls), rng.seed(), rng.stream_id() + 1);
  r.ks = ks_distance_two_sample(r.g_dist, r.l_dist);
  return r;
}

}  // namespace kpzlab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "kpzlab/errors.hpp"
#include "kpzlab/rational.hpp"

namespace kpzlab {

// Integer partition in weakly decreasing order, no trailing zeros.
struct Partition {
  std::vector<long> parts;

  long size() const {
    long s = 0;
    for (long p : parts) s += p;
    return s;
  }
  long length() const { return static_cast<long>(parts.size()); }
  long first() const { return parts.empty() ? 0 : parts.front(); }
  bool operator==(const Partition& o) const { return parts == o.parts; }
  bool operator<(const Partition& o) const { return parts < o.parts; }
};

inline void validate(const Partition& p) {
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    if (p.parts[i] <= 0) throw precondition_error("partition: parts must be positive");
    if (i && p.parts[i] > p.parts[i - 1])
      throw precondition_error("partition: parts must be weakly decreasing");
  }
}

inline Partition conjugate(const Partition& p) {
  validate(p);
  Partition q;
  if (p.parts.empty()) return q;
  q.parts.resize(static_cast<std::size_t>(p.parts[0]), 0);
  for (long col = 0; col < p.parts[0]; ++col) {
    long cnt = 0;
    for (long part : p.parts)
      if (part > col) ++cnt;
    q.parts[static_cast<std::size_t>(col)] = cnt;
  }
  return q;
}

// Permutation of {1..N} stored as the word w(1), ..., w(N).
struct Permutation {
  std::vector<int> word;
  long size() const { return static_cast<long>(word.size()); }
};

inline void validate(const Permutation& p) {
  std::vector<char> seen(p.word.size() + 1, 0);
  for (int v : p.word) {
    if (v < 1 || v > static_cast<int>(p.word.size()) || seen[static_cast<std::size_t>(v)])
      throw precondition_error("permutation: word is not a bijection on 1..N");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

// Longest strictly increasing subsequence by patience sorting, O(N log N).
inline long lis_length(const Permutation& p) {
  validate(p);
  std::vector<int> tails;  // tails[k] = smallest tail of an increasing run of length k+1
  for (int v : p.word) {
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end())
      tails.push_back(v);
    else
      *it = v;
  }
  return static_cast<long>(tails.size());
}

// Exhaustive law of the LIS length over the uniform symmetric group:
// returns the CDF n -> P[lis <= n] as exact rationals.
inline std::map<long, Rational> exhaustive_lis_law(int N) {
  if (N < 1) throw domain_error("exhaustive_lis_law: N must be >= 1");
  if (N > 10) throw resource_error("exhaustive_lis_law: N > 10 not enumerable");
  std::vector<int> w(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  std::vector<long> counts(static_cast<std::size_t>(N) + 1, 0);
  do {
    Permutation p{w};
    ++counts[static_cast<std::size_t>(lis_length(p))];
  } while (std::next_permutation(w.begin(), w.end()));
  const Integer total = factorial(static_cast<unsigned long>(N));
  std::map<long, Rational> cdf;
  Integer cum = 0;
  for (long n = 1; n <= N; ++n) {
    cum += counts[static_cast<std::size_t>(n)];
    Rational r(cum, total);
    r.canonicalize();
    cdf[n] = r;
  }
  return cdf;
}

namespace detail {

// Standard-tableau count of a partition shape by the hook length formula.
inline Integer hook_count(const Partition& lam) {
  const Partition conj = conjugate(lam);
  Integer hooks(1);
  for (std::size_t i = 0; i < lam.parts.size(); ++i) {
    for (long j = 0; j < lam.parts[i]; ++j) {
      const long arm = lam.parts[i] - j - 1;
      const long leg = conj.parts[static_cast<std::size_t>(j)] - static_cast<long>(i) - 1;
      hooks *= static_cast<long>(arm + leg + 1);
    }
  }
  return factorial(static_cast<unsigned long>(lam.size())) / hooks;
}

// Enumerate partitions of n with at most `max_part` as first part, invoking
// f on each.
template <typename F>
void for_each_partition_bounded(long n, long max_part, std::vector<long>& stack, F&& f) {
  if (n == 0) {
    Partition p{stack};
    f(p);
    return;
  }
  for (long part = std::min(n, max_part); part >= 1; --part) {
    stack.push_back(part);
    for_each_partition_bounded(n - part, part, stack, f);
    stack.pop_back();
  }
}

}  // namespace detail

// P[lis <= n] over the uniform symmetric group S_N, computed through the
// bijective route: sum of squared standard-tableau counts over shapes with
// first row <= n, divided by N!.
inline Rational lis_law_bijective(long N, long n) {
  if (N < 0 || n < 0) throw domain_error("lis_law_bijective: need N, n >= 0");
  if (N == 0) return Rational(1);
  if (n == 0) return Rational(0);
  if (N > 400) throw resource_error("lis_law_bijective: N too large");
  Integer sum(0);
  std::vector<long> stack;
  detail::for_each_partition_bounded(N, n, stack, [&](const Partition& lam) {
    const Integer f = detail::hook_count(lam);
    sum += f * f;
  });
  Rational r(sum, factorial(static_cast<unsigned long>(N)));
  r.canonicalize();
  return r;
}

// Poisson mixture of the exact LIS laws with certified truncation of the
// Poisson tail below tail_tol.  Error from the truncation is bounded by the
// tail mass itself since every law value lies in [0,1].
inline double poissonized_lis_cdf(double alpha, long n, double tail_tol = 1e-12) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw domain_error("poissonized_lis_cdf: alpha must be positive");
  if (n < 0) throw domain_error("poissonized_lis_cdf: n must be >= 0");
  if (alpha > 64.0)
    throw resource_error("poissonized_lis_cdf: alpha too large for the exact-law route");
  double term = std::exp(-alpha);  // alpha^N e^-alpha / N!
  double acc = term;               // N = 0 contributes law value 1
  long N = 0;
  for (;;) {
    ++N;
    term *= alpha / static_cast<double>(N);
    // remaining tail bound: term * sum_{j>=0} (alpha/(N+1))^j once alpha < N+1
    if (static_cast<double>(N) > alpha) {
      const double r = alpha / static_cast<double>(N + 1);
      if (term / (1.0 - r) < tail_tol) break;
    }
    if (N > 4000) throw accuracy_error("poissonized_lis_cdf: tail not certified", term);
    if (n >= N) {
      acc += term;  // law value is exactly 1 when n >= N
      continue;
    }
    acc += term * to_double(lis_law_bijective(N, n));
  }
  return acc;
}

// Elementary symmetric polynomial e_m over the given list; zero outside
// 0 <= m <= len.
inline Rational elementary_symmetric(const std::vector<Rational>& a, long m) {
  if (m < 0 || m > static_cast<long>(a.size())) return Rational(0);
  std::vector<Rational> e(static_cast<std::size_t>(m) + 1, Rational(0));
  e[0] = 1;
  for (const Rational& v : a)
    for (long j = m; j >= 1; --j)
      e[static_cast<std::size_t>(j)] += v * e[static_cast<std::size_t>(j) - 1];
  return e[static_cast<std::size_t>(m)];
}

// Schur polynomial via the dual Jacobi-Trudi determinant
// s_lambda = det(e_{lambda'_i - i + j}) over an n x n index window.
// Requires lambda_1 <= n; any larger window gives the same value.
inline Rational schur_jacobi_trudi(const Partition& lam, const std::vector<Rational>& a,
                                   long n) {
  validate(lam);
  if (lam.first() > n)
    throw precondition_error("schur_jacobi_trudi: window must be >= first part");
  if (n == 0) return Rational(1);
  const Partition conj = conjugate(lam);
  // precompute elementary symmetric values e_0..e_max once
  const long emax = static_cast<long>(a.size());
  std::vector<Rational> e(static_cast<std::size_t>(emax) + 1, Rational(0));
  e[0] = 1;
  {
    long filled = 0;
    for (const Rational& v : a) {
      ++filled;
      for (long j = std::min<long>(emax, filled); j >= 1; --j)
        e[static_cast<std::size_t>(j)] += v * e[static_cast<std::size_t>(j) - 1];
    }
  }
  auto e_at = [&](long m) -> Rational {
    if (m < 0 || m > emax) return Rational(0);
    return e[static_cast<std::size_t>(m)];
  };
  std::vector<std::vector<Rational>> mat(static_cast<std::size_t>(n),
                                         std::vector<Rational>(static_cast<std::size_t>(n)));
  for (long i = 1; i <= n; ++i) {
    const long ci = (i <= conj.length()) ? conj.parts[static_cast<std::size_t>(i - 1)] : 0;
    for (long j = 1; j <= n; ++j)
      mat[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          e_at(ci - i + j);
  }
  return exact_det(std::move(mat));
}

// Schur polynomial by direct enumeration of semistandard tableaux.
inline Rational schur_tableaux(const Partition& lam, const std::vector<Rational>& a) {
  validate(lam);
  if (lam.size() > 12)
    throw resource_error("schur_tableaux: |lambda| > 12 not enumerable");
  if (a.size() > 5) throw resource_error("schur_tableaux: more than 5 variables");
  const long m = static_cast<long>(a.size());
  if (lam.length() > m) return Rational(0);
  if (lam.parts.empty()) return Rational(1);

  const std::size_t rows = lam.parts.size();
  std::vector<std::vector<int>> t(rows);
  for (std::size_t r = 0; r < rows; ++r)
    t[r].assign(static_cast<std::size_t>(lam.parts[r]), 0);

  Rational total(0);
  // fill cells row-major; entry constraints: weakly increasing along rows,
  // strictly increasing down columns, values in 1..m
  std::function<void(std::size_t, std::size_t, Rational)> fill =
      [&](std::size_t r, std::size_t c, Rational prod) {
        if (r == rows) {
          total += prod;
          return;
        }
        std::size_t nr = r, nc = c + 1;
        if (nc >= t[r].size()) {
          nr = r + 1;
          nc = 0;
        }
        int lo = 1;
        if (c > 0) lo = std::max(lo, t[r][c - 1]);
        if (r > 0 && c < t[r - 1].size()) lo = std::max(lo, t[r - 1][c] + 1);
        for (int v = lo; v <= static_cast<int>(m); ++v) {
          t[r][c] = v;
          fill(nr, nc, prod * a[static_cast<std::size_t>(v - 1)]);
        }
        t[r][c] = 0;
      };
  fill(0, 0, Rational(1));
  return total;
}

// Young tableau with positive integer entries, weakly increasing rows and
// strictly increasing columns.
struct Tableau {
  std::vector<std::vector<int>> rows;

  Partition shape() const {
    Partition p;
    for (const auto& r : rows) p.parts.push_back(static_cast<long>(r.size()));
    return p;
  }
};

// Robinson-Schensted-Knuth correspondence applied to a non-negative integer
// matrix, reading the biword in row-major order.  Returns the insertion and
// recording tableaux (P, Q).
inline std::pair<Tableau, Tableau> rsk(const std::vector<std::vector<long>>& w) {
  const std::size_t rows = w.size();
  for (const auto& r : w) {
    if (r.size() != (rows ? w[0].size() : 0))
      throw precondition_error("rsk: matrix must be rectangular");
    for (long v : r)
      if (v < 0) throw precondition_error("rsk: entries must be >= 0");
  }
  Tableau P, Q;
  auto insert = [&](int jval, int ival) {
    int cur = jval;
    for (std::size_t r = 0;; ++r) {
      if (r == P.rows.size()) {
        P.rows.emplace_back();
        Q.rows.emplace_back();
      }
      auto& row = P.rows[r];
      // bump the leftmost entry strictly greater than cur
      auto it = std::upper_bound(row.begin(), row.end(), cur);
      if (it == row.end()) {
        row.push_back(cur);
        Q.rows[r].push_back(ival);
        return;
      }
      std::swap(cur, *it);
    }
  };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < w[i].size(); ++j)
      for (long rep = 0; rep < w[i][j]; ++rep)
        insert(static_cast<int>(j) + 1, static_cast<int>(i) + 1);
  return {P, Q};
}

// Weight of a partition under the two-sided specialization measure
// prod(1 - a_i b_j) * s_lambda(a) * s_lambda(b); parameters must lie in [0,1).
inline Rational schur_measure_weight(const Partition& lam, const std::vector<Rational>& a,
                                     const std::vector<Rational>& b) {
  validate(lam);
  for (const auto& v : a)
    if (v < 0 || v >= 1) throw domain_error("schur_measure_weight: parameters in [0,1)");
  for (const auto& v : b)
    if (v < 0 || v >= 1) throw domain_error("schur_measure_weight: parameters in [0,1)");
  Rational z(1);
  for (const auto& x : a)
    for (const auto& y : b) z *= Rational(1) - x * y;
  const long window = std::max<long>(lam.first(), 1);
  return z * schur_jacobi_trudi(lam, a, window) * schur_jacobi_trudi(lam, b, window);
}

// Box-counting product: number of plane partitions inside an a x b x c box,
// prod_{i<=a} prod_{j<=b} prod_{k<=c} (i+j+k-1)/(i+j+k-2).
inline Rational macmahon_product(long a, long b, long c) {
  if (a < 0 || b < 0 || c < 0) throw domain_error("macmahon_product: need a,b,c >= 0");
  Rational r(1);
  for (long i = 1; i <= a; ++i)
    for (long j = 1; j <= b; ++j)
      for (long k = 1; k <= c; ++k)
        r *= Rational(i + j + k - 1, i + j + k - 2);
  if (r.get_den() != 1)
    throw accuracy_error("macmahon_product: product failed to be an integer", 0.0);
  return r;
}

// Brute-force count of plane partitions in an a x b x c box: arrays
// (pi_{ij}) <= c with weakly decreasing rows and columns.
inline Rational plane_partition_count(long a, long b, long c) {
  if (a < 0 || b < 0 || c < 0) throw domain_error("plane_partition_count: need >= 0");
  if (a * b > 9 || c > 4)
    throw resource_error("plane_partition_count: box too large to enumerate");
  if (a == 0 || b == 0 || c == 0) return Rational(1);
  const long cells = a * b;
  std::vector<long> v(static_cast<std::size_t>(cells), 0);
  long count = 0;
  for (;;) {
    bool ok = true;
    for (long i = 0; i < a && ok; ++i)
      for (long j = 0; j < b && ok; ++j) {
        const long x = v[static_cast<std::size_t>(i * b + j)];
        if (j + 1 < b && v[static_cast<std::size_t>(i * b + j + 1)] > x) ok = false;
        if (i + 1 < a && v[static_cast<std::size_t>((i + 1) * b + j)] > x) ok = false;
      }
    if (ok) ++count;
    long pos = 0;
    while (pos < cells) {
      if (++v[static_cast<std::size_t>(pos)] <= c) break;
      v[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == cells) break;
  }
  return Rational(count);
}

// Sum of two-sided Schur products over shapes with bounded first row:
// sum_{lambda_1 <= n} s_lambda(a) s_lambda(b).
inline Rational gessel_rhs(long n, const std::vector<Rational>& a,
                           const std::vector<Rational>& b) {
  if (n < 0) throw domain_error("gessel_rhs: n must be >= 0");
  if (n > 6 || a.size() > 3 || b.size() > 3)
    throw resource_error("gessel_rhs: enumeration bounds exceeded");
  const long maxlen = static_cast<long>(std::min(a.size(), b.size()));
  Rational total(1);  // empty shape contributes s_empty * s_empty = 1
  // enumerate shapes with first part <= n and length <= maxlen
  std::function<void(Partition&, long)> rec = [&](Partition& lam, long maxpart) {
    for (long part = maxpart; part >= 1; --part) {
      if (lam.length() >= maxlen) return;
      lam.parts.push_back(part);
      const long window = std::max<long>(lam.first(), 1);
      total += schur_jacobi_trudi(lam, a, window) * schur_jacobi_trudi(lam, b, window);
      rec(lam, part);
      lam.parts.pop_back();
    }
  };
  Partition lam;
  if (maxlen > 0) rec(lam, n);
  return total;
}

}  // namespace kpzlab

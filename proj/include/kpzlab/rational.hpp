#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "kpzlab/errors.hpp"

namespace kpzlab {

// Exact scalar used by every identity-checking routine.  Always canonical
// (gcd(num, den) = 1, den > 0), which mpq_class maintains.
using Rational = mpq_class;
using Integer = mpz_class;

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  if (k > n) return Integer(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Rational rational_pow(const Rational& base, unsigned long e) {
  Rational r(1);
  Rational b = base;
  unsigned long n = e;
  while (n > 0) {
    if (n & 1ul) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// Exact determinant by fraction-preserving Gaussian elimination with row
// swaps on zero pivots.  Size 0 gives 1 (empty product convention).
inline Rational exact_det(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw precondition_error("exact_det: matrix not square");
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// Decimal rendering of an exact rational, round-toward-zero at `digits`
// fractional digits, trailing zeros stripped.  Used for report strings only;
// comparisons are always done on the rationals themselves.
inline std::string to_decimal_string(const Rational& v, int digits = 30) {
  Integer num = v.get_num();
  Integer den = v.get_den();
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  Integer ip = num / den;
  Integer rem = num - ip * den;
  std::string out = sign + ip.get_str();
  if (rem == 0) return out;
  out += ".";
  std::string frac;
  for (int i = 0; i < digits && rem != 0; ++i) {
    rem *= 10;
    Integer d = rem / den;
    frac += d.get_str();
    rem -= d * den;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (frac.empty()) frac = "0";
  return out + frac;
}

inline double to_double(const Rational& v) { return v.get_d(); }

inline Rational rational_abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }

}  // namespace kpzlab

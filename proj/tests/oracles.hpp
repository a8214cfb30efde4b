#pragma once

// Reference computations used only by the tests. They share no code path
// with the library: naive loops, a different inverse algorithm, and MPFR's
// own Bessel routine.

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

namespace pns::oracle {

inline std::int64_t brute_inverse(std::int64_t x, std::int64_t c) {
  for (std::int64_t y = 0; y < c; ++y) {
    if ((x * y) % c == 1 % c) return y;
  }
  return -1;
}

// Direct long double summation over x with the inverse found by search.
inline long double kloosterman_naive(std::int64_t a, std::int64_t b, std::int64_t c) {
  const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
  a = ((a % c) + c) % c;
  b = ((b % c) + c) % c;
  long double sum = 0.0L;
  for (std::int64_t x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    const std::int64_t xi = brute_inverse(x, c);
    sum += std::cos(two_pi * static_cast<long double>((a * x + b * xi) % c) / static_cast<long double>(c));
  }
  return sum;
}

// J_n(x) from MPFR at the given precision, rounded to double.
inline double mpfr_bessel(long n, double x, long precision = 256) {
  mpfr_t v, r;
  mpfr_init2(v, precision);
  mpfr_init2(r, precision);
  mpfr_set_d(v, x, MPFR_RNDN);
  mpfr_jn(r, n, v, MPFR_RNDN);
  const double out = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clear(v);
  mpfr_clear(r);
  return out;
}

}  // namespace pns::oracle

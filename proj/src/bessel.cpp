#include "pns/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pns/errors.hpp"

namespace pns::bessel {

namespace {

constexpr long kBoundPrecision = 64;
constexpr int kMaxRetries = 3;

CertifiedReal pow_ui(CertifiedReal base, unsigned e, long precision) {
  CertifiedReal result = CertifiedReal::exact(1, precision);
  while (e != 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e != 0) base = sqr(base);
  }
  return result;
}

// log2 of the largest series term, and a rough log2 |J_nu(x)|; their
// difference is the number of bits lost to cancellation.
double cancellation_bits(unsigned nu, double x) {
  if (x <= 0.0) return 0.0;
  const double lh = std::log(x / 2.0);
  double best = -HUGE_VAL;
  for (unsigned j = 0;; ++j) {
    const double lt = (nu + 2.0 * j) * lh - std::lgamma(j + 1.0) - std::lgamma(nu + j + 1.0);
    best = std::max(best, lt);
    if (x * x / 4.0 < (j + 1.0) * (nu + j + 1.0)) break;
  }
  const double log_term0 = nu * lh - std::lgamma(nu + 1.0);
  double log_j;
  if (x <= nu) {
    log_j = std::max(log_term0 - x * x / (4.0 * (nu + 1.0)) - 1.0,
                     std::log(0.4) - std::log(std::max(nu, 1u)) / 3.0 + nu * std::log(x / std::max(nu, 1u)));
  } else {
    log_j = 0.5 * std::log(2.0 / (std::numbers::pi * x)) - 20.0 * std::numbers::ln2;
  }
  return std::max(0.0, (best - log_j) / std::numbers::ln2);
}

// Ascending series at an exact point x > 0, evaluated at `working` bits.
CertifiedReal series(unsigned nu, const BigFloat& x, long working) {
  CertifiedReal half_x{BigFloat(x), BigFloat(kRadiusPrecision)};
  half_x = half_x.with_precision(working);
  half_x.mul_2si(-1);
  const CertifiedReal h2 = sqr(half_x);

  BigFloat fact(working);
  const int inexact = mpfr_fac_ui(fact.get(), nu, MPFR_RNDN);
  CertifiedReal factorial(fact, BigFloat(kRadiusPrecision));
  if (inexact != 0) {
    BigFloat err(kRadiusPrecision);
    mpfr_mul_2si(err.get(), fact.get(), -working, MPFR_RNDU);
    factorial.add_error(err);
  }

  CertifiedReal term = pow_ui(half_x, nu, working) / factorial;
  CertifiedReal sum = term;
  const BigFloat h2_mag = h2.mag();
  for (unsigned long j = 0;; ++j) {
    // term_{j+1} = -term_j (x/2)^2 / ((j+1)(nu+j+1))
    const unsigned long denom = (j + 1) * (nu + j + 1);
    term *= h2;
    term.div_ui(denom);
    term = -term;

    // Ratio bound for all later terms.
    BigFloat ratio(kRadiusPrecision);
    mpfr_div_ui(ratio.get(), h2_mag.get(), (j + 2) * (nu + j + 2), MPFR_RNDU);
    if (ratio <= 0.5) {
      // |remainder from term_{j+1} on| <= |term_{j+1}| / (1 - ratio)
      BigFloat rem = term.mag();
      BigFloat one_minus(kRadiusPrecision);
      mpfr_ui_sub(one_minus.get(), 1, ratio.get(), MPFR_RNDD);
      mpfr_div(rem.get(), rem.get(), one_minus.get(), MPFR_RNDU);
      BigFloat goal = sum.mag();
      mpfr_mul_2si(goal.get(), goal.get(), -working - 2, MPFR_RNDD);
      if (rem <= goal || rem.is_zero()) {
        sum.add_error(rem);
        return sum;
      }
    }
    sum += term;
  }
}

bool tight_enough(const CertifiedReal& v, long precision) {
  BigFloat goal(kRadiusPrecision);
  mpfr_abs(goal.get(), v.mid().get(), MPFR_RNDD);
  mpfr_mul_2si(goal.get(), goal.get(), -(precision - 2), MPFR_RNDD);
  return v.rad() <= goal;
}

CertifiedReal point_value(unsigned nu, const BigFloat& x, long precision) {
  if (x.is_zero()) return CertifiedReal::exact(nu == 0 ? 1 : 0, precision);
  long working = precision + 16 + static_cast<long>(std::ceil(cancellation_bits(nu, x.to_double())));
  CertifiedReal value = series(nu, x, working);
  for (int retry = 0; retry < kMaxRetries && !tight_enough(value, precision); ++retry) {
    working += (working - precision) + 64;
    value = series(nu, x, working);
  }
  return value.with_precision(precision);
}

// min(1, (x/2)^mu / mu!), rounded up.
BigFloat power_bound(unsigned mu, const BigFloat& x) {
  BigFloat result(1.0, kBoundPrecision);
  if (mu == 0) return result;
  BigFloat half(kBoundPrecision), fact(kBoundPrecision);
  mpfr_mul_2si(half.get(), x.get(), -1, MPFR_RNDU);
  mpfr_pow_ui(half.get(), half.get(), mu, MPFR_RNDU);
  mpfr_fac_ui(fact.get(), mu, MPFR_RNDD);
  mpfr_div(half.get(), half.get(), fact.get(), MPFR_RNDU);
  if (half < result) result = half;
  return result;
}

void check_argument(unsigned nu, const BigFloat& upper) {
  if (upper > argument_envelope(nu)) {
    throw RangeError("bessel_j: argument exceeds the envelope 4 nu + 40 for nu = " + std::to_string(nu));
  }
}

}  // namespace

double argument_envelope(unsigned nu) { return 4.0 * nu + 40.0; }

CertifiedReal bessel_j(unsigned nu, double x, long precision) {
  if (!(x >= 0.0)) throw PreconditionError("bessel_j: x must be >= 0");
  if (x > argument_envelope(nu)) {
    throw RangeError("bessel_j: argument exceeds the envelope 4 nu + 40 for nu = " + std::to_string(nu));
  }
  return point_value(nu, BigFloat(x, 64), precision);
}

CertifiedReal bessel_j(unsigned nu, const CertifiedReal& x, long precision) {
  if (x.upper().sign() < 0) throw PreconditionError("bessel_j: x must be >= 0");
  check_argument(nu, x.upper());
  if (x.mid().sign() < 0) throw PreconditionError("bessel_j: x midpoint must be >= 0");
  CertifiedReal value = point_value(nu, x.mid(), precision);
  if (x.is_exact()) return value;

  // |J_nu'(t)| = |J_{nu-1}(t) - J_{nu+1}(t)| / 2 with |J_mu(t)| <= min(1, (t/2)^mu / mu!)
  // on [0, hi] (|J_{-1}| = |J_1|).
  const BigFloat hi = x.upper();
  const BigFloat below = power_bound(nu == 0 ? 1 : nu - 1, hi);
  const BigFloat above = power_bound(nu + 1, hi);
  BigFloat slope(kBoundPrecision);
  mpfr_add(slope.get(), below.get(), above.get(), MPFR_RNDU);
  mpfr_mul_2si(slope.get(), slope.get(), -1, MPFR_RNDU);
  mpfr_min(slope.get(), slope.get(), BigFloat(1.0, kBoundPrecision).get(), MPFR_RNDU);
  BigFloat err(kRadiusPrecision);
  mpfr_mul(err.get(), slope.get(), x.rad().get(), MPFR_RNDU);
  value.add_error(err);
  return value;
}

double airy_constant() {
  return std::tgamma(1.0 / 3.0) / (std::pow(48.0, 1.0 / 6.0) * std::numbers::pi);
}

JNuAtNu j_nu_at_nu(unsigned nu, long precision) {
  if (nu < 1) throw PreconditionError("j_nu_at_nu: nu must be >= 1");
  return {bessel_j(nu, static_cast<double>(nu), precision), airy_constant() * std::pow(static_cast<double>(nu), -1.0 / 3.0)};
}

CertifiedReal lower_bound_j(unsigned nu, double delta, long precision) {
  if (nu < 1) throw PreconditionError("lower_bound_j: nu must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("lower_bound_j: delta must lie in (0, 1]");
  const BigFloat j_lower = j_nu_at_nu(nu, precision).value.lower();
  BigFloat power(precision), bound(precision);
  const mpfr_rnd_t power_rnd = j_lower.sign() >= 0 ? MPFR_RNDD : MPFR_RNDU;
  mpfr_pow_ui(power.get(), BigFloat(delta, 64).get(), nu, power_rnd);
  mpfr_mul(bound.get(), j_lower.get(), power.get(), MPFR_RNDD);
  return CertifiedReal(std::move(bound), BigFloat(kRadiusPrecision));
}

BigFloat upper_bound_j(unsigned nu, const BigFloat& x) {
  if (nu < 1) throw PreconditionError("upper_bound_j: nu must be >= 1");
  if (x.sign() < 0) throw PreconditionError("upper_bound_j: x must be >= 0");
  BigFloat result(kBoundPrecision);
  if (x.is_zero()) return result;
  BigFloat half(kBoundPrecision), fact(kBoundPrecision), expo(kBoundPrecision);
  mpfr_mul_2si(half.get(), x.get(), -1, MPFR_RNDU);
  mpfr_pow_ui(result.get(), half.get(), nu, MPFR_RNDU);
  mpfr_fac_ui(fact.get(), nu, MPFR_RNDD);
  mpfr_div(result.get(), result.get(), fact.get(), MPFR_RNDU);
  mpfr_sqr(expo.get(), half.get(), MPFR_RNDU);
  mpfr_exp(expo.get(), expo.get(), MPFR_RNDU);
  mpfr_mul(result.get(), result.get(), expo.get(), MPFR_RNDU);
  return result;
}

BigFloat upper_bound_j(unsigned nu, double x) { return upper_bound_j(nu, BigFloat(x, 64)); }

BigFloat tail_bound(unsigned nu, const BigFloat& delta, std::uint64_t c0) {
  if (nu < 2) throw PreconditionError("tail_bound: nu must be >= 2");
  if (delta.sign() <= 0) throw PreconditionError("tail_bound: delta must be > 0");
  if (c0 < 1) throw PreconditionError("tail_bound: c0 must be >= 1");
  BigFloat x(kBoundPrecision);
  mpfr_mul_ui(x.get(), delta.get(), nu, MPFR_RNDU);

  BigFloat head(kBoundPrecision), fact(kBoundPrecision);
  mpfr_mul_2si(head.get(), x.get(), -1, MPFR_RNDU);
  mpfr_pow_ui(head.get(), head.get(), nu, MPFR_RNDU);
  mpfr_fac_ui(fact.get(), nu, MPFR_RNDD);
  mpfr_div(head.get(), head.get(), fact.get(), MPFR_RNDU);

  BigFloat expo(kBoundPrecision);
  mpfr_div_ui(expo.get(), x.get(), static_cast<unsigned long>(c0), MPFR_RNDU);
  mpfr_sqr(expo.get(), expo.get(), MPFR_RNDU);
  mpfr_mul_2si(expo.get(), expo.get(), -2, MPFR_RNDU);
  mpfr_exp(expo.get(), expo.get(), MPFR_RNDU);

  // c0^-nu + c0^(1-nu) / (nu - 1)
  BigFloat c(kBoundPrecision), s(kBoundPrecision), t(kBoundPrecision);
  mpfr_set_ui(c.get(), c0, MPFR_RNDD);
  mpfr_pow_ui(s.get(), c.get(), nu, MPFR_RNDD);
  mpfr_ui_div(s.get(), 1, s.get(), MPFR_RNDU);
  mpfr_pow_ui(t.get(), c.get(), nu - 1, MPFR_RNDD);
  mpfr_mul_ui(t.get(), t.get(), nu - 1, MPFR_RNDD);
  mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDU);
  mpfr_add(s.get(), s.get(), t.get(), MPFR_RNDU);

  BigFloat result(kBoundPrecision);
  mpfr_mul(result.get(), head.get(), expo.get(), MPFR_RNDU);
  mpfr_mul(result.get(), result.get(), s.get(), MPFR_RNDU);
  return result;
}

BigFloat tail_bound(unsigned nu, double delta, std::uint64_t c0) { return tail_bound(nu, BigFloat(delta, 64), c0); }

}  // namespace pns::bessel

#include "pns/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pns/bessel.hpp"
#include "pns/errors.hpp"
#include "pns/kloosterman.hpp"

namespace pns::poincare {

namespace {

constexpr long kBoundPrecision = 64;

// Residues summed over all Kloosterman sums of one coefficient, and the part
// of it that goes through the ball-arithmetic back end.
constexpr double kMaxFixedWork = 4e9;
constexpr double kMaxPreciseWork = 2e7;

[[noreturn]] void work_limit(const CoefficientQuery& q, std::uint64_t C) {
  throw RangeError("coefficient: target radius needs truncation C = " + std::to_string(C) + " at k = " +
                   std::to_string(q.k()) + ", beyond the work limit; use a larger radius or a larger weight k");
}

// Quantities shared by every term of the c-sum.
struct Setup {
  CertifiedReal argument;   // X = 4 pi sqrt(mn) / N, so term c uses J_nu(X / c)
  CertifiedReal prefactor;  // 2 pi (n/m)^{nu/2}
  BigFloat prefactor_mag;
  BigFloat delta_upper;     // X / nu, rounded up
};

Setup make_setup(const CoefficientQuery& q, long precision) {
  const long wp = precision + 8;
  const CertifiedReal pi = CertifiedReal::pi(wp);
  CertifiedReal x = pi * sqrt(exact_integer(q.m() * q.n(), wp));
  x.mul_si(4);
  x.div_ui(q.N());
  if (x.upper() > bessel::argument_envelope(q.nu())) {
    throw RangeError("coefficient: J argument 4 pi sqrt(mn)/N exceeds the Bessel envelope 4(k-1)+40 at k = " +
                     std::to_string(q.k()) + ", m*n = " + std::to_string(q.m() * q.n()) +
                     "; use a larger weight k or a smaller m*n");
  }

  CertifiedReal prefactor = pi;
  prefactor.mul_2si(1);
  if (q.m() != q.n()) {
    CertifiedReal log_ratio = log(exact_integer(q.n(), wp)) - log(exact_integer(q.m(), wp));
    log_ratio.mul_si(static_cast<long>(q.nu()));
    log_ratio.mul_2si(-1);
    prefactor *= exp(log_ratio);
  }

  BigFloat delta(kBoundPrecision);
  mpfr_div_ui(delta.get(), x.upper().get(), q.nu(), MPFR_RNDU);
  BigFloat mag = prefactor.mag();
  return {x.with_precision(precision), prefactor.with_precision(precision), std::move(mag), std::move(delta)};
}

BigFloat scaled_tail(const Setup& s, unsigned nu, std::uint64_t C) {
  BigFloat t = bessel::tail_bound(nu, s.delta_upper, C + 1);
  mpfr_mul(t.get(), t.get(), s.prefactor_mag.get(), MPFR_RNDU);
  return t;
}

// Least C >= 1 whose tail is below `half_target`, by doubling then bisection.
std::uint64_t choose_truncation(const Setup& s, unsigned nu, const BigFloat& half_target) {
  auto ok = [&](std::uint64_t C) { return scaled_tail(s, nu, C) < half_target; };
  if (ok(1)) return 1;
  std::uint64_t hi = 2;
  while (!ok(hi)) {
    if (hi >= kMaxTruncation) return kMaxTruncation;
    hi = std::min(hi * 2, kMaxTruncation);
  }
  std::uint64_t lo = hi / 2;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

Sign sign_of(const CertifiedReal& v) {
  if (v.is_positive()) return Sign::positive;
  if (v.is_negative()) return Sign::negative;
  return Sign::undetermined;
}

}  // namespace

const char* sign_name(Sign sign) {
  switch (sign) {
    case Sign::positive:
      return "positive";
    case Sign::negative:
      return "negative";
    case Sign::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

CoefficientQuery CoefficientQuery::make(unsigned k, std::uint64_t m, std::uint64_t N, std::uint64_t n) {
  if (k % 2 != 0) throw PreconditionError("weight k must be even, got " + std::to_string(k));
  if (k < 4) throw PreconditionError("weight k must be at least 4, got " + std::to_string(k));
  if (m < 1 || N < 1 || n < 1) throw PreconditionError("m, N and n must all be >= 1");
  return CoefficientQuery(k, m, N, n);
}

CoefficientResult coefficient(const CoefficientQuery& q, long precision, const BigFloat& target_radius) {
  if (target_radius.sign() <= 0) throw PreconditionError("coefficient: target radius must be > 0");
  if (precision < kMinPrecision) throw PreconditionError("coefficient: precision must be >= 53 bits");
  const unsigned nu = q.nu();
  const Setup s = make_setup(q, precision);

  BigFloat half_target(kBoundPrecision);
  mpfr_mul_2si(half_target.get(), target_radius.get(), -1, MPFR_RNDD);
  const std::uint64_t C = choose_truncation(s, nu, half_target);
  BigFloat tail = scaled_tail(s, nu, C);
  const double cd = static_cast<double>(C);
  if (cd * (cd + 1) / 2 * static_cast<double>(q.N()) > kMaxFixedWork) work_limit(q, C);
  double precise_work = 0;

  // Per-term share of target/4 for Kloosterman rounding and skipped terms.
  BigFloat budget(kBoundPrecision);
  mpfr_div_ui(budget.get(), target_radius.get(), static_cast<unsigned long>(4 * C), MPFR_RNDD);
  BigFloat fixed_error(kBoundPrecision);
  mpfr_set_d(fixed_error.get(), kloosterman::ModulusTable::table_entry_error(), MPFR_RNDU);

  // Bits that term c needs, from a floating-point estimate of its size.
  // Only the tightness of the result depends on the estimate.
  const double log2_scale = std::log2(s.prefactor_mag.to_double()) - mpfr_get_exp(budget.get());
  const double x_double = s.argument.to_double();
  auto term_precision = [&](std::uint64_t c) {
    const double est = std::abs(std::cyl_bessel_j(static_cast<double>(nu), x_double / static_cast<double>(c)));
    if (!(est > 0.0) || !std::isfinite(est)) return precision;
    const double bits = std::ceil(std::log2(est) + log2_scale) + 8;
    return std::clamp(static_cast<long>(bits), kMinPrecision, precision);
  };

  CertifiedReal sum(precision);
  for (std::uint64_t c = 1; c <= C; ++c) {
    const long j_precision = term_precision(c);
    CertifiedReal x = s.argument.with_precision(j_precision);
    x.div_ui(c);
    const CertifiedReal j = bessel::bessel_j(nu, x, j_precision);
    BigFloat weight = j.mag();
    mpfr_mul(weight.get(), weight.get(), s.prefactor_mag.get(), MPFR_RNDU);
    if (weight <= budget) {
      // |K(m, n, cN)| / (cN) <= 1
      sum.add_error(j.mag());
      continue;
    }
    mpfr_mul(weight.get(), weight.get(), fixed_error.get(), MPFR_RNDU);
    const long k_precision = weight <= budget ? kMinPrecision : precision;
    const std::uint64_t modulus = c * q.N();
    if (k_precision > kMinPrecision) {
      precise_work += static_cast<double>(modulus);
      if (precise_work > kMaxPreciseWork) work_limit(q, C);
    }
    CertifiedReal term = kloosterman::kloosterman(static_cast<std::int64_t>(q.m()), static_cast<std::int64_t>(q.n()),
                                                  modulus, k_precision)
                             .value;
    term *= j;
    term.div_ui(modulus);
    sum += term;
  }

  CertifiedReal value = sum * s.prefactor;
  if ((q.k() / 2) % 2 == 1) value = -value;
  if (q.m() == q.n()) value += CertifiedReal::exact(1, precision);
  value.add_error(tail);
  const Sign sign = sign_of(value);
  return {q, std::move(value), C, std::move(tail), sign, precision};
}

CoefficientResult coefficient(const CoefficientQuery& q, long precision, double target_radius) {
  return coefficient(q, precision, BigFloat(target_radius, kBoundPrecision));
}

CoefficientResult certify_nonzero(const CoefficientQuery& q, long max_precision, long start_precision) {
  max_precision = std::max(max_precision, kMinPrecision);
  long precision = std::clamp(start_precision, kMinPrecision, max_precision);

  // Scale of the leading term, |2 pi (n/m)^{nu/2} J_nu(X)|; the delta term
  // contributes 1 when m == n.
  BigFloat scale(kBoundPrecision);
  if (q.m() == q.n()) {
    mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
  } else {
    const Setup s = make_setup(q, precision);
    scale = bessel::bessel_j(q.nu(), s.argument, precision).mag();
    mpfr_mul(scale.get(), scale.get(), s.prefactor_mag.get(), MPFR_RNDU);
    if (scale.is_zero()) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
  }
  BigFloat target(kBoundPrecision);
  mpfr_mul_2si(target.get(), scale.get(), -24, MPFR_RNDN);

  CoefficientResult r = coefficient(q, precision, target);
  for (;;) {
    if (r.sign != Sign::undetermined || precision >= max_precision) return r;

    const BigFloat mid_abs = abs(r.value).mid();
    mpfr_mul_2si(target.get(), target.get(), -16, MPFR_RNDN);
    if (!mid_abs.is_zero()) {
      BigFloat shrink(kBoundPrecision);
      mpfr_mul_2si(shrink.get(), mid_abs.get(), -4, MPFR_RNDN);
      if (shrink < target) target = shrink;
    }
    // Enough bits to resolve target relative to the scale of the terms.
    const long needed = static_cast<long>(mpfr_get_exp(scale.get()) - mpfr_get_exp(target.get())) + 32;
    precision = std::min(max_precision, std::max(precision * 2, needed));
    try {
      r = coefficient(q, precision, target);
    } catch (const RangeError&) {
      // Tighter targets are out of reach; the last enclosure stands.
      return r;
    }
  }
}

VanishingReport order_of_vanishing(unsigned k, std::uint64_t m, std::uint64_t N, std::uint64_t n_max,
                                   long max_precision, long start_precision) {
  if (n_max < 1) throw PreconditionError("order_of_vanishing: n_max must be >= 1");
  VanishingReport report;
  report.k = k;
  report.m = m;
  report.N = N;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    CoefficientResult r = certify_nonzero(CoefficientQuery::make(k, m, N, n), max_precision, start_precision);
    report.scanned_to = n;
    report.precision_used = std::max(report.precision_used, r.precision);
    if (r.sign == Sign::undetermined) {
      report.undetermined_indices.push_back(n);
      continue;
    }
    report.first_nonzero_n = n;
    report.v_infinity_upper = n;
    report.witness = std::move(r);
    break;
  }
  return report;
}

std::uint64_t theorem_max_m(int theorem_id, unsigned k, std::uint64_t N) {
  if (theorem_id != 1 && theorem_id != 2 && theorem_id != 5) {
    throw PreconditionError("theorem id must be 1, 2 or 5, got " + std::to_string(theorem_id));
  }
  if (k < 1 || N < 1) throw PreconditionError("theorem range: k and N must be positive");
  const std::uint64_t km1 = k - 1;
  for (long precision = 128;; precision *= 2) {
    const CertifiedReal pi = CertifiedReal::pi(precision);
    CertifiedReal bound = exact_integer(km1 * km1, precision);
    CertifiedReal den = sqr(pi);
    if (theorem_id == 5) {
      bound.mul_si(static_cast<long>(N));
      den.mul_si(32);
    } else {
      bound *= exact_integer(N * N, precision);
      den.mul_si(16);
    }
    bound /= den;
    BigFloat lo = bound.lower(), hi = bound.upper();
    mpfr_floor(lo.get(), lo.get());
    mpfr_floor(hi.get(), hi.get());
    if (lo == hi) return static_cast<std::uint64_t>(std::max(0.0, lo.to_double()));
  }
}

std::vector<std::uint64_t> theorem_indices(int theorem_id, unsigned k, std::uint64_t N) {
  if (theorem_id == 1 && N != 1) throw PreconditionError("theorem 1 is stated for level N = 1");
  if (theorem_id != 1 && !arith::is_squarefree(N)) {
    throw PreconditionError("theorems 2 and 5 need a square-free level, got N = " + std::to_string(N));
  }
  const std::uint64_t m_max = theorem_max_m(theorem_id, k, N);
  std::vector<std::uint64_t> ms;
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    if (theorem_id == 5 && arith::gcd(m, N) != 1) continue;
    ms.push_back(m);
  }
  return ms;
}

std::uint64_t theorem_scan_length(int theorem_id, std::uint64_t N) { return theorem_id == 5 ? 2 * N : 1; }

std::vector<VanishingReport> verify_theorem_range(int theorem_id, unsigned k, std::uint64_t N, long max_precision) {
  std::vector<VanishingReport> reports;
  for (const std::uint64_t m : theorem_indices(theorem_id, k, N)) {
    reports.push_back(order_of_vanishing(k, m, N, theorem_scan_length(theorem_id, N), max_precision));
  }
  return reports;
}

std::uint64_t vanishing_window(std::uint64_t N, double epsilon, unsigned slack) {
  if (N < 2) throw PreconditionError("vanishing window: N must have a prime factor");
  if (!(epsilon > 0.0)) throw PreconditionError("vanishing window: epsilon must be > 0");
  const auto largest = arith::factorize(N).factors.back().prime;
  const double base = std::ceil(std::pow(static_cast<double>(largest), 0.5 + epsilon) - 1e-9);
  return static_cast<std::uint64_t>(base) * slack;
}

VanishingReport verify_vanishing_bound(unsigned k, std::uint64_t m, std::uint64_t N, double epsilon,
                                       long max_precision, unsigned slack) {
  if (!arith::is_squarefree(N)) throw PreconditionError("verify_vanishing_bound: N must be square-free");
  if (arith::gcd(m, N) != 1) throw PreconditionError("verify_vanishing_bound: gcd(m, N) must be 1");
  return order_of_vanishing(k, m, N, vanishing_window(N, epsilon, slack), max_precision);
}

std::vector<arith::i128> tau_oracle(std::uint64_t n_max) {
  if (n_max < 1 || n_max > 10'000) throw RangeError("tau_oracle: n_max must lie in [1, 10^4]");
  using arith::i128;
  const std::size_t len = n_max;  // coefficients of q^0 .. q^{n_max - 1}

  // prod_{j=1}^{len-1} (1 - q^j), truncated.
  std::vector<i128> euler(len, 0);
  euler[0] = 1;
  for (std::size_t j = 1; j < len; ++j) {
    for (std::size_t i = len - 1; i >= j; --i) euler[i] -= euler[i - j];
  }

  auto multiply = [len](const std::vector<i128>& a, const std::vector<i128>& b) {
    std::vector<i128> out(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j < len; ++j) {
        i128 prod;
        if (__builtin_mul_overflow(a[i], b[j], &prod) || __builtin_add_overflow(out[i + j], prod, &out[i + j])) {
          throw RangeError("tau_oracle: 128-bit overflow");
        }
      }
    }
    return out;
  };

  const auto p2 = multiply(euler, euler);
  const auto p4 = multiply(p2, p2);
  const auto p8 = multiply(p4, p4);
  const auto p16 = multiply(p8, p8);
  return multiply(p16, p8);  // tau(n) is the coefficient of q^{n-1} here
}

}  // namespace pns::poincare

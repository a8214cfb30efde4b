#include "pns/certified_real.hpp"

#include <algorithm>
#include <utility>

#include "pns/errors.hpp"

namespace pns {

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(long precision) {
  mpfr_init2(value_, std::max<long>(precision, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, long precision) : BigFloat(precision) {
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  char* buf = nullptr;
  const int len = mpfr_asprintf(&buf, "%.*R*e", std::max(digits - 1, 0), rnd, value_);
  std::string out = len >= 0 ? std::string(buf, static_cast<std::size_t>(len)) : std::string("nan");
  if (buf != nullptr) mpfr_free_str(buf);
  return out;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigFloat& a, double b) {
  if (mpfr_nan_p(a.value_) || b != b) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

// ---------------------------------------------------------------------------
// CertifiedReal

namespace {

BigFloat radius_zero() { return BigFloat(kRadiusPrecision); }

// Upper bound on |x|, rounded into radius precision.
BigFloat abs_up(const BigFloat& x) {
  BigFloat r(kRadiusPrecision);
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}

BigFloat abs_down(const BigFloat& x) {
  BigFloat r(kRadiusPrecision);
  mpfr_abs(r.get(), x.get(), MPFR_RNDD);
  return r;
}

void add_up(BigFloat& acc, const BigFloat& x) { mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDU); }

}  // namespace

CertifiedReal::CertifiedReal(long precision) : mid_(precision), rad_(radius_zero()) {}

CertifiedReal::CertifiedReal(BigFloat mid, BigFloat rad) : mid_(std::move(mid)), rad_(radius_zero()) {
  if (rad.sign() < 0 || !rad.is_finite()) throw PreconditionError("CertifiedReal: radius must be finite and >= 0");
  mpfr_set(rad_.get(), rad.get(), MPFR_RNDU);
}

void CertifiedReal::absorb_rounding() {
  BigFloat err(kRadiusPrecision);
  mpfr_abs(err.get(), mid_.get(), MPFR_RNDU);
  mpfr_mul_2si(err.get(), err.get(), -precision(), MPFR_RNDU);
  add_up(rad_, err);
}

CertifiedReal CertifiedReal::exact(std::int64_t value, long precision) {
  CertifiedReal r(precision);
  if (mpfr_set_si(r.mid_.get(), static_cast<long>(value), MPFR_RNDN) != 0) r.absorb_rounding();
  return r;
}

CertifiedReal exact_integer(std::uint64_t value, long precision) {
  CertifiedReal r(precision);
  BigFloat m(precision);
  const bool inexact = mpfr_set_ui(m.get(), static_cast<unsigned long>(value), MPFR_RNDN) != 0;
  BigFloat rad(kRadiusPrecision);
  if (inexact) {
    mpfr_abs(rad.get(), m.get(), MPFR_RNDU);
    mpfr_mul_2si(rad.get(), rad.get(), -precision, MPFR_RNDU);
  }
  return CertifiedReal(std::move(m), std::move(rad));
}

CertifiedReal CertifiedReal::from_double(double value, long precision) {
  CertifiedReal r(precision);
  if (mpfr_set_d(r.mid_.get(), value, MPFR_RNDN) != 0) r.absorb_rounding();
  return r;
}

CertifiedReal CertifiedReal::pi(long precision) {
  CertifiedReal r(precision);
  if (mpfr_const_pi(r.mid_.get(), MPFR_RNDN) != 0) r.absorb_rounding();
  return r;
}

BigFloat CertifiedReal::lower() const {
  BigFloat r(precision());
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

BigFloat CertifiedReal::upper() const {
  BigFloat r(precision());
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

BigFloat CertifiedReal::mag() const {
  BigFloat r = abs_up(mid_);
  add_up(r, rad_);
  return r;
}

BigFloat CertifiedReal::mig() const {
  BigFloat r = abs_down(mid_);
  mpfr_sub(r.get(), r.get(), rad_.get(), MPFR_RNDD);
  if (r.sign() < 0) mpfr_set_zero(r.get(), 1);
  return r;
}

bool CertifiedReal::contains_zero() const { return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0; }
bool CertifiedReal::is_positive() const { return mid_.sign() > 0 && mpfr_cmp(mid_.get(), rad_.get()) > 0; }
bool CertifiedReal::is_negative() const { return mid_.sign() < 0 && mpfr_cmpabs(mid_.get(), rad_.get()) > 0; }

bool CertifiedReal::overlaps(const CertifiedReal& other) const {
  // Strict: claims overlap only when |mid_a - mid_b| <= rad_a + rad_b for sure.
  BigFloat diff(std::max(precision(), other.precision()) + 2);
  mpfr_sub(diff.get(), mid_.get(), other.mid_.get(), MPFR_RNDA);
  BigFloat sum(kRadiusPrecision);
  mpfr_add(sum.get(), rad_.get(), other.rad_.get(), MPFR_RNDD);
  return mpfr_cmpabs(diff.get(), sum.get()) <= 0;
}

bool CertifiedReal::contains(const BigFloat& value) const {
  BigFloat diff(std::max(precision(), value.precision()) + 2);
  mpfr_sub(diff.get(), mid_.get(), value.get(), MPFR_RNDA);
  return mpfr_cmpabs(diff.get(), rad_.get()) <= 0;
}

bool CertifiedReal::contains(double value) const { return contains(BigFloat(value, 64)); }

bool CertifiedReal::subset_of(const CertifiedReal& outer) const {
  BigFloat diff(std::max(precision(), outer.precision()) + 2);
  mpfr_sub(diff.get(), mid_.get(), outer.mid_.get(), MPFR_RNDA);
  BigFloat need = abs_up(diff);
  add_up(need, rad_);
  return mpfr_cmp(need.get(), outer.rad_.get()) <= 0;
}

CertifiedReal& CertifiedReal::add_error(const BigFloat& err) {
  if (err.sign() < 0) throw PreconditionError("add_error: negative error");
  add_up(rad_, err);
  return *this;
}

CertifiedReal& CertifiedReal::add_error(double err) { return add_error(BigFloat(err, kRadiusPrecision)); }

CertifiedReal CertifiedReal::with_precision(long precision) const {
  CertifiedReal r(precision);
  r.rad_ = rad_;
  if (mpfr_set(r.mid_.get(), mid_.get(), MPFR_RNDN) != 0) r.absorb_rounding();
  return r;
}

std::string CertifiedReal::to_string(int digits) const {
  return mid_.to_string(digits) + " +/- " + rad_.to_string(3, MPFR_RNDU);
}

CertifiedReal CertifiedReal::operator-() const {
  CertifiedReal r(*this);
  mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
  return r;
}

CertifiedReal& CertifiedReal::operator+=(const CertifiedReal& rhs) {
  BigFloat m(std::max(precision(), rhs.precision()));
  const int t = mpfr_add(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  mid_ = std::move(m);
  add_up(rad_, rhs.rad_);
  if (t != 0) absorb_rounding();
  return *this;
}

CertifiedReal& CertifiedReal::operator-=(const CertifiedReal& rhs) {
  BigFloat m(std::max(precision(), rhs.precision()));
  const int t = mpfr_sub(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  mid_ = std::move(m);
  add_up(rad_, rhs.rad_);
  if (t != 0) absorb_rounding();
  return *this;
}

CertifiedReal& CertifiedReal::operator*=(const CertifiedReal& rhs) {
  // |ab - AB| <= |a| rB + |b| rA + rA rB
  BigFloat rad(kRadiusPrecision), tmp(kRadiusPrecision);
  mpfr_mul(rad.get(), rad_.get(), rhs.rad_.get(), MPFR_RNDU);
  mpfr_mul(tmp.get(), mid_.get(), rhs.rad_.get(), MPFR_RNDA);
  mpfr_abs(tmp.get(), tmp.get(), MPFR_RNDU);
  add_up(rad, tmp);
  mpfr_mul(tmp.get(), rhs.mid_.get(), rad_.get(), MPFR_RNDA);
  mpfr_abs(tmp.get(), tmp.get(), MPFR_RNDU);
  add_up(rad, tmp);

  BigFloat m(std::max(precision(), rhs.precision()));
  const int t = mpfr_mul(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  mid_ = std::move(m);
  rad_ = std::move(rad);
  if (t != 0) absorb_rounding();
  return *this;
}

CertifiedReal& CertifiedReal::operator/=(const CertifiedReal& rhs) {
  if (rhs.contains_zero()) throw PreconditionError("division by a ball containing zero");
  // |A/B - a/b| <= (rA + |a/b| rB) / (|b| - rB)
  BigFloat num(kRadiusPrecision), tmp(kRadiusPrecision), den(kRadiusPrecision);
  mpfr_div(tmp.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDA);
  mpfr_abs(tmp.get(), tmp.get(), MPFR_RNDU);
  mpfr_mul(num.get(), tmp.get(), rhs.rad_.get(), MPFR_RNDU);
  add_up(num, rad_);
  mpfr_abs(den.get(), rhs.mid_.get(), MPFR_RNDD);
  mpfr_sub(den.get(), den.get(), rhs.rad_.get(), MPFR_RNDD);
  BigFloat rad(kRadiusPrecision);
  if (den.sign() <= 0) throw PreconditionError("division by a ball containing zero");
  mpfr_div(rad.get(), num.get(), den.get(), MPFR_RNDU);

  BigFloat m(std::max(precision(), rhs.precision()));
  const int t = mpfr_div(m.get(), mid_.get(), rhs.mid_.get(), MPFR_RNDN);
  mid_ = std::move(m);
  rad_ = std::move(rad);
  if (t != 0) absorb_rounding();
  return *this;
}

CertifiedReal& CertifiedReal::mul_si(long k) {
  const int t = mpfr_mul_si(mid_.get(), mid_.get(), k, MPFR_RNDN);
  mpfr_mul_ui(rad_.get(), rad_.get(), static_cast<unsigned long>(k < 0 ? -k : k), MPFR_RNDU);
  if (t != 0) absorb_rounding();
  return *this;
}

CertifiedReal& CertifiedReal::div_ui(unsigned long k) {
  if (k == 0) throw PreconditionError("div_ui: division by zero");
  const int t = mpfr_div_ui(mid_.get(), mid_.get(), k, MPFR_RNDN);
  mpfr_div_ui(rad_.get(), rad_.get(), k, MPFR_RNDU);
  if (t != 0) absorb_rounding();
  return *this;
}

CertifiedReal& CertifiedReal::mul_2si(long e) {
  mpfr_mul_2si(mid_.get(), mid_.get(), e, MPFR_RNDN);
  mpfr_mul_2si(rad_.get(), rad_.get(), e, MPFR_RNDU);
  return *this;
}

// ---------------------------------------------------------------------------
// Elementary functions

namespace {

// Ball from a freshly rounded midpoint: rad = propagated + rounding error.
CertifiedReal make_ball(BigFloat mid, BigFloat propagated, int ternary) {
  if (ternary != 0) {
    BigFloat err(kRadiusPrecision);
    mpfr_abs(err.get(), mid.get(), MPFR_RNDU);
    mpfr_mul_2si(err.get(), err.get(), -mid.precision(), MPFR_RNDU);
    add_up(propagated, err);
  }
  return CertifiedReal(std::move(mid), std::move(propagated));
}

}  // namespace

CertifiedReal abs(const CertifiedReal& x) { return x.mid().sign() < 0 ? -x : x; }

CertifiedReal sqr(const CertifiedReal& x) {
  // |X^2 - m^2| <= 2|m| r + r^2
  BigFloat rad(kRadiusPrecision), tmp(kRadiusPrecision);
  mpfr_mul(rad.get(), x.rad().get(), x.rad().get(), MPFR_RNDU);
  mpfr_mul(tmp.get(), x.mid().get(), x.rad().get(), MPFR_RNDA);
  mpfr_abs(tmp.get(), tmp.get(), MPFR_RNDU);
  mpfr_mul_2ui(tmp.get(), tmp.get(), 1, MPFR_RNDU);
  add_up(rad, tmp);
  BigFloat m(x.precision());
  const int t = mpfr_sqr(m.get(), x.mid().get(), MPFR_RNDN);
  return make_ball(std::move(m), std::move(rad), t);
}

CertifiedReal sqrt(const CertifiedReal& x) {
  if (x.upper().sign() < 0) throw PreconditionError("sqrt of a negative ball");
  const long p = x.precision();
  if (x.is_exact() || mpfr_cmp(x.mid().get(), x.rad().get()) > 0) {
    // |sqrt(X) - sqrt(m)| = |X - m| / (sqrt(X) + sqrt(m)) <= r / sqrt(m)
    BigFloat rad(kRadiusPrecision);
    if (!x.is_exact()) {
      BigFloat root(kRadiusPrecision);
      mpfr_sqrt(root.get(), x.mid().get(), MPFR_RNDD);
      mpfr_div(rad.get(), x.rad().get(), root.get(), MPFR_RNDU);
    }
    BigFloat m(p);
    const int t = mpfr_sqrt(m.get(), x.mid().get(), MPFR_RNDN);
    return make_ball(std::move(m), std::move(rad), t);
  }
  // The ball reaches zero: enclose [0, sqrt(hi)].
  BigFloat hi(kRadiusPrecision);
  mpfr_sqrt(hi.get(), x.upper().get(), MPFR_RNDU);
  mpfr_mul_2si(hi.get(), hi.get(), -1, MPFR_RNDU);
  BigFloat m(p);
  mpfr_set(m.get(), hi.get(), MPFR_RNDN);
  BigFloat rad(kRadiusPrecision);
  mpfr_set(rad.get(), hi.get(), MPFR_RNDU);
  return make_ball(std::move(m), std::move(rad), 1);
}

CertifiedReal exp(const CertifiedReal& x) {
  // |exp(X) - exp(m)| <= exp(m) (exp(r) - 1)
  BigFloat rad(kRadiusPrecision);
  if (!x.is_exact()) {
    BigFloat em(kRadiusPrecision), er(kRadiusPrecision);
    mpfr_exp(em.get(), x.mid().get(), MPFR_RNDU);
    mpfr_expm1(er.get(), x.rad().get(), MPFR_RNDU);
    mpfr_mul(rad.get(), em.get(), er.get(), MPFR_RNDU);
  }
  BigFloat m(x.precision());
  const int t = mpfr_exp(m.get(), x.mid().get(), MPFR_RNDN);
  return make_ball(std::move(m), std::move(rad), t);
}

CertifiedReal log(const CertifiedReal& x) {
  const BigFloat lo = x.lower();
  if (lo.sign() <= 0) throw PreconditionError("log of a ball that is not strictly positive");
  // |log X - log m| <= r / lo
  BigFloat rad(kRadiusPrecision);
  if (!x.is_exact()) {
    BigFloat lo_down(kRadiusPrecision);
    mpfr_set(lo_down.get(), lo.get(), MPFR_RNDD);
    mpfr_div(rad.get(), x.rad().get(), lo_down.get(), MPFR_RNDU);
  }
  BigFloat m(x.precision());
  const int t = mpfr_log(m.get(), x.mid().get(), MPFR_RNDN);
  return make_ball(std::move(m), std::move(rad), t);
}

CertifiedReal cos(const CertifiedReal& x) {
  // cos is 1-Lipschitz.
  BigFloat rad(kRadiusPrecision);
  mpfr_min(rad.get(), x.rad().get(), BigFloat(2.0, kRadiusPrecision).get(), MPFR_RNDU);
  BigFloat m(x.precision());
  const int t = mpfr_cos(m.get(), x.mid().get(), MPFR_RNDN);
  return make_ball(std::move(m), std::move(rad), t);
}

}  // namespace pns

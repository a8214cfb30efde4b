#pragma once

// Midpoint-radius ("ball") arithmetic over MPFR.
//
// A CertifiedReal (mid, rad) stands for every real in [mid - rad, mid + rad].
// Every operation returns a ball enclosing the image of its input balls:
// the midpoint is rounded to nearest at the working precision and the radius
// absorbs both the propagated input radii and that rounding, with all radius
// arithmetic rounded upward.

#include <mpfr.h>

#include <climits>
#include <compare>
#include <cstdint>
#include <string>

namespace pns {

static_assert(sizeof(long) == 8, "MPFR integer conversions assume a 64-bit long");

inline constexpr long kMinPrecision = 53;
inline constexpr long kRadiusPrecision = 53;

// Owning RAII handle around mpfr_t. Copies (construction and assignment)
// take over the source precision, so they are always exact.
class BigFloat {
 public:
  explicit BigFloat(long precision = kMinPrecision);
  BigFloat(double value, long precision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  long precision() const { return static_cast<long>(mpfr_get_prec(value_)); }
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }

  /// Scientific notation with `digits` significant digits, e.g. "-2.4000000e+01".
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;

  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_); }
  friend std::partial_ordering operator<=>(const BigFloat& a, double b);
  friend bool operator==(const BigFloat& a, double b) { return mpfr_cmp_d(a.value_, b) == 0; }

 private:
  mpfr_t value_;
};

class CertifiedReal {
 public:
  explicit CertifiedReal(long precision = kMinPrecision);
  CertifiedReal(BigFloat mid, BigFloat rad);

  static CertifiedReal exact(std::int64_t value, long precision);
  /// Exact when `value` fits in `precision` bits; otherwise rounded with radius.
  static CertifiedReal from_double(double value, long precision);
  static CertifiedReal pi(long precision);

  const BigFloat& mid() const { return mid_; }
  const BigFloat& rad() const { return rad_; }
  long precision() const { return mid_.precision(); }

  BigFloat lower() const;  // mid - rad rounded down
  BigFloat upper() const;  // mid + rad rounded up
  /// Upper bound of |x| over the ball.
  BigFloat mag() const;
  /// Lower bound of |x| over the ball (zero when the ball contains 0).
  BigFloat mig() const;

  bool contains_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  bool is_exact() const { return rad_.is_zero(); }
  bool overlaps(const CertifiedReal& other) const;
  bool contains(const BigFloat& value) const;
  bool contains(double value) const;
  /// True when this ball lies inside `outer`.
  bool subset_of(const CertifiedReal& outer) const;

  /// Widens the radius by a nonnegative amount (rounded up).
  CertifiedReal& add_error(const BigFloat& err);
  CertifiedReal& add_error(double err);
  /// Re-rounds the midpoint to `precision` bits, accounting for the change.
  CertifiedReal with_precision(long precision) const;

  double to_double() const { return mid_.to_double(); }
  /// "<mid> +/- <rad>" in scientific notation.
  std::string to_string(int digits = 17) const;

  CertifiedReal operator-() const;
  CertifiedReal& operator+=(const CertifiedReal& rhs);
  CertifiedReal& operator-=(const CertifiedReal& rhs);
  CertifiedReal& operator*=(const CertifiedReal& rhs);
  CertifiedReal& operator/=(const CertifiedReal& rhs);

  friend CertifiedReal operator+(CertifiedReal a, const CertifiedReal& b) { return a += b; }
  friend CertifiedReal operator-(CertifiedReal a, const CertifiedReal& b) { return a -= b; }
  friend CertifiedReal operator*(CertifiedReal a, const CertifiedReal& b) { return a *= b; }
  friend CertifiedReal operator/(CertifiedReal a, const CertifiedReal& b) { return a /= b; }

  CertifiedReal& mul_si(long k);
  CertifiedReal& div_ui(unsigned long k);
  CertifiedReal& mul_2si(long e);

 private:
  void absorb_rounding();

  BigFloat mid_;
  BigFloat rad_;
};

CertifiedReal abs(const CertifiedReal& x);
CertifiedReal sqr(const CertifiedReal& x);
CertifiedReal sqrt(const CertifiedReal& x);
CertifiedReal exp(const CertifiedReal& x);
/// Requires a strictly positive ball.
CertifiedReal log(const CertifiedReal& x);
CertifiedReal cos(const CertifiedReal& x);

/// Ball for the integer `value` at `precision`, exact when representable.
CertifiedReal exact_integer(std::uint64_t value, long precision);

}  // namespace pns

#pragma once

// Kloosterman sums
//
//   K(a, b, c) = sum over x in (Z/cZ)^* of e((a x + b x^-1) / c)
//
// with certified error, their multiplicative structure, moments, and the
// statistics of Kloosterman angles at prime moduli.
//
// Two evaluation back ends sit behind every entry point:
//   * precision <= 53 bits: a fixed-point cosine table summed exactly in
//     integers by the SIMD gather kernel (see kernels.hpp). Each table entry
//     is within 2^-49 of cos(2 pi t / c), so the radius is phi(c) * 2^-49.
//   * precision  > 53 bits: residues t = a x + b x^-1 mod c are histogrammed
//     exactly, then sum count(t) cos(2 pi t / c) is evaluated in ball
//     arithmetic at the requested precision.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "pns/certified_real.hpp"
#include "pns/kernels.hpp"

namespace pns::kloosterman {

inline constexpr std::uint64_t kMaxModulus = 1ULL << 28;

enum class Route { direct, factored };

const char* route_name(Route route);

struct KloostermanValue {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::uint64_t c = 1;
  CertifiedReal value;
  Route route = Route::direct;
};

// Units of Z/cZ with their inverses and the fixed-point cosine table for one
// modulus. Immutable after construction apart from the lazily filled
// high-precision cosine cache, which is guarded by a mutex.
class ModulusTable {
 public:
  explicit ModulusTable(std::uint64_t c);

  /// Shared instance from a per-thread LRU cache.
  static std::shared_ptr<const ModulusTable> get(std::uint64_t c);

  std::uint64_t modulus() const { return modulus_; }
  std::size_t phi() const { return units_.size(); }
  std::span<const std::uint32_t> units() const { return units_; }
  std::span<const std::uint32_t> inverses() const { return inverses_; }
  kernels::UnitTableView view() const;

  /// Per-entry error bound of the fixed-point cosine table.
  static double table_entry_error();

  /// K(a, b, c) via the fixed-point table; midpoint rounded to `precision`.
  CertifiedReal sum_fixed(std::int64_t a, std::int64_t b, long precision = kMinPrecision) const;
  /// K(a, b, c) in ball arithmetic at `precision` bits.
  CertifiedReal sum_precise(std::int64_t a, std::int64_t b, long precision) const;
  /// Picks the back end from the precision.
  CertifiedReal sum(std::int64_t a, std::int64_t b, long precision) const;

 private:
  const std::vector<CertifiedReal>& cos_table(long precision) const;

  std::uint64_t modulus_;
  std::vector<std::uint32_t> units_;
  std::vector<std::uint32_t> inverses_;
  std::vector<std::int64_t> cos_fixed_;

  mutable std::mutex cache_mutex_;
  mutable std::map<long, std::vector<CertifiedReal>> cos_cache_;
};

KloostermanValue kloosterman_direct(std::int64_t a, std::int64_t b, std::uint64_t c, long precision = kMinPrecision);

/// Splits c into prime-power blocks and multiplies block sums via
/// K(a, b, c1 c2) = K(a c2bar^2, b, c1) K(a c1bar^2, b, c2).
KloostermanValue kloosterman_factored(std::int64_t a, std::int64_t b, std::uint64_t c,
                                      long precision = kMinPrecision);

/// Factored route when c has two or more prime-power blocks, else direct.
KloostermanValue kloosterman(std::int64_t a, std::int64_t b, std::uint64_t c, long precision = kMinPrecision);

/// S_2(m; N) = sum over units n mod N of K(m, n, N)^2.
CertifiedReal second_moment(std::int64_t m, std::uint64_t N, long precision = kMinPrecision);

/// min over 1 <= m <= N of |K(m, 1, N)|, N square-free and at most 10^4.
CertifiedReal epsilon_N(std::uint64_t N, long precision = kMinPrecision);

struct Witness {
  std::uint64_t n = 0;
  KloostermanValue value;
};

/// First n in [1, 2N], n != m, gcd(n, N) = 1, with certified
/// |K(m, n, N)| >= sqrt(N) / 2^(omega(N)/2 + 1). Throws InternalContradiction
/// when no such n exists.
Witness find_large_n(std::int64_t m, std::uint64_t N, long precision = kMinPrecision);

/// Kloosterman angle theta in [0, pi] with K(a, b, p) = 2 sqrt(p) cos(theta).
double angle(std::uint64_t p, std::int64_t a, std::int64_t b, long precision = kMinPrecision);

struct AngleSample {
  std::uint64_t p = 0;
  std::int64_t m = 0;
  std::uint64_t range_end = 0;
  std::vector<std::uint64_t> indices;  // the n of each angle
  std::vector<double> angles;
};

/// Angles theta_{p, m n} for 1 <= n <= I.
AngleSample angle_sample(std::uint64_t p, std::int64_t m, std::uint64_t I, long precision = kMinPrecision);

/// Sato-Tate CDF (theta - sin theta cos theta) / pi on [0, pi].
double sato_tate_cdf(double theta);

/// Two-sided Kolmogorov-Smirnov distance to the Sato-Tate CDF.
double ks_distance(std::span<const double> angles);
double ks_distance(const AngleSample& sample);

/// Scans n = 1..n_limit (n != m, n coprime to N) for the first n with
/// |K(m_i, n, p_i)| >= 2 delta sqrt(p_i) at every prime p_i | N, where
/// K(m, n, N) = prod_i K(m_i, n, p_i). The returned value is that product.
std::optional<Witness> search_st_witness(std::int64_t m, std::uint64_t N, double delta, std::uint64_t n_limit,
                                         long precision = kMinPrecision);

/// The twists m_i above, in increasing prime order.
std::vector<std::uint64_t> prime_twists(std::int64_t m, std::uint64_t N);

}  // namespace pns::kloosterman

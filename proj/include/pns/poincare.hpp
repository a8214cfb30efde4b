#pragma once

// Fourier coefficients of the weight-k Poincare series of index m for
// Gamma_0(N),
//
//   p(m; n) = delta_{m,n} + 2 pi (-1)^{k/2} (n/m)^{(k-1)/2}
//             * sum_{c >= 1} K(m, n, cN) / (cN) * J_{k-1}(4 pi sqrt(mn) / (cN)),
//
// evaluated as certified balls, and the order-of-vanishing scans built on
// them. A coefficient is only ever reported as nonzero with a sign, or as
// undetermined at some precision; exact vanishing is never claimed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pns/arith.hpp"
#include "pns/certified_real.hpp"

namespace pns::poincare {

enum class Sign { positive, negative, undetermined };

const char* sign_name(Sign sign);

// (k, m, N, n) with k even and >= 4; construction enforces it.
class CoefficientQuery {
 public:
  static CoefficientQuery make(unsigned k, std::uint64_t m, std::uint64_t N, std::uint64_t n);

  unsigned k() const { return k_; }
  std::uint64_t m() const { return m_; }
  std::uint64_t N() const { return N_; }
  std::uint64_t n() const { return n_; }
  unsigned nu() const { return k_ - 1; }

  /// Same weight, level and index, different coefficient index.
  CoefficientQuery with_n(std::uint64_t n) const { return make(k_, m_, N_, n); }

 private:
  CoefficientQuery(unsigned k, std::uint64_t m, std::uint64_t N, std::uint64_t n) : k_(k), m_(m), N_(N), n_(n) {}

  unsigned k_;
  std::uint64_t m_, N_, n_;
};

struct CoefficientResult {
  CoefficientQuery query;
  CertifiedReal value;          // includes the tail radius
  std::uint64_t truncation_C = 1;
  BigFloat tail_radius;
  Sign sign = Sign::undetermined;
  long precision = 0;
};

inline constexpr std::uint64_t kMaxTruncation = 1'000'000;

/// Certified p(m; n). The c-sum runs to the least C whose explicit tail
/// 2 pi (n/m)^{(k-1)/2} tail_bound(k-1, delta, C+1) is below target/2.
/// Throws RangeError when the Kloosterman work that C implies is beyond a
/// fixed limit (low weight with a tiny target radius).
CoefficientResult coefficient(const CoefficientQuery& query, long precision, const BigFloat& target_radius);
CoefficientResult coefficient(const CoefficientQuery& query, long precision, double target_radius);

/// Re-evaluates with doubling precision and shrinking target radius until
/// the sign is certified, `max_precision` is exceeded or the target radius
/// runs into the work limit of coefficient().
CoefficientResult certify_nonzero(const CoefficientQuery& query, long max_precision, long start_precision = 64);

struct VanishingReport {
  unsigned k = 0;
  std::uint64_t m = 0;
  std::uint64_t N = 0;
  std::uint64_t scanned_to = 0;
  std::optional<std::uint64_t> first_nonzero_n;
  std::optional<std::uint64_t> v_infinity_upper;
  std::vector<std::uint64_t> undetermined_indices;
  std::optional<CoefficientResult> witness;  // the coefficient at first_nonzero_n
  long precision_used = 0;
};

/// Scans n = 1..n_max and stops at the first certified-nonzero coefficient.
VanishingReport order_of_vanishing(unsigned k, std::uint64_t m, std::uint64_t N, std::uint64_t n_max,
                                   long max_precision, long start_precision = 64);

/// Largest m admitted by theorem 1, 2 or 5 at weight k and level N:
///   1, 2: 16 pi^2 m <= (k-1)^2 N^2      5: 32 pi^2 m <= N (k-1)^2
std::uint64_t theorem_max_m(int theorem_id, unsigned k, std::uint64_t N);

/// Every admissible m (theorem 5 also needs gcd(m, N) = 1). Validates the
/// level: theorem 1 requires N = 1, theorems 2 and 5 a square-free N.
std::vector<std::uint64_t> theorem_indices(int theorem_id, unsigned k, std::uint64_t N);

/// n_max used per m: 1 for theorems 1 and 2, 2N for theorem 5.
std::uint64_t theorem_scan_length(int theorem_id, std::uint64_t N);

std::vector<VanishingReport> verify_theorem_range(int theorem_id, unsigned k, std::uint64_t N, long max_precision);

inline constexpr unsigned kDefaultSlack = 4;

/// Window ceil(p_r^{1/2 + epsilon}) * slack, p_r the largest prime of N.
std::uint64_t vanishing_window(std::uint64_t N, double epsilon, unsigned slack = kDefaultSlack);

VanishingReport verify_vanishing_bound(unsigned k, std::uint64_t m, std::uint64_t N, double epsilon,
                                       long max_precision, unsigned slack = kDefaultSlack);

/// tau(1..n_max) from q prod_{j >= 1} (1 - q^j)^24 in exact integers.
std::vector<arith::i128> tau_oracle(std::uint64_t n_max);

}  // namespace pns::poincare

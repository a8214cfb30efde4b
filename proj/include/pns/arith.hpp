#pragma once

// Exact integer and modular arithmetic shared by the analytic modules.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pns::arith {

using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr std::uint64_t kFactorizeCap = 1'000'000'000'000ULL;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  std::uint64_t value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n = product of prime^exponent over `factors`, primes strictly increasing.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  std::uint64_t reconstruct() const;
};

/// Trial division with a 2,3,5 wheel. Throws RangeError outside [1, 10^12].
Factorization factorize(std::uint64_t n);

unsigned omega(std::uint64_t n);
bool is_squarefree(std::uint64_t n);
bool is_prime(std::uint64_t n);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t euler_phi(std::uint64_t n);

/// Least nonnegative residue of x mod c (c >= 1), valid for negative x.
std::uint64_t mod(std::int64_t x, std::uint64_t c);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Inverse of x modulo c normalised to [1, c]; returns 1 when c == 1.
/// Throws NotInvertibleError when gcd(x, c) != 1.
std::uint64_t mod_inverse(std::int64_t x, std::uint64_t c);

std::string to_string(i128 v);

}  // namespace pns::arith

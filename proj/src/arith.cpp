#include "pns/arith.hpp"

#include <numeric>

#include "pns/errors.hpp"

namespace pns::arith {

std::uint64_t PrimePower::value() const {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < exponent; ++i) v *= prime;
  return v;
}

std::uint64_t Factorization::reconstruct() const {
  std::uint64_t v = 1;
  for (const auto& f : factors) v *= f.value();
  return v;
}

namespace {

void strip(std::uint64_t& n, std::uint64_t p, std::vector<PrimePower>& out) {
  if (n % p != 0) return;
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  out.push_back({p, e});
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  if (n < 1 || n > kFactorizeCap) {
    throw RangeError("factorize: n must lie in [1, 10^12], got " + std::to_string(n));
  }
  Factorization result;
  result.n = n;
  strip(n, 2, result.factors);
  strip(n, 3, result.factors);
  strip(n, 5, result.factors);
  // Residues mod 30 coprime to 30, as gaps starting from 7.
  static constexpr unsigned kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t p = 7;
  for (unsigned i = 0; p * p <= n; p += kWheel[i], i = (i + 1) % 8) {
    strip(n, p, result.factors);
  }
  if (n > 1) result.factors.push_back({n, 1});
  return result;
}

unsigned omega(std::uint64_t n) {
  return static_cast<unsigned>(factorize(n).factors.size());
}

bool is_squarefree(std::uint64_t n) {
  for (const auto& f : factorize(n).factors) {
    if (f.exponent != 1) return false;
  }
  return true;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  const auto f = factorize(n);
  return f.factors.size() == 1 && f.factors.front().exponent == 1;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = n;
  for (const auto& f : factorize(n).factors) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

std::uint64_t mod(std::int64_t x, std::uint64_t c) {
  const auto r = static_cast<i128>(x) % static_cast<i128>(c);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<i128>(c) : r);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % c);
}

std::uint64_t mod_inverse(std::int64_t x, std::uint64_t c) {
  if (c == 0) throw PreconditionError("mod_inverse: modulus must be >= 1");
  if (c == 1) return 1;
  // Extended Euclid on (x mod c, c) with signed 128-bit cofactors.
  i128 r0 = static_cast<i128>(c), r1 = static_cast<i128>(mod(x, c));
  i128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) {
    throw NotInvertibleError("mod_inverse: gcd(" + std::to_string(x) + ", " + std::to_string(c) +
                             ") != 1");
  }
  i128 inv = s0 % static_cast<i128>(c);
  if (inv <= 0) inv += static_cast<i128>(c);
  return static_cast<std::uint64_t>(inv);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string digits;
  while (u != 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  return neg ? "-" + digits : digits;
}

}  // namespace pns::arith

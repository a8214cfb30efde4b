#include "pns/kloosterman.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numbers>
#include <string>
#include <unordered_map>

#include "pns/arith.hpp"
#include "pns/errors.hpp"

namespace pns::kloosterman {

namespace {

using arith::i128;

// Per-thread table cache: at most this many tables and this many residues
// in total (about 16 bytes each).
constexpr std::size_t kCacheSlots = 4096;
constexpr std::uint64_t kCacheEntries = std::uint64_t{1} << 22;

// Exact conversion of an integer multiple of 2^-52 to a ball at `precision`.
CertifiedReal from_fixed(i128 sum, long precision) {
  BigFloat exact(192);
  const auto hi = static_cast<std::int64_t>(sum >> 64);
  const auto lo = static_cast<std::uint64_t>(sum & ~std::uint64_t{0});
  mpfr_set_si(exact.get(), static_cast<long>(hi), MPFR_RNDN);
  mpfr_mul_2ui(exact.get(), exact.get(), 64, MPFR_RNDN);
  mpfr_add_ui(exact.get(), exact.get(), static_cast<unsigned long>(lo), MPFR_RNDN);
  mpfr_mul_2si(exact.get(), exact.get(), -kernels::kTableFractionBits, MPFR_RNDN);
  return CertifiedReal(std::move(exact), BigFloat(kRadiusPrecision)).with_precision(precision);
}

void check_modulus(std::uint64_t c) {
  if (c < 1 || c > kMaxModulus) {
    throw RangeError("Kloosterman modulus must lie in [1, 2^28], got " + std::to_string(c));
  }
}

}  // namespace

const char* route_name(Route route) { return route == Route::direct ? "direct" : "factored"; }

ModulusTable::ModulusTable(std::uint64_t c) : modulus_(c) {
  check_modulus(c);
  std::vector<std::uint8_t> is_unit(c, 1);
  if (c > 1) {
    for (const auto& f : arith::factorize(c).factors) {
      for (std::uint64_t x = 0; x < c; x += f.prime) is_unit[x] = 0;
    }
  }
  units_.reserve(c);
  for (std::uint64_t x = 0; x < c; ++x) {
    if (is_unit[x]) units_.push_back(static_cast<std::uint32_t>(x));
  }
  // Batch inversion: one extended Euclid, then prefix products walked back.
  const std::size_t count = units_.size();
  std::vector<std::uint64_t> prefix(count);
  std::uint64_t acc = 1 % c;
  for (std::size_t i = 0; i < count; ++i) {
    acc = acc * units_[i] % c;
    prefix[i] = acc;
  }
  inverses_.resize(count);
  std::uint64_t inv = arith::mod_inverse(static_cast<std::int64_t>(acc), c);
  for (std::size_t i = count; i-- > 0;) {
    inverses_[i] = static_cast<std::uint32_t>(i > 0 ? inv * prefix[i - 1] % c : inv % c);
    inv = inv * units_[i] % c;
  }
  // cos(2 pi t / c) for t <= c/2, mirrored; theta <= pi keeps the argument
  // error within 3.01 u pi, cos adds at most 1 ulp, the fixed-point rounding
  // half a unit of 2^-52. Total < 16 u = 2^-49.
  cos_fixed_.resize(c);
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale = std::ldexp(1.0, kernels::kTableFractionBits);
  for (std::uint64_t t = 0; t <= c / 2; ++t) {
    const double theta = (two_pi * static_cast<double>(t)) / static_cast<double>(c);
    const auto v = static_cast<std::int64_t>(std::llrint(std::cos(theta) * scale));
    cos_fixed_[t] = v;
    cos_fixed_[(c - t) % c] = v;
  }
}

std::shared_ptr<const ModulusTable> ModulusTable::get(std::uint64_t c) {
  thread_local std::list<std::shared_ptr<const ModulusTable>> cache;
  thread_local std::unordered_map<std::uint64_t, std::list<std::shared_ptr<const ModulusTable>>::iterator> index;
  thread_local std::uint64_t cached_entries = 0;
  if (const auto hit = index.find(c); hit != index.end()) {
    cache.splice(cache.begin(), cache, hit->second);
    return cache.front();
  }
  cache.push_front(std::make_shared<const ModulusTable>(c));
  index[c] = cache.begin();
  cached_entries += c;
  while (cache.size() > 1 && (cache.size() > kCacheSlots || cached_entries > kCacheEntries)) {
    cached_entries -= cache.back()->modulus();
    index.erase(cache.back()->modulus());
    cache.pop_back();
  }
  return cache.front();
}

kernels::UnitTableView ModulusTable::view() const {
  return {static_cast<std::uint32_t>(modulus_), units_, inverses_, cos_fixed_};
}

double ModulusTable::table_entry_error() { return std::ldexp(1.0, -49); }

CertifiedReal ModulusTable::sum_fixed(std::int64_t a, std::int64_t b, long precision) const {
  const auto ar = static_cast<std::uint32_t>(arith::mod(a, modulus_));
  const auto br = static_cast<std::uint32_t>(arith::mod(b, modulus_));
  CertifiedReal value = from_fixed(kernels::gather_sum(view(), ar, br), precision);
  if (modulus_ > 1) {
    BigFloat err(kRadiusPrecision);
    mpfr_set_ui(err.get(), static_cast<unsigned long>(phi()), MPFR_RNDU);
    mpfr_mul_2si(err.get(), err.get(), -49, MPFR_RNDU);
    value.add_error(err);
  }
  return value;
}

const std::vector<CertifiedReal>& ModulusTable::cos_table(long precision) const {
  std::lock_guard lock(cache_mutex_);
  auto it = cos_cache_.find(precision);
  if (it != cos_cache_.end()) return it->second;
  std::vector<CertifiedReal> table;
  table.reserve(modulus_ / 2 + 1);
  const long working = precision + 16;
  CertifiedReal two_pi_over_c = CertifiedReal::pi(working);
  two_pi_over_c.mul_2si(1);
  two_pi_over_c /= exact_integer(modulus_, working);
  for (std::uint64_t t = 0; t <= modulus_ / 2; ++t) {
    CertifiedReal theta = two_pi_over_c * exact_integer(t, working);
    table.push_back(cos(theta).with_precision(precision));
  }
  return cos_cache_.emplace(precision, std::move(table)).first->second;
}

CertifiedReal ModulusTable::sum_precise(std::int64_t a, std::int64_t b, long precision) const {
  const std::uint64_t c = modulus_;
  if (c == 1) return CertifiedReal::exact(1, precision);
  const std::uint64_t ar = arith::mod(a, c), br = arith::mod(b, c);
  std::vector<std::uint32_t> count(c, 0);
  for (std::size_t i = 0; i < units_.size(); ++i) {
    ++count[(ar * units_[i] + br * inverses_[i]) % c];
  }
  const auto& table = cos_table(precision);
  CertifiedReal total = CertifiedReal::exact(count[0], precision);
  for (std::uint64_t t = 1; t <= c / 2; ++t) {
    const std::uint64_t weight = (2 * t == c) ? count[t] : count[t] + count[c - t];
    if (weight == 0) continue;
    CertifiedReal term = table[t];
    term.mul_si(static_cast<long>(weight));
    total += term;
  }
  return total;
}

CertifiedReal ModulusTable::sum(std::int64_t a, std::int64_t b, long precision) const {
  if (precision < kMinPrecision) throw PreconditionError("Kloosterman precision must be >= 53 bits");
  return precision <= kMinPrecision ? sum_fixed(a, b, precision) : sum_precise(a, b, precision);
}

KloostermanValue kloosterman_direct(std::int64_t a, std::int64_t b, std::uint64_t c, long precision) {
  check_modulus(c);
  if (c == 1) return {a, b, c, CertifiedReal::exact(1, precision), Route::direct};
  return {a, b, c, ModulusTable::get(c)->sum(a, b, precision), Route::direct};
}

KloostermanValue kloosterman_factored(std::int64_t a, std::int64_t b, std::uint64_t c, long precision) {
  check_modulus(c);
  const auto blocks = arith::factorize(c).factors;
  CertifiedReal value = CertifiedReal::exact(1, precision);
  std::uint64_t a_rest = arith::mod(a, c);
  std::uint64_t rest = c;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::uint64_t q = blocks[i].value();
    if (i + 1 == blocks.size()) {
      value *= kloosterman_direct(static_cast<std::int64_t>(a_rest), b, q, precision).value;
      break;
    }
    const std::uint64_t others = rest / q;
    const std::uint64_t inv_others = arith::mod_inverse(static_cast<std::int64_t>(others % q), q);
    const std::uint64_t a_q = arith::mulmod(a_rest % q, arith::mulmod(inv_others, inv_others, q), q);
    value *= kloosterman_direct(static_cast<std::int64_t>(a_q), b, q, precision).value;
    const std::uint64_t inv_q = arith::mod_inverse(static_cast<std::int64_t>(q % others), others);
    a_rest = arith::mulmod(a_rest % others, arith::mulmod(inv_q, inv_q, others), others);
    rest = others;
  }
  return {a, b, c, std::move(value), Route::factored};
}

KloostermanValue kloosterman(std::int64_t a, std::int64_t b, std::uint64_t c, long precision) {
  if (c > 1 && arith::factorize(c).factors.size() > 1) return kloosterman_factored(a, b, c, precision);
  return kloosterman_direct(a, b, c, precision);
}

CertifiedReal second_moment(std::int64_t m, std::uint64_t N, long precision) {
  check_modulus(N);
  const auto table = ModulusTable::get(N);
  CertifiedReal total(precision);
  for (const std::uint32_t n : table->units()) {
    total += sqr(N == 1 ? CertifiedReal::exact(1, precision) : table->sum(m, n, precision));
  }
  return total;
}

CertifiedReal epsilon_N(std::uint64_t N, long precision) {
  if (N > 10'000) throw RangeError("epsilon_N: N must be at most 10^4");
  if (N < 1 || !arith::is_squarefree(N)) {
    throw PreconditionError("epsilon_N: N must be square-free, got " + std::to_string(N));
  }
  // Certified minimum of |K(m, 1, N)|: [min lower, min upper].
  std::optional<BigFloat> lo, hi;
  for (std::uint64_t m = 1; m <= N; ++m) {
    const CertifiedReal k = abs(kloosterman_direct(static_cast<std::int64_t>(m), 1, N, precision).value);
    BigFloat l = k.lower(), u = k.upper();
    if (!lo || l < *lo) lo = std::move(l);
    if (!hi || u < *hi) hi = std::move(u);
  }
  BigFloat mid(precision);
  mpfr_add(mid.get(), lo->get(), hi->get(), MPFR_RNDN);
  mpfr_mul_2si(mid.get(), mid.get(), -1, MPFR_RNDN);
  BigFloat rad(kRadiusPrecision), other(kRadiusPrecision);
  mpfr_sub(rad.get(), mid.get(), lo->get(), MPFR_RNDU);
  mpfr_sub(other.get(), hi->get(), mid.get(), MPFR_RNDU);
  mpfr_max(rad.get(), rad.get(), other.get(), MPFR_RNDU);
  return CertifiedReal(std::move(mid), std::move(rad));
}

Witness find_large_n(std::int64_t m, std::uint64_t N, long precision) {
  check_modulus(N);
  if (!arith::is_squarefree(N)) throw PreconditionError("find_large_n: N must be square-free");
  if (arith::gcd(arith::mod(m, N), N) != 1) throw PreconditionError("find_large_n: gcd(m, N) must be 1");
  // |K|^2 >= N / 2^(omega + 2) is the squared threshold, exact in binary.
  BigFloat threshold_sq(128);
  mpfr_set_ui(threshold_sq.get(), N, MPFR_RNDU);
  mpfr_mul_2si(threshold_sq.get(), threshold_sq.get(), -static_cast<long>(arith::omega(N)) - 2, MPFR_RNDU);
  for (std::uint64_t n = 1; n <= 2 * N; ++n) {
    if (static_cast<std::int64_t>(n) == m || arith::gcd(n, N) != 1) continue;
    KloostermanValue k = kloosterman_direct(m, static_cast<std::int64_t>(n), N, precision);
    BigFloat low = k.value.mig();
    mpfr_sqr(low.get(), low.get(), MPFR_RNDD);
    if (low >= threshold_sq) return {n, std::move(k)};
  }
  throw InternalContradiction("find_large_n: no n <= 2N with a large Kloosterman sum for m = " + std::to_string(m) +
                              ", N = " + std::to_string(N));
}

namespace {

double angle_from(const CertifiedReal& k, std::uint64_t p) {
  CertifiedReal ratio = k / sqrt(exact_integer(4 * p, k.precision()));
  if (ratio.lower() > 1.0 || ratio.upper() < -1.0) {
    throw InternalContradiction("Kloosterman sum exceeds the Weil bound 2 sqrt(p) at p = " + std::to_string(p));
  }
  return std::acos(std::clamp(ratio.to_double(), -1.0, 1.0));
}

void check_weil_args(std::uint64_t p, std::int64_t a, std::int64_t b) {
  if (!arith::is_prime(p)) throw PreconditionError("Kloosterman angle: modulus " + std::to_string(p) + " is not prime");
  if (arith::mod(a, p) == 0 || arith::mod(b, p) == 0) {
    throw PreconditionError("Kloosterman angle: p must not divide a b");
  }
}

}  // namespace

double angle(std::uint64_t p, std::int64_t a, std::int64_t b, long precision) {
  check_weil_args(p, a, b);
  return angle_from(kloosterman_direct(a, b, p, precision).value, p);
}

AngleSample angle_sample(std::uint64_t p, std::int64_t m, std::uint64_t I, long precision) {
  check_weil_args(p, m, 1);
  if (I < 1 || I > p - 1) throw PreconditionError("angle_sample: range end must satisfy 1 <= I <= p - 1");
  const auto table = ModulusTable::get(p);
  AngleSample sample{p, m, I, {}, {}};
  sample.indices.reserve(I);
  sample.angles.reserve(I);
  for (std::uint64_t n = 1; n <= I; ++n) {
    if (n % p == 0) continue;
    sample.indices.push_back(n);
    sample.angles.push_back(angle_from(table->sum(m, static_cast<std::int64_t>(n), precision), p));
  }
  return sample;
}

double sato_tate_cdf(double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= std::numbers::pi) return 1.0;
  return (theta - std::sin(theta) * std::cos(theta)) / std::numbers::pi;
}

double ks_distance(std::span<const double> angles) {
  if (angles.empty()) throw PreconditionError("ks_distance: empty sample");
  std::vector<double> sorted(angles.begin(), angles.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = sato_tate_cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_distance(const AngleSample& sample) { return ks_distance(sample.angles); }

std::vector<std::uint64_t> prime_twists(std::int64_t m, std::uint64_t N) {
  std::vector<std::uint64_t> twists;
  for (const auto& f : arith::factorize(N).factors) {
    const std::uint64_t p = f.prime;
    const std::uint64_t inv = arith::mod_inverse(static_cast<std::int64_t>((N / p) % p), p);
    twists.push_back(arith::mulmod(arith::mod(m, p), arith::mulmod(inv, inv, p), p));
  }
  return twists;
}

std::optional<Witness> search_st_witness(std::int64_t m, std::uint64_t N, double delta, std::uint64_t n_limit,
                                         long precision) {
  check_modulus(N);
  if (!arith::is_squarefree(N)) throw PreconditionError("search_st_witness: N must be square-free");
  if (arith::gcd(arith::mod(m, N), N) != 1) throw PreconditionError("search_st_witness: gcd(m, N) must be 1");
  if (!(delta > 0.0)) throw PreconditionError("search_st_witness: delta must be positive");

  const auto primes = arith::factorize(N).factors;
  const auto twists = prime_twists(m, N);
  // Squared thresholds 4 delta^2 p, rounded up.
  std::vector<BigFloat> thresholds;
  for (const auto& f : primes) {
    BigFloat t(128);
    mpfr_set_d(t.get(), delta, MPFR_RNDU);
    mpfr_sqr(t.get(), t.get(), MPFR_RNDU);
    mpfr_mul_ui(t.get(), t.get(), static_cast<unsigned long>(4 * f.prime), MPFR_RNDU);
    thresholds.push_back(std::move(t));
  }

  for (std::uint64_t n = 1; n <= n_limit; ++n) {
    if (static_cast<std::int64_t>(n) == m || arith::gcd(n, N) != 1) continue;
    CertifiedReal product = CertifiedReal::exact(1, precision);
    bool large = true;
    for (std::size_t i = 0; i < primes.size() && large; ++i) {
      const CertifiedReal k =
          kloosterman_direct(static_cast<std::int64_t>(twists[i]), static_cast<std::int64_t>(n), primes[i].prime,
                             precision)
              .value;
      BigFloat low = k.mig();
      mpfr_sqr(low.get(), low.get(), MPFR_RNDD);
      large = low >= thresholds[i];
      product *= k;
    }
    if (large) return Witness{n, {m, static_cast<std::int64_t>(n), N, std::move(product), Route::factored}};
  }
  return std::nullopt;
}

}  // namespace pns::kloosterman

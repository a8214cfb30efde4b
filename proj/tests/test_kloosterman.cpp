#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pns/arith.hpp"
#include "pns/errors.hpp"
#include "pns/kloosterman.hpp"

using namespace pns;
using namespace pns::kloosterman;

TEST_CASE("direct route examples") {
  const auto k111 = kloosterman_direct(1, 1, 1);
  CHECK(k111.value.is_exact());
  CHECK(k111.value.mid() == 1.0);
  CHECK(k111.route == Route::direct);

  const auto k113 = kloosterman_direct(1, 1, 3);
  CHECK(k113.value.contains(-1.0));
  CHECK(k113.value.rad() < 1e-14);

  // 2 + 2 cos(4 pi / 5)
  const auto k115 = kloosterman_direct(1, 1, 5);
  CHECK(k115.value.contains(2.0 + 2.0 * std::cos(4.0 * std::numbers::pi / 5.0)));
  CHECK(k115.value.to_double() == doctest::Approx(0.3819660112501051).epsilon(1e-14));
}

TEST_CASE("direct route agrees with the naive oracle at both back ends") {
  std::mt19937_64 rng(1);
  for (std::int64_t c = 1; c <= 120; ++c) {
    std::uniform_int_distribution<std::int64_t> r(-3 * c, 3 * c);
    for (int t = 0; t < 3; ++t) {
      const std::int64_t a = r(rng), b = r(rng);
      const double expected = static_cast<double>(oracle::kloosterman_naive(a, b, c));
      const auto fast = kloosterman_direct(a, b, static_cast<std::uint64_t>(c), 53);
      const auto precise = kloosterman_direct(a, b, static_cast<std::uint64_t>(c), 160);
      CAPTURE(a);
      CAPTURE(b);
      CAPTURE(c);
      // The oracle carries long double error ~ c * 1e-18.
      REQUIRE(std::abs(fast.value.to_double() - expected) <= fast.value.rad().to_double() + 1e-15 * c);
      REQUIRE(std::abs(precise.value.to_double() - expected) <= 1e-15 * c);
      REQUIRE(precise.value.rad() < 1e-40);
      REQUIRE(fast.value.overlaps(precise.value));
    }
  }
}

TEST_CASE("factored route examples") {
  const auto direct15 = kloosterman_direct(1, 1, 15);
  const auto factored15 = kloosterman_factored(1, 1, 15);
  CHECK(factored15.route == Route::factored);
  CHECK(factored15.value.overlaps(direct15.value));
  CHECK(direct15.value.to_double() == doctest::Approx(-2.618033988749895));

  for (std::uint64_t p : {2u, 3u, 5u, 101u, 9973u}) {
    const auto d = kloosterman_direct(3, 7, p);
    const auto f = kloosterman_factored(3, 7, p);
    CHECK(d.value.mid() == f.value.mid());
    CHECK(d.value.rad() == f.value.rad());
  }

  // 6 = 2 * 3: K(7 * 3bar^2, 3, 2) K(7 * 2bar^2, 3, 3) = K(1,3,2) K(1,3,3)
  const auto f6 = kloosterman_factored(7, 3, 6);
  CHECK(f6.value.contains(-1.0));
  CHECK(f6.value.overlaps(kloosterman_direct(7, 3, 6).value));
  const auto manual = kloosterman_direct(1, 3, 2).value * kloosterman_direct(1, 3, 3).value;
  CHECK(manual.overlaps(f6.value));
}

TEST_CASE("twisted multiplicativity on square-free and prime-power moduli") {
  std::mt19937_64 rng(3);
  for (std::uint64_t c = 2; c <= 400; ++c) {
    std::uniform_int_distribution<std::int64_t> r(0, static_cast<std::int64_t>(c) * 2);
    for (int t = 0; t < 3; ++t) {
      const std::int64_t a = r(rng), b = r(rng);
      REQUIRE(kloosterman_direct(a, b, c).value.overlaps(kloosterman_factored(a, b, c).value));
    }
  }
}

TEST_CASE("symmetry, scaling and the trivial bound") {
  std::mt19937_64 rng(5);
  for (std::uint64_t c = 1; c <= 500; c += 3) {
    std::uniform_int_distribution<std::int64_t> r(0, static_cast<std::int64_t>(c) * 3);
    const std::int64_t a = r(rng), b = r(rng);
    const auto kab = kloosterman_direct(a, b, c).value;
    REQUIRE(kab.overlaps(kloosterman_direct(b, a, c).value));
    REQUIRE(kab.mig() <= static_cast<double>(arith::euler_phi(c)));
  }
  for (std::uint64_t N = 2; N <= 300; N += 7) {
    std::uniform_int_distribution<std::int64_t> r(1, 1000);
    for (int t = 0; t < 4; ++t) {
      const std::int64_t a = r(rng), b = r(rng), s = r(rng);
      if (arith::gcd(static_cast<std::uint64_t>(s), N) != 1) continue;
      // K(a, b s, N) = K(a s, b, N)
      REQUIRE(kloosterman_direct(a, b * s, N).value.overlaps(kloosterman_direct(a * s, b, N).value));
    }
  }
}

TEST_CASE("Weil bound at primes") {
  for (std::uint64_t p = 2; p <= 300; ++p) {
    if (!arith::is_prime(p)) continue;
    for (std::int64_t a = 1; a < 6; ++a) {
      const auto k = kloosterman_direct(a, 2 * a + 1, p).value;
      if ((2 * a + 1) % static_cast<std::int64_t>(p) == 0 || a % static_cast<std::int64_t>(p) == 0) continue;
      REQUIRE(k.mig() <= 2.0 * std::sqrt(static_cast<double>(p)));
    }
  }
}

TEST_CASE("second moment") {
  CHECK(second_moment(1, 5).contains(19.0));
  CHECK(second_moment(1, 7).contains(41.0));
  const auto s1 = second_moment(1, 1);
  CHECK(s1.is_exact());
  CHECK(s1.mid() == 1.0);
  for (std::uint64_t p = 2; p < 200; ++p) {
    if (!arith::is_prime(p)) continue;
    const auto s = second_moment(static_cast<std::int64_t>(p + 1), p);
    REQUIRE(s.contains(static_cast<double>(p * p - p - 1)));
  }
  CHECK(second_moment(2, 13, 128).contains(155.0));
}

TEST_CASE("epsilon_N") {
  const auto e1 = epsilon_N(1);
  CHECK(e1.contains(1.0));
  CHECK(epsilon_N(3).contains(1.0));
  const auto e30 = epsilon_N(30);
  CHECK(e30.lower() > 1e-8);
  CHECK(e30.contains(0.3819660112501051));
  CHECK_THROWS_AS(epsilon_N(12), PreconditionError);
}

TEST_CASE("find_large_n") {
  const auto w2 = find_large_n(1, 2);
  CHECK(w2.n == 3);
  CHECK(w2.value.value.contains(1.0));

  const auto w5 = find_large_n(1, 5);
  CHECK(w5.n == 2);
  CHECK(w5.value.value.mig() >= std::sqrt(5.0) / std::pow(2.0, 1.5));
  CHECK(w5.value.value.to_double() == doctest::Approx(-3.2360679774997896));

  const auto w7 = find_large_n(3, 7);
  CHECK(w7.n == 1);
  CHECK(w7.n <= 14);
  CHECK(w7.value.value.to_double() == doctest::Approx(-1.6038754716096765));

  CHECK_THROWS_AS(find_large_n(2, 4), PreconditionError);
  CHECK_THROWS_AS(find_large_n(3, 6), PreconditionError);
}

TEST_CASE("angles") {
  CHECK(angle(3, 1, 1) == doctest::Approx(1.8636390985234720).epsilon(1e-12));
  CHECK(angle(5, 1, 1) == doctest::Approx(1.4852819446312049).epsilon(1e-12));
  CHECK_THROWS_AS(angle(5, 5, 1), PreconditionError);
  CHECK_THROWS_AS(angle(4, 1, 1), PreconditionError);

  const auto s5 = angle_sample(5, 1, 4);
  CHECK(s5.angles.size() == 4);
  const auto single = angle_sample(101, 1, 1);
  REQUIRE(single.angles.size() == 1);
  CHECK(single.angles[0] == doctest::Approx(angle(101, 1, 1)));
  for (std::size_t i = 0; i < s5.angles.size(); ++i) {
    CHECK(s5.angles[i] >= 0.0);
    CHECK(s5.angles[i] <= std::numbers::pi);
    // K(1, n, 5) = 2 sqrt(5) cos(theta)
    const double k = kloosterman_direct(1, static_cast<std::int64_t>(s5.indices[i]), 5).value.to_double();
    CHECK(2.0 * std::sqrt(5.0) * std::cos(s5.angles[i]) == doctest::Approx(k).epsilon(1e-12));
  }
  CHECK(angle_sample(7, 2, 6, 128).angles.size() == 6);
}

TEST_CASE("Sato-Tate CDF and KS distance") {
  CHECK(sato_tate_cdf(0.0) == 0.0);
  CHECK(sato_tate_cdf(std::numbers::pi) == 1.0);
  CHECK(sato_tate_cdf(std::numbers::pi / 2) == doctest::Approx(0.5));
  // One point at the median: the step jumps from 0 to 1 there.
  const double median = std::numbers::pi / 2;
  CHECK(ks_distance(std::vector<double>{median}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}), PreconditionError);

  const auto big = angle_sample(9973, 1, 9972);
  CHECK(big.angles.size() == 9972);
  for (double a : big.angles) REQUIRE((a >= 0.0 && a <= std::numbers::pi));
  CHECK(ks_distance(big) < 0.05);
}

TEST_CASE("Sato-Tate witness search") {
  // Vanishing threshold: the first admissible n (n = 1 = m is skipped).
  const auto tiny = search_st_witness(1, 7, 1e-12, 6);
  REQUIRE(tiny.has_value());
  CHECK(tiny->n == 2);

  const auto w7 = search_st_witness(1, 7, 0.3, 14);
  REQUIRE(w7.has_value());
  CHECK(w7->n == 2);
  CHECK(w7->value.value.mig() >= 0.6 * std::sqrt(7.0));

  const auto w15 = search_st_witness(1, 15, 0.2, 30);
  REQUIRE(w15.has_value());
  CHECK(w15->n == 2);
  CHECK(w15->value.value.overlaps(kloosterman_direct(1, 2, 15).value));
  // Combined bound (2 delta)^r sqrt(N).
  CHECK(w15->value.value.mig() >= 0.16 * std::sqrt(15.0));

  CHECK_FALSE(search_st_witness(1, 7, 2.0, 14).has_value());
  CHECK_THROWS_AS(search_st_witness(3, 15, 0.2, 30), PreconditionError);
}

TEST_CASE("prime twists reproduce K(m, n, N) as a product") {
  for (std::uint64_t N : {6u, 15u, 30u, 77u, 210u}) {
    for (std::int64_t m : {1, 7, 13}) {
      if (arith::gcd(static_cast<std::uint64_t>(m), N) != 1) continue;
      const auto twists = prime_twists(m, N);
      const auto primes = arith::factorize(N).factors;
      for (std::int64_t n = 1; n < 20; ++n) {
        CertifiedReal product = CertifiedReal::exact(1, 53);
        for (std::size_t i = 0; i < primes.size(); ++i) {
          product *= kloosterman_direct(static_cast<std::int64_t>(twists[i]), n, primes[i].prime).value;
        }
        REQUIRE(product.overlaps(kloosterman_direct(m, n, N).value));
      }
    }
  }
}

TEST_CASE("modulus cap") {
  CHECK_THROWS_AS(kloosterman_direct(1, 1, kMaxModulus + 1), RangeError);
  CHECK_THROWS_AS(kloosterman_direct(1, 1, 0), RangeError);
}

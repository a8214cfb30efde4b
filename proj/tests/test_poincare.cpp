#include <cmath>

#include "doctest.h"
#include "pns/arith.hpp"
#include "pns/errors.hpp"
#include "pns/poincare.hpp"

using namespace pns;
using namespace pns::poincare;

TEST_CASE("query validation") {
  CHECK_THROWS_AS(CoefficientQuery::make(11, 1, 1, 1), PreconditionError);
  CHECK_THROWS_AS(CoefficientQuery::make(2, 1, 1, 1), PreconditionError);
  CHECK_THROWS_AS(CoefficientQuery::make(12, 0, 1, 1), PreconditionError);
  CHECK_THROWS_AS(CoefficientQuery::make(12, 1, 0, 1), PreconditionError);
  const auto q = CoefficientQuery::make(12, 2, 3, 5);
  CHECK(q.nu() == 11);
  CHECK(q.with_n(7).n() == 7);
  CHECK(q.with_n(7).m() == 2);
}

TEST_CASE("high weight is dominated by the diagonal term") {
  const auto r = coefficient(CoefficientQuery::make(100, 1, 1, 1), 128, 1e-30);
  CHECK(r.value.rad() <= 1e-30);
  CHECK(std::abs(r.value.to_double() - 1.0) < 1e-20);
  CHECK(r.sign == Sign::positive);

  for (unsigned k : {60u, 80u}) {
    const auto off = coefficient(CoefficientQuery::make(k, 1, 1, 2), 128, 1e-30);
    const auto diag = coefficient(CoefficientQuery::make(k, 1, 1, 1), 128, 1e-30);
    CHECK(off.value.mag() < 1e-3);
    CHECK(diag.value.mig() > 0.999);
  }
}

TEST_CASE("weight 12, level 1 is proportional to Delta") {
  const auto tau = tau_oracle(12);
  const auto p1 = coefficient(CoefficientQuery::make(12, 1, 1, 1), 128, 1e-25);
  REQUIRE(p1.sign == Sign::positive);
  for (std::uint64_t n = 2; n <= 6; ++n) {
    const auto pn = coefficient(CoefficientQuery::make(12, 1, 1, n), 128, 1e-25);
    const auto ratio = pn.value / p1.value;
    const double expected = static_cast<double>(tau[n - 1]);
    CAPTURE(n);
    CHECK(ratio.contains(expected));
    CHECK(std::abs(ratio.to_double() - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("symmetry p(m; n) = p(n; m) at level 1") {
  for (std::uint64_t m = 1; m <= 3; ++m) {
    for (std::uint64_t n = m + 1; n <= 4; ++n) {
      const auto a = coefficient(CoefficientQuery::make(16, m, 1, n), 96, 1e-20);
      const auto b = coefficient(CoefficientQuery::make(16, n, 1, m), 96, 1e-20);
      CAPTURE(m);
      CAPTURE(n);
      // p(m; n) (m/n)^{(k-1)/2} is symmetric in m and n.
      const double scale = std::pow(static_cast<double>(n) / static_cast<double>(m), 15.0);
      CHECK(a.value.to_double() == doctest::Approx(b.value.to_double() * scale).epsilon(1e-10));
    }
  }
}

TEST_CASE("tail radius is sound against a longer truncation") {
  const auto q = CoefficientQuery::make(12, 1, 2, 3);
  const auto coarse = coefficient(q, 96, 1e-6);
  const auto fine = coefficient(q, 128, 1e-24);
  CHECK(coarse.truncation_C < fine.truncation_C);
  CHECK(fine.value.subset_of(coarse.value));
  CHECK(coarse.tail_radius <= 0.5e-6);
}

TEST_CASE("envelope guard") {
  CHECK_THROWS_AS(coefficient(CoefficientQuery::make(4, 100, 1, 100), 64, 1e-10), RangeError);
}

TEST_CASE("certify_nonzero") {
  const auto r = certify_nonzero(CoefficientQuery::make(12, 1, 1, 2), 256);
  CHECK(r.sign == Sign::negative);
  CHECK(r.value.is_negative());
  const auto s = certify_nonzero(CoefficientQuery::make(24, 1, 7, 3), 256);
  CHECK(s.sign != Sign::undetermined);
  if (s.sign == Sign::positive) CHECK(s.value.is_positive());
  if (s.sign == Sign::negative) CHECK(s.value.is_negative());
}

TEST_CASE("order of vanishing") {
  const auto r = order_of_vanishing(12, 1, 1, 5, 256);
  REQUIRE(r.first_nonzero_n.has_value());
  CHECK(*r.first_nonzero_n == 1);
  CHECK(*r.v_infinity_upper == 1);
  CHECK(r.scanned_to == 1);
  CHECK(r.undetermined_indices.empty());
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->sign == Sign::positive);

  const auto r5 = order_of_vanishing(40, 2, 3, 6, 256);
  REQUIRE(r5.first_nonzero_n.has_value());
  CHECK(*r5.v_infinity_upper == *r5.first_nonzero_n);
  CHECK(*r5.first_nonzero_n <= 6);
}

TEST_CASE("theorem ranges") {
  CHECK(theorem_indices(1, 12, 1).empty());
  CHECK(theorem_max_m(1, 16, 1) == 1);
  CHECK(theorem_indices(1, 16, 1) == std::vector<std::uint64_t>{1});
  const auto five = theorem_indices(5, 40, 3);
  CHECK(five == std::vector<std::uint64_t>{1, 2, 4, 5, 7, 8, 10, 11, 13, 14});
  CHECK(theorem_scan_length(5, 3) == 6);
  CHECK(theorem_scan_length(2, 3) == 1);
  CHECK_THROWS_AS(theorem_indices(1, 16, 2), PreconditionError);
  CHECK_THROWS_AS(theorem_indices(2, 16, 4), PreconditionError);
  CHECK_THROWS_AS(theorem_indices(3, 16, 1), PreconditionError);

  const auto reports = verify_theorem_range(2, 30, 2, 256);
  REQUIRE(reports.size() == theorem_indices(2, 30, 2).size());
  for (const auto& rep : reports) {
    CAPTURE(rep.m);
    CHECK(rep.first_nonzero_n == std::optional<std::uint64_t>{1});
  }
}

TEST_CASE("vanishing window") {
  // p_r = 7, 7^0.6 = 3.21..., ceil = 4
  CHECK(vanishing_window(14, 0.1) == 16);
  CHECK(vanishing_window(14, 0.1, 1) == 4);
  CHECK_THROWS_AS(vanishing_window(1, 0.1), PreconditionError);
  const auto rep = verify_vanishing_bound(12, 1, 5, 0.1, 256);
  REQUIRE(rep.v_infinity_upper.has_value());
  CHECK(*rep.v_infinity_upper < vanishing_window(5, 0.1));
  CHECK_THROWS_AS(verify_vanishing_bound(12, 5, 5, 0.1, 256), PreconditionError);
}

TEST_CASE("tau oracle") {
  const auto tau = tau_oracle(12);
  const std::vector<long long> expected = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944};
  REQUIRE(tau.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(static_cast<long long>(tau[i]) == expected[i]);

  const auto big = tau_oracle(10'000);
  // multiplicativity and the Hecke relation at p = 2
  for (std::uint64_t a = 2; a < 60; ++a) {
    for (std::uint64_t b = 2; b < 60; ++b) {
      if (arith::gcd(a, b) != 1) continue;
      REQUIRE(big[a * b - 1] == big[a - 1] * big[b - 1]);
    }
  }
  CHECK(big[3] == big[1] * big[1] - arith::i128(2048));
  // Ramanujan congruence tau(n) = sigma_11(n) mod 691 at n = 2
  CHECK((big[1] - (1 + 2048)) % 691 == 0);
  CHECK_THROWS_AS(tau_oracle(10'001), RangeError);
}

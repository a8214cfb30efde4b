#include <functional>
#include <random>

#include "doctest.h"
#include "pns/certified_real.hpp"
#include "pns/errors.hpp"

using pns::BigFloat;
using pns::CertifiedReal;

namespace {

// Random ball with midpoint in [-8, 8] and a small relative radius.
CertifiedReal random_ball(std::mt19937_64& rng, long precision, bool positive = false) {
  std::uniform_real_distribution<double> mid(positive ? 0.5 : -8.0, 8.0);
  std::uniform_real_distribution<double> rel(0.0, 1e-6);
  CertifiedReal x = CertifiedReal::from_double(mid(rng), precision);
  x.add_error(std::abs(x.to_double()) * rel(rng));
  return x;
}

// A point of the ball, as a 512-bit float: mid + t * rad with t in [-1, 1].
BigFloat sample(const CertifiedReal& x, double t) {
  BigFloat p(512);
  mpfr_mul_d(p.get(), x.rad().get(), t, MPFR_RNDN);
  mpfr_add(p.get(), p.get(), x.mid().get(), MPFR_RNDN);
  return p;
}

using Unary = std::function<int(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>;
using Binary = std::function<int(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)>;

}  // namespace

TEST_CASE("exact construction") {
  const CertifiedReal one = CertifiedReal::exact(1, 64);
  CHECK(one.is_exact());
  CHECK(one.is_positive());
  CHECK(CertifiedReal::exact(-3, 64).is_negative());
  CHECK(CertifiedReal::exact(0, 64).contains_zero());
  CHECK(CertifiedReal::from_double(0.1, 53).is_exact());
  CHECK_FALSE(CertifiedReal::from_double(0.1, 20).is_exact());
}

TEST_CASE("pi encloses the true value") {
  const CertifiedReal pi = CertifiedReal::pi(64);
  BigFloat ref(400);
  mpfr_const_pi(ref.get(), MPFR_RNDN);
  CHECK(pi.contains(ref));
  CHECK(pi.rad() < 1e-18);
}

TEST_CASE("binary operations enclose sampled results") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> t(-1.0, 1.0);
  const std::vector<std::pair<const char*, Binary>> ops = {
      {"add", mpfr_add}, {"sub", mpfr_sub}, {"mul", mpfr_mul}, {"div", mpfr_div}};
  for (const auto& [name, op] : ops) {
    CAPTURE(name);
    for (int trial = 0; trial < 300; ++trial) {
      const long prec = 53 + 32 * (trial % 4);
      const CertifiedReal a = random_ball(rng, prec);
      const CertifiedReal b = random_ball(rng, prec, std::string(name) == "div");
      CertifiedReal r = a;
      if (std::string(name) == "add") r += b;
      if (std::string(name) == "sub") r -= b;
      if (std::string(name) == "mul") r *= b;
      if (std::string(name) == "div") r /= b;
      for (int s = 0; s < 5; ++s) {
        BigFloat exact(1024);
        op(exact.get(), sample(a, t(rng)).get(), sample(b, t(rng)).get(), MPFR_RNDN);
        REQUIRE(r.contains(exact));
      }
    }
  }
}

TEST_CASE("elementary functions enclose sampled results") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(-1.0, 1.0);
  const std::vector<std::tuple<const char*, Unary, std::function<CertifiedReal(const CertifiedReal&)>, bool>> fns = {
      {"sqrt", mpfr_sqrt, [](const CertifiedReal& x) { return pns::sqrt(x); }, true},
      {"exp", mpfr_exp, [](const CertifiedReal& x) { return pns::exp(x); }, false},
      {"log", mpfr_log, [](const CertifiedReal& x) { return pns::log(x); }, true},
      {"cos", mpfr_cos, [](const CertifiedReal& x) { return pns::cos(x); }, false},
      {"sqr", mpfr_sqr, [](const CertifiedReal& x) { return pns::sqr(x); }, false},
  };
  for (const auto& [name, ref, fn, positive] : fns) {
    CAPTURE(name);
    for (int trial = 0; trial < 300; ++trial) {
      const long prec = 53 + 64 * (trial % 3);
      const CertifiedReal x = random_ball(rng, prec, positive);
      const CertifiedReal y = fn(x);
      for (int s = 0; s < 5; ++s) {
        BigFloat exact(1024);
        ref(exact.get(), sample(x, t(rng)).get(), MPFR_RNDN);
        REQUIRE(y.contains(exact));
      }
    }
  }
}

TEST_CASE("division by a ball around zero is rejected") {
  CertifiedReal z = CertifiedReal::exact(0, 64);
  z.add_error(1e-3);
  CHECK_THROWS_AS(CertifiedReal::exact(1, 64) / z, pns::PreconditionError);
  CHECK_THROWS_AS(pns::log(z), pns::PreconditionError);
}

TEST_CASE("ordering helpers") {
  CertifiedReal a = CertifiedReal::exact(1, 64);
  a.add_error(0.5);
  CertifiedReal b = CertifiedReal::exact(2, 64);
  b.add_error(0.5);
  CHECK(a.overlaps(b));
  CHECK(a.is_positive());
  b.add_error(0.0);
  CertifiedReal c = CertifiedReal::exact(3, 64);
  CHECK_FALSE(a.overlaps(c));
  CertifiedReal inner = CertifiedReal::exact(1, 64);
  inner.add_error(0.25);
  CHECK(inner.subset_of(a));
  CHECK_FALSE(a.subset_of(inner));
  CHECK(a.mig() == 0.5);
  CHECK(a.mag() == 1.5);
}

TEST_CASE("assignment adopts the source precision") {
  CertifiedReal narrow(53);
  const CertifiedReal wide = CertifiedReal::pi(256);
  narrow = wide;
  CHECK(narrow.precision() == 256);
  CHECK(narrow.rad() == wide.rad());
}

#pragma once

// Bessel functions of the first kind J_nu for integer order, with certified
// values from the ascending series and explicit-constant bounds.

#include <cstdint>

#include "pns/certified_real.hpp"

namespace pns::bessel {

/// Largest admissible argument for order nu: 4 nu + 40.
double argument_envelope(unsigned nu);

/// J_nu(x) for an exactly known argument x >= 0.
CertifiedReal bessel_j(unsigned nu, double x, long precision);
/// J_nu over a ball of arguments; the input radius is propagated through a
/// bound on J_nu'.
CertifiedReal bessel_j(unsigned nu, const CertifiedReal& x, long precision);

struct JNuAtNu {
  CertifiedReal value;
  double predictor;  // Gamma(1/3) / (48^(1/6) pi) * nu^(-1/3), not certified
};

JNuAtNu j_nu_at_nu(unsigned nu, long precision);

/// Gamma(1/3) / (48^(1/6) pi) ~ 0.44731.
double airy_constant();

/// Certified lower bound for J_nu(nu delta), 0 < delta <= 1, returned as an
/// exact ball: lower(J_nu(nu)) * delta^nu with downward rounding.
CertifiedReal lower_bound_j(unsigned nu, double delta, long precision);

/// (x/2)^nu / nu! * exp(x^2/4) >= |J_nu(x)|, rounded up. nu >= 1, x >= 0.
BigFloat upper_bound_j(unsigned nu, const BigFloat& x);
BigFloat upper_bound_j(unsigned nu, double x);

/// Majorant of sum_{c >= c0} |J_nu(nu delta / c)|:
///   (nu delta/2)^nu / nu! * exp((nu delta / c0)^2 / 4) * (c0^-nu + c0^(1-nu) / (nu - 1))
/// rounded up. `delta` is taken as an upper bound. Requires nu >= 2.
BigFloat tail_bound(unsigned nu, const BigFloat& delta, std::uint64_t c0);
BigFloat tail_bound(unsigned nu, double delta, std::uint64_t c0);

}  // namespace pns::bessel

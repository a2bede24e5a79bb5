#pragma once

#include "scmimo/types.hpp"

namespace scmimo {

// exp(-scale) * I0(z) for z = sqrt(z_squared). I0 is even, so the branch of
// the square root does not matter.
//
// Evaluated from I0(z) = (1/pi) * integral_0^pi exp(z cos t) dt with the
// trapezoid rule. The integrand is periodic and entire, so the rule converges
// geometrically once the node count passes |z|; the node count is chosen from
// |z| for full double accuracy. Pass scale >= |Re z| to keep every sample of
// the integrand at or below 1 in magnitude.
cdouble bessel_i0_scaled(cdouble z_squared, double scale);

// I0(sqrt(z_squared)) / I0(eta) without overflow for large eta.
cdouble bessel_i0_ratio(cdouble z_squared, double eta);

}  // namespace scmimo

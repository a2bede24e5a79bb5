#include "scmimo/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scmimo {

cdouble bessel_i0_scaled(cdouble z_squared, double scale) {
  if (!std::isfinite(z_squared.real()) || !std::isfinite(z_squared.imag()))
    throw std::invalid_argument("bessel_i0_scaled: non-finite argument");
  const cdouble z = std::sqrt(z_squared);
  const double magnitude = std::abs(z);
  // Aliasing error of the 2n-point periodic rule is 2*I_{2n}(z); I_nu(z) decays
  // faster than geometrically once nu exceeds |z| + O(|z|^{1/3}).
  const int intervals =
      static_cast<int>(std::ceil(0.5 * (magnitude + 15.0 * std::cbrt(magnitude) + 40.0)));

  cdouble sum = 0.5 * (std::exp(z - scale) + std::exp(-z - scale));
  for (int j = 1; j < intervals; ++j) {
    const double c = std::cos(std::numbers::pi * j / intervals);
    sum += std::exp(z * c - scale);
  }
  return sum / static_cast<double>(intervals);
}

cdouble bessel_i0_ratio(cdouble z_squared, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("bessel_i0_ratio: eta must be finite and nonnegative");
  const double scale = std::max(eta, std::abs(std::sqrt(z_squared).real()));
  return bessel_i0_scaled(z_squared, scale) / bessel_i0_scaled(cdouble(eta * eta, 0.0), scale);
}

}  // namespace scmimo

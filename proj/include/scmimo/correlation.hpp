#pragma once

#include "scmimo/geometry.hpp"
#include "scmimo/types.hpp"

namespace scmimo {

// Eigenvalues down to -kPsdTolerance * lambda_max are treated as rounding
// noise and clamped to zero; anything more negative is rejected.
inline constexpr double kPsdTolerance = 1e-9;

/// Spatial correlation matrix A of the base-station array together with its
/// Hermitian square root. Always unit-diagonal, Hermitian and PSD.
class CorrelationMatrix {
 public:
  /// Validates and takes ownership of `a`. The input is Hermitianized as
  /// (A + A^H)/2 and its diagonal must already be 1 within 1e-12.
  static CorrelationMatrix from_matrix(CMatrix a);

  int size() const noexcept { return static_cast<int>(a_.rows()); }
  const CMatrix& matrix() const noexcept { return a_; }
  const CMatrix& sqrt() const noexcept { return sqrt_a_; }
  /// tr(A); equals size() for a unit diagonal.
  double trace() const noexcept { return trace_; }
  /// tr(A A) = sum |A_ij|^2.
  double trace_squared() const noexcept { return trace_sq_; }
  double min_eigenvalue() const noexcept { return min_eig_; }

 private:
  CorrelationMatrix() = default;

  CMatrix a_;
  CMatrix sqrt_a_;
  double trace_ = 0.0;
  double trace_sq_ = 0.0;
  double min_eig_ = 0.0;
};

CorrelationMatrix identity_correlation(int antennas);

// [A]_ij = alpha^{d_ij}, alpha in [0, 1).
CorrelationMatrix exponential_correlation(const ArrayGeometry& geometry, double alpha);

// [A]_ij = I0(sqrt(eta^2 - 4 pi^2 d^2 + i 4 pi eta sin(mu) d)) / I0(eta),
// the von Mises angle-of-arrival model. Throws NotPsdError when the resulting
// matrix is not positive semidefinite for the geometry.
CorrelationMatrix bessel_correlation(const ArrayGeometry& geometry, double eta, double mu);

// V diag(sqrt(lambda)) V^H. Throws std::invalid_argument for a non-Hermitian
// input and NotPsdError for an eigenvalue below tolerance.
CMatrix hermitian_sqrt(const CMatrix& a);

}  // namespace scmimo

#include "scmimo/correlation.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "scmimo/bessel.hpp"

namespace scmimo {

SingularChannelError::SingularChannelError(int bin, double rcond)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "Gram matrix at DFT bin " << bin << " is singular (reciprocal condition " << rcond
           << ")";
        return os.str();
      }()),
      bin_(bin),
      rcond_(rcond) {}

NotPsdError::NotPsdError(double min_eigenvalue, double max_eigenvalue)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "matrix is not positive semidefinite: eigenvalue " << min_eigenvalue
           << " against largest " << max_eigenvalue;
        return os.str();
      }()),
      min_(min_eigenvalue) {}

namespace {

struct Spectrum {
  RVector values;
  CMatrix vectors;
};

void require_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix is not Hermitian");
}

Spectrum checked_spectrum(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const RVector& values = solver.eigenvalues();
  const double largest = std::max(values.maxCoeff(), 0.0);
  const double smallest = values.minCoeff();
  if (smallest < -kPsdTolerance * std::max(largest, 1e-300)) throw NotPsdError(smallest, largest);
  return {values, solver.eigenvectors()};
}

CMatrix sqrt_from(const Spectrum& s) {
  const RVector roots = s.values.cwiseMax(0.0).cwiseSqrt();
  CMatrix root = s.vectors * roots.asDiagonal() * s.vectors.adjoint();
  return 0.5 * (root + root.adjoint());
}

// Builds A from a function of the pairwise distance, evaluating it once per
// distinct distance.
template <class Entry>
CMatrix distance_function_matrix(const ArrayGeometry& geometry, Entry entry) {
  const int m = geometry.antennas();
  std::map<double, cdouble> cache;
  CMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = 1.0;
    for (int j = i + 1; j < m; ++j) {
      const double d = pairwise_distance(geometry, i, j);
      auto it = cache.find(d);
      if (it == cache.end()) it = cache.emplace(d, entry(d)).first;
      a(i, j) = it->second;
      a(j, i) = std::conj(it->second);
    }
  }
  return a;
}

}  // namespace

CMatrix hermitian_sqrt(const CMatrix& a) {
  require_hermitian(a);
  return sqrt_from(checked_spectrum(a));
}

CorrelationMatrix CorrelationMatrix::from_matrix(CMatrix a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("correlation matrix must be square and non-empty");
  CMatrix herm = 0.5 * (a + a.adjoint());
  for (Eigen::Index i = 0; i < herm.rows(); ++i) {
    if (std::abs(herm(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("correlation matrix diagonal must be 1");
    herm(i, i) = 1.0;
  }
  const Spectrum spectrum = checked_spectrum(herm);

  CorrelationMatrix out;
  out.sqrt_a_ = sqrt_from(spectrum);
  out.trace_ = static_cast<double>(herm.rows());
  out.trace_sq_ = herm.cwiseAbs2().sum();
  out.min_eig_ = spectrum.values.minCoeff();
  out.a_ = std::move(herm);
  return out;
}

CorrelationMatrix identity_correlation(int antennas) {
  if (antennas <= 0) throw std::invalid_argument("antenna count must be positive");
  return CorrelationMatrix::from_matrix(CMatrix::Identity(antennas, antennas));
}

CorrelationMatrix exponential_correlation(const ArrayGeometry& geometry, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("exponential correlation needs alpha in [0, 1)");
  return CorrelationMatrix::from_matrix(
      distance_function_matrix(geometry, [alpha](double d) { return cdouble(std::pow(alpha, d)); }));
}

CorrelationMatrix bessel_correlation(const ArrayGeometry& geometry, double eta, double mu) {
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("Bessel correlation needs a finite eta >= 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("Bessel correlation needs a finite mu");
  constexpr double pi = std::numbers::pi;
  const double sin_mu = std::sin(mu);
  return CorrelationMatrix::from_matrix(distance_function_matrix(geometry, [&](double d) {
    const cdouble z_sq(eta * eta - 4.0 * pi * pi * d * d, 4.0 * pi * eta * sin_mu * d);
    return bessel_i0_ratio(z_sq, eta);
  }));
}

}  // namespace scmimo

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "scmimo/bessel.hpp"
#include "scmimo/correlation.hpp"
#include "scmimo/geometry.hpp"

using namespace scmimo;
using std::numbers::pi;

namespace {

double brute_trace_squared(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return s;
}

void check_structure(const CorrelationMatrix& c) {
  const CMatrix& a = c.matrix();
  for (Eigen::Index i = 0; i < a.rows(); ++i) CHECK(a(i, i) == cdouble(1.0, 0.0));
  CHECK(c.trace() == static_cast<double>(c.size()));
  CHECK(oracle::max_abs(a - a.adjoint()) == 0.0);
  CHECK(oracle::max_abs(c.sqrt() * c.sqrt() - a) < 1e-8);
  CHECK(oracle::max_abs(c.sqrt() - c.sqrt().adjoint()) < 1e-12);
  CHECK(c.min_eigenvalue() >= -1e-9);
  CHECK(c.trace_squared() == doctest::Approx(brute_trace_squared(a)).epsilon(1e-12));
  CHECK(c.trace_squared() >= c.size() - 1e-9);
}

}  // namespace

TEST_CASE("pairwise distance on linear and planar arrays") {
  const auto ula = ArrayGeometry::ula(8, 0.5);
  CHECK(pairwise_distance(ula, 0, 3) == 1.5);
  CHECK(pairwise_distance(ula, 5, 5) == 0.0);
  CHECK(pairwise_distance(ula, 3, 0) == pairwise_distance(ula, 0, 3));

  const auto upa = ArrayGeometry::upa(64, 8, 0.5);
  CHECK(upa.rows() == 8);
  CHECK(upa.row_of(9) == 1);
  CHECK(upa.column_of(9) == 1);
  CHECK(pairwise_distance(upa, 0, 9) == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(pairwise_distance(upa, 0, 7) == doctest::Approx(3.5));
  CHECK(pairwise_distance(upa, 0, 56) == doctest::Approx(3.5));
  for (int i = 0; i < 64; ++i) {
    CHECK(pairwise_distance(upa, i, i) == 0.0);
    for (int j = i + 1; j < 64; j += 7) {
      CHECK(pairwise_distance(upa, i, j) > 0.0);
      CHECK(pairwise_distance(upa, i, j) == pairwise_distance(upa, j, i));
    }
  }

  CHECK_THROWS_AS(pairwise_distance(ula, 0, 8), std::out_of_range);
  CHECK_THROWS_AS(pairwise_distance(ula, -1, 0), std::out_of_range);
  CHECK_THROWS_AS(ArrayGeometry::upa(10, 4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ArrayGeometry::ula(4, 0.0), std::invalid_argument);
  CHECK(parse_array_kind("upa") == ArrayKind::UPA);
  CHECK_THROWS(parse_array_kind("ring"));
}

TEST_CASE("exponential correlation") {
  SUBCASE("alpha = 0 is the identity") {
    const auto c = exponential_correlation(ArrayGeometry::ula(16, 0.5), 0.0);
    CHECK(oracle::max_abs(c.matrix() - CMatrix::Identity(16, 16)) == 0.0);
    CHECK(c.trace_squared() == 16.0);
  }
  SUBCASE("two elements at half a wavelength") {
    const auto c = exponential_correlation(ArrayGeometry::ula(2, 0.5), 0.5);
    CHECK(c.matrix()(0, 1).real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(c.matrix()(0, 1).imag() == 0.0);
    CHECK(c.trace_squared() == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("strong correlation on 64 elements") {
    const auto c = exponential_correlation(ArrayGeometry::ula(64, 0.5), 0.99);
    check_structure(c);
    CHECK(brute_trace_squared(c.matrix()) > 64.0);
  }
  SUBCASE("tr(A^2) is increasing in alpha") {
    const auto g = ArrayGeometry::ula(32, 0.5);
    double prev = exponential_correlation(g, 0.0).trace_squared();
    for (int i = 1; i <= 9; ++i) {
      const double t = exponential_correlation(g, 0.1 * i).trace_squared();
      CHECK(t > 32.0);
      CHECK(t >= prev);
      prev = t;
    }
  }
  SUBCASE("planar arrays are more correlated than linear ones") {
    for (double alpha : {0.7, 0.9}) {
      const double ula = exponential_correlation(ArrayGeometry::ula(64, 0.5), alpha).trace_squared();
      const double upa = exponential_correlation(ArrayGeometry::upa(64, 8, 0.5), alpha).trace_squared();
      CHECK(upa >= ula);
    }
  }
  CHECK_THROWS_AS(exponential_correlation(ArrayGeometry::ula(4, 0.5), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exponential_correlation(ArrayGeometry::ula(4, 0.5), -0.1), std::invalid_argument);
}

TEST_CASE("scaled I0 against the standard library for real arguments") {
  for (double x : {0.0, 0.3, 2.0, 15.0, 80.0, 300.0}) {
    const cdouble v = bessel_i0_scaled(cdouble(x * x, 0.0), x);
    CHECK(v.real() == doctest::Approx(std::exp(-x) * std::cyl_bessel_i(0.0, x)).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-15);
  }
  // I0(i x) = J0(x)
  for (double x : {0.5, pi, 10.0, 60.0, 190.0})
    CHECK(bessel_i0_scaled(cdouble(-x * x, 0.0), 0.0).real() == doctest::Approx(oracle::bessel_j0(x)).epsilon(1e-10));
  CHECK(bessel_i0_ratio(cdouble(500.0 * 500.0, 0.0), 500.0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(bessel_i0_ratio(cdouble(1.0, 0.0), -1.0));
}

TEST_CASE("Bessel correlation") {
  SUBCASE("isotropic arrival gives J0(2 pi d)") {
    const auto g = ArrayGeometry::ula(64, 0.5);
    const auto c = bessel_correlation(g, 0.0, 0.0);
    check_structure(c);
    CHECK(c.matrix()(0, 1).real() == doctest::Approx(-0.30424217764409386).epsilon(1e-12));
    double worst = 0.0;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) {
        const cdouble a = c.matrix()(i, j);
        worst = std::max(worst, std::abs(a.real() - oracle::bessel_j0(2.0 * pi * pairwise_distance(g, i, j))));
        worst = std::max(worst, std::abs(a.imag()));
      }
    CHECK(worst < 1e-10);
  }
  SUBCASE("end-fire arrival is complex and bounded") {
    const auto c = bessel_correlation(ArrayGeometry::ula(8, 0.5), 20.0, pi / 2);
    const cdouble a = c.matrix()(0, 1);
    CHECK(a.real() == doctest::Approx(-0.9906704599502093).epsilon(1e-12));
    CHECK(a.imag() == doctest::Approx(0.07833851005015842).epsilon(1e-10));
    CHECK(std::abs(a) <= 1.0);
    CHECK(c.matrix()(1, 0) == std::conj(a));
    check_structure(c);
  }
  SUBCASE("general entries against the series oracle") {
    const auto g = ArrayGeometry::ula(16, 0.5);
    for (auto [eta, mu] : {std::pair{50.0, pi / 3}, std::pair{5.0, -pi / 4}, std::pair{100.0, 0.0}}) {
      const auto c = bessel_correlation(g, eta, mu);
      for (int j : {1, 4, 15}) {
        const double d = pairwise_distance(g, 0, j);
        const std::complex<double> w(eta * eta - 4 * pi * pi * d * d, 4 * pi * eta * std::sin(mu) * d);
        const auto expect = oracle::bessel_i0_ratio(w, eta * eta);
        CHECK(std::abs(c.matrix()(0, j) - expect) < 1e-10);
      }
    }
  }
  SUBCASE("broadside arrival is real symmetric") {
    const auto c = bessel_correlation(ArrayGeometry::ula(32, 0.5), 100.0, 0.0);
    CHECK(c.matrix().imag().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("large eta does not overflow") {
    const auto c = bessel_correlation(ArrayGeometry::ula(64, 0.5), 500.0, 0.0);
    check_structure(c);
    CHECK(std::isfinite(c.trace_squared()));
  }
  SUBCASE("off-broadside arrival on a planar array is rejected") {
    CHECK_THROWS_AS(bessel_correlation(ArrayGeometry::upa(64, 8, 0.5), 20.0, pi / 4), NotPsdError);
  }
  CHECK_THROWS_AS(bessel_correlation(ArrayGeometry::ula(4, 0.5), -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("structural invariants over random parameter draws") {
  std::mt19937_64 engine(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&] { return u01(engine); };
  for (int draw = 0; draw < 20; ++draw) {
    const double alpha = 0.99 * uniform();
    const double eta = 300.0 * uniform();
    const double mu = pi * (2.0 * uniform() - 1.0);
    check_structure(exponential_correlation(ArrayGeometry::ula(16, 0.5), alpha));
    check_structure(exponential_correlation(ArrayGeometry::upa(16, 4, 0.5), alpha));
    check_structure(bessel_correlation(ArrayGeometry::ula(16, 0.5), eta, mu));
    check_structure(bessel_correlation(ArrayGeometry::upa(16, 4, 0.5), eta, 0.0));
  }
}

TEST_CASE("Hermitian square root") {
  CHECK(oracle::max_abs(hermitian_sqrt(CMatrix::Identity(5, 5)) - CMatrix::Identity(5, 5)) < 1e-15);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 0) = 2.0;
  expect(1, 1) = 1.0;
  CHECK(oracle::max_abs(hermitian_sqrt(d) - expect) < 1e-15);

  const CMatrix a = exponential_correlation(ArrayGeometry::ula(3, 0.5), 0.7).matrix();
  const CMatrix s = hermitian_sqrt(a);
  CHECK(oracle::max_abs(s * s - a) < 1e-8);

  const CVector v = oracle::random_matrix(6, 1, 3).col(0);
  const CMatrix p = v * v.adjoint() / v.squaredNorm();
  CHECK(oracle::max_abs(hermitian_sqrt(p) - p) < 1e-8);

  CMatrix skew = CMatrix::Identity(2, 2);
  skew(0, 1) = 0.5;
  CHECK_THROWS_AS(hermitian_sqrt(skew), std::invalid_argument);
  CMatrix indefinite = CMatrix::Identity(2, 2);
  indefinite(0, 1) = indefinite(1, 0) = 2.0;
  CHECK_THROWS_AS(hermitian_sqrt(indefinite), NotPsdError);
}

TEST_CASE("from_matrix validation") {
  CMatrix a = CMatrix::Identity(3, 3);
  a(1, 1) = 0.5;
  CHECK_THROWS_AS(CorrelationMatrix::from_matrix(a), std::invalid_argument);
  CHECK_THROWS_AS(CorrelationMatrix::from_matrix(CMatrix::Identity(2, 3)), std::invalid_argument);
  CHECK(identity_correlation(4).trace_squared() == 4.0);
}

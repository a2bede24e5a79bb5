#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "scmimo/random.hpp"
#include "scmimo/types.hpp"

namespace oracle {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<150>>;

// J0(x) from its Taylor series in 150-digit arithmetic.
inline double bessel_j0(double x) {
  const Real half = Real(x) / 2;
  const Real q = half * half;
  Real term = 1, sum = 1;
  const Real eps = Real("1e-60");
  for (int k = 1; k < 2000; ++k) {
    term *= -q / (Real(k) * Real(k));
    sum += term;
    if (abs(term) < eps && Real(k) > half) break;
  }
  return static_cast<double>(sum);
}

// I0(sqrt(w)) / I0(sqrt(w_ref)) from the series sum_k (w/4)^k / (k!)^2, in
// 150-digit arithmetic. The branch of the square root does not matter.
inline std::complex<double> bessel_i0_ratio(std::complex<double> w, double w_ref) {
  auto series = [](const Real& re, const Real& im, Real& out_re, Real& out_im) {
    const Real qr = re / 4, qi = im / 4;
    Real tr = 1, ti = 0;
    out_re = 1;
    out_im = 0;
    const Real mag = sqrt(qr * qr + qi * qi);
    for (int k = 1; k < 5000; ++k) {
      const Real kk = Real(k) * Real(k);
      const Real nr = (tr * qr - ti * qi) / kk;
      const Real ni = (tr * qi + ti * qr) / kk;
      tr = nr;
      ti = ni;
      out_re += tr;
      out_im += ti;
      if (Real(k) * Real(k) > 4 * mag && abs(tr) + abs(ti) < Real("1e-80") * (abs(out_re) + abs(out_im)))
        break;
    }
  };
  Real nr, ni, dr, di;
  series(Real(w.real()), Real(w.imag()), nr, ni);
  series(Real(w_ref), Real(0), dr, di);
  return {static_cast<double>(nr / dr), static_cast<double>(ni / dr)};
}

// Direct double-loop DFT over taps: out[nu] = sum_l exp(-j 2 pi nu l / N) taps[l].
inline std::vector<scmimo::CMatrix> naive_dft(const std::vector<scmimo::CMatrix>& taps, int n) {
  const double pi = 3.14159265358979323846;
  std::vector<scmimo::CMatrix> out;
  for (int nu = 0; nu < n; ++nu) {
    scmimo::CMatrix acc = scmimo::CMatrix::Zero(taps[0].rows(), taps[0].cols());
    for (std::size_t l = 0; l < taps.size(); ++l) {
      for (Eigen::Index r = 0; r < acc.rows(); ++r)
        for (Eigen::Index c = 0; c < acc.cols(); ++c) {
          const double ang = -2.0 * pi * nu * static_cast<double>(l) / n;
          acc(r, c) += std::complex<double>(std::cos(ang), std::sin(ang)) * taps[l](r, c);
        }
    }
    out.push_back(acc);
  }
  return out;
}

// Length-T DFT of each row of a block: out(:, f) = sum_t exp(-j 2 pi f t / T) x(:, t).
inline scmimo::Block block_dft(const scmimo::Block& x) {
  const double pi = 3.14159265358979323846;
  const Eigen::Index t = x.cols();
  scmimo::CMatrix kernel(t, t);
  for (Eigen::Index a = 0; a < t; ++a)
    for (Eigen::Index f = 0; f < t; ++f)
      kernel(a, f) = std::polar(1.0, -2.0 * pi * static_cast<double>((a * f) % t) / static_cast<double>(t));
  return x * kernel;
}

inline scmimo::CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  scmimo::RandomStream rng(seed, 0, scmimo::StreamPurpose::Oracle);
  return rng.complex_normal_block(rows, cols);
}

inline double max_abs(const scmimo::CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle

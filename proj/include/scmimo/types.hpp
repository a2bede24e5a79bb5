#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scmimo {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// A block of samples: one row per stream (antenna or user), one column per
// time index.
using Block = Eigen::MatrixXcd;

// Tap sequences, DFT bins, filter banks: one matrix per index.
using MatrixSeq = std::vector<CMatrix>;

/// Raised when a per-bin Gram matrix is too ill-conditioned to invert.
class SingularChannelError : public std::runtime_error {
 public:
  SingularChannelError(int bin, double rcond);
  int bin() const noexcept { return bin_; }
  double rcond() const noexcept { return rcond_; }

 private:
  int bin_;
  double rcond_;
};

/// Raised when a correlation matrix has an eigenvalue below the PSD tolerance.
class NotPsdError : public std::runtime_error {
 public:
  NotPsdError(double min_eigenvalue, double max_eigenvalue);
  double min_eigenvalue() const noexcept { return min_; }

 private:
  double min_;
};

}  // namespace scmimo

#include "scmimo/filter_bank.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "scmimo/channel.hpp"

namespace scmimo {

std::string to_string(Framing framing) {
  return framing == Framing::Circular ? "circular" : "linear";
}

Framing parse_framing(const std::string& text) {
  if (text == "circular") return Framing::Circular;
  if (text == "linear") return Framing::Linear;
  throw std::invalid_argument("unknown framing '" + text + "' (expected circular or linear)");
}

TapFilter TapFilter::scaled(double factor) const {
  TapFilter out{delays, taps};
  for (auto& t : out.taps) t *= factor;
  return out;
}

namespace {

void check_filter(const TapFilter& filter, const Block& x) {
  if (filter.taps.empty() || filter.taps.size() != filter.delays.size())
    throw std::invalid_argument("filter needs matching, non-empty taps and delays");
  if (filter.input_rows() != x.rows())
    throw std::invalid_argument("filter input width " + std::to_string(filter.input_rows()) +
                                " does not match block rows " + std::to_string(x.rows()));
}

Eigen::Index wrap(long long i, Eigen::Index period) {
  const long long r = i % period;
  return static_cast<Eigen::Index>(r < 0 ? r + period : r);
}

}  // namespace

Block apply_circular(const TapFilter& filter, const Block& x) {
  check_filter(filter, x);
  const Eigen::Index t = x.cols();
  Block y = Block::Zero(filter.output_rows(), t);
  if (t == 0) return y;
  for (std::size_t j = 0; j < filter.taps.size(); ++j) {
    const Block z = filter.taps[j] * x;
    const Eigen::Index s = wrap(filter.delays[j], t);  // y[i] += z[i - s]
    y.rightCols(t - s) += z.leftCols(t - s);
    if (s > 0) y.leftCols(s) += z.rightCols(s);
  }
  return y;
}

Block apply_linear(const TapFilter& filter, const Block& x) {
  check_filter(filter, x);
  const Eigen::Index t = x.cols();
  Block y = Block::Zero(filter.output_rows(), t);
  for (std::size_t j = 0; j < filter.taps.size(); ++j) {
    const Eigen::Index d = filter.delays[j];
    if (std::abs(d) >= t) continue;
    if (d >= 0)
      y.rightCols(t - d).noalias() += filter.taps[j] * x.leftCols(t - d);
    else
      y.leftCols(t + d).noalias() += filter.taps[j] * x.rightCols(t + d);
  }
  return y;
}

Block apply(const TapFilter& filter, const Block& x, Framing framing) {
  return framing == Framing::Circular ? apply_circular(filter, x) : apply_linear(filter, x);
}

int tap_delay(int index, int dft_size) {
  if (dft_size <= 0 || index < 0 || index >= dft_size)
    throw std::out_of_range("tap index outside the DFT grid");
  return 2 * index < dft_size ? index : index - dft_size;
}

TapFilter FilterBank::taps() const {
  TapFilter out;
  const int n = dft_size();
  out.delays.reserve(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) out.delays.push_back(tap_delay(m, n));
  out.taps = time;
  return out;
}

FilterBank make_bank(MatrixSeq freq, double beta) {
  if (freq.empty()) throw std::invalid_argument("filter bank needs at least one bin");
  FilterBank bank;
  bank.time = freq_to_taps(freq);
  bank.freq = std::move(freq);
  bank.beta = beta;
  return bank;
}

double normalize_bank(FilterBank& bank) {
  double energy = 0.0;
  for (const auto& w : bank.time) energy += w.squaredNorm();
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw std::invalid_argument("cannot normalize a filter bank with zero or non-finite energy");
  const double factor = 1.0 / std::sqrt(energy);
  for (auto& w : bank.time) w *= factor;
  for (auto& w : bank.freq) w *= factor;
  bank.norm *= factor;
  return factor;
}

GramSpectra::GramSpectra(const MatrixSeq& design) {
  if (design.empty()) throw std::invalid_argument("GramSpectra needs at least one bin");
  projected_.reserve(design.size());
  eigvecs_.reserve(design.size());
  eigvals_.reserve(design.size());
  for (const auto& g : design) {
    const CMatrix gram = g.adjoint() * g;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Gram eigendecomposition failed");
    eigvals_.push_back(solver.eigenvalues().cwiseMax(0.0));
    eigvecs_.push_back(solver.eigenvectors());
    projected_.push_back(g * solver.eigenvectors());
  }
}

double GramSpectra::rcond(int bin) const {
  const RVector& v = eigvals_.at(static_cast<std::size_t>(bin));
  const double largest = v.maxCoeff();
  return largest > 0.0 ? v.minCoeff() / largest : 0.0;
}

MatrixSeq GramSpectra::regularized_inverse(double beta) const {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("regularization must be finite and nonnegative");
  MatrixSeq out;
  out.reserve(eigvecs_.size());
  for (std::size_t nu = 0; nu < eigvecs_.size(); ++nu) {
    if (beta == 0.0) {
      const double rc = rcond(static_cast<int>(nu));
      if (rc < kSingularRcond) throw SingularChannelError(static_cast<int>(nu), rc);
    }
    const RVector inv = (eigvals_[nu].array() + beta).inverse().matrix();
    out.push_back(projected_[nu] * inv.asDiagonal() * eigvecs_[nu].adjoint());
  }
  return out;
}

}  // namespace scmimo

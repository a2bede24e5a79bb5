#pragma once

#include <string>
#include <vector>

#include "scmimo/types.hpp"

namespace scmimo {

// How a T-sample block is extended beyond its edges.
enum class Framing { Circular, Linear };

std::string to_string(Framing framing);
Framing parse_framing(const std::string& text);

/// Multi-tap matrix filter y[i] = sum_j taps[j] x[i - delays[j]]. Delays may
/// be negative (anti-causal taps).
struct TapFilter {
  std::vector<int> delays;
  MatrixSeq taps;

  Eigen::Index output_rows() const { return taps.front().rows(); }
  Eigen::Index input_rows() const { return taps.front().cols(); }
  TapFilter scaled(double factor) const;
};

// Indices wrap modulo the block length x.cols().
Block apply_circular(const TapFilter& filter, const Block& x);
// Samples outside [0, T) are zero; output has the same T columns.
Block apply_linear(const TapFilter& filter, const Block& x);
Block apply(const TapFilter& filter, const Block& x, Framing framing);

// Signed delay of inverse-DFT index m on an N-point grid: m for m < N/2,
// m - N otherwise.
int tap_delay(int index, int dft_size);

/// N per-bin filter matrices with their inverse-DFT time taps.
///
/// `time[m] = (1/N) sum_nu exp(+j 2 pi nu m / N) freq[nu]`, and tap m is
/// applied at `tap_delay(m, N)`. Both views include the normalization `norm`.
struct FilterBank {
  MatrixSeq freq;
  MatrixSeq time;
  double norm = 1.0;
  double beta = 0.0;

  int dft_size() const { return static_cast<int>(freq.size()); }
  TapFilter taps() const;
};

FilterBank make_bank(MatrixSeq freq, double beta);

// Rescales the bank so that sum_m ||time[m]||_F^2 = 1, which makes the
// transmit power per sample equal the symbol variance. Returns the applied
// factor and multiplies it into `bank.norm`.
double normalize_bank(FilterBank& bank);

/// Eigendecompositions of the per-bin Gram matrices G_nu^H G_nu of a design
/// sequence G_nu (rows x K). Regularized pseudo-inverses for any ridge
/// weight are then a cheap rescaling, so one instance serves a whole search
/// over the regularization parameter.
class GramSpectra {
 public:
  explicit GramSpectra(const MatrixSeq& design);

  int bins() const noexcept { return static_cast<int>(eigvecs_.size()); }
  // lambda_min / lambda_max of the Gram matrix at `bin`.
  double rcond(int bin) const;
  // G_nu (G_nu^H G_nu + beta I)^{-1} per bin. With beta == 0, throws
  // SingularChannelError for the first bin whose rcond is below 1e-12.
  MatrixSeq regularized_inverse(double beta) const;

 private:
  MatrixSeq projected_;  // G_nu U_nu
  MatrixSeq eigvecs_;    // U_nu
  std::vector<RVector> eigvals_;
};

inline constexpr double kSingularRcond = 1e-12;

}  // namespace scmimo

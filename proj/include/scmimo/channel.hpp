#pragma once

#include <cstdint>

#include "scmimo/correlation.hpp"
#include "scmimo/random.hpp"
#include "scmimo/types.hpp"

namespace scmimo {

/// Link dimensions shared by every experiment.
struct SimulationDims {
  int antennas = 64;       // M
  int users = 10;          // K
  int taps = 4;            // L, channel memory
  int dft_size = 20;       // N, filter design grid
  int block_length = 100;  // T
  int cyclic_prefix = 20;  // T_c, uplink only
  double rho_db = 0.0;     // long-term average transmit power
  std::uint64_t seed = 1;

  double rho() const;
  // Throws std::invalid_argument unless N > L, T_c > L, K <= M, T >= N and
  // everything is positive.
  void validate() const;
};

/// Per-user tap powers d_l[k]; each row sums to one.
class PowerDelayProfile {
 public:
  explicit PowerDelayProfile(RMatrix powers);

  int users() const noexcept { return static_cast<int>(powers_.rows()); }
  int taps() const noexcept { return static_cast<int>(powers_.cols()); }
  double power(int user, int tap) const { return powers_(user, tap); }
  RVector row(int user) const { return powers_.row(user).transpose(); }
  const RMatrix& matrix() const noexcept { return powers_; }
  // sum_l d_l[k]^2
  double sum_squares(int user) const { return powers_.row(user).squaredNorm(); }

 private:
  RMatrix powers_;
};

// d_l[k] = exp(-theta l) / sum_i exp(-theta i), theta = (K - 1) / 5.
PowerDelayProfile exponential_pdp(int users, int taps);
PowerDelayProfile uniform_pdp(int users, int taps);

/// One draw of the frequency-selective channel.
///
/// `fading[l]` holds the raw CN(0,1) entries H_l (M x K); `csi[l]` is the
/// composite A^{1/2} H_l D_l^{1/2}; `csi_freq[nu]` is its N-point DFT across
/// taps, sum_l exp(-j 2 pi nu l / N) csi[l].
struct ChannelRealization {
  MatrixSeq fading;
  MatrixSeq csi;
  MatrixSeq csi_freq;

  int antennas() const { return static_cast<int>(csi.front().rows()); }
  int users() const { return static_cast<int>(csi.front().cols()); }
  int taps() const { return static_cast<int>(csi.size()); }
  int dft_size() const { return static_cast<int>(csi_freq.size()); }
};

ChannelRealization draw_channel(const SimulationDims& dims, const PowerDelayProfile& pdp,
                                const CorrelationMatrix& corr, RandomStream& rng);

// Composite CSI from given fading taps. Used by draw_channel and by tests that
// need hand-built channels.
ChannelRealization make_channel(MatrixSeq fading, const PowerDelayProfile& pdp,
                                const CorrelationMatrix& corr, int dft_size);

// out[nu] = sum_l exp(-j 2 pi nu l / N) taps[l]. Requires N > L.
MatrixSeq taps_to_freq(const MatrixSeq& taps, int dft_size);
// out[m] = (1/N) sum_nu exp(+j 2 pi nu m / N) freq[nu]; inverse of the above
// for zero-padded taps.
MatrixSeq freq_to_taps(const MatrixSeq& freq);

}  // namespace scmimo

#include "scmimo/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace scmimo {

double SimulationDims::rho() const { return std::pow(10.0, rho_db / 10.0); }

void SimulationDims::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("dims: " + what); };
  if (antennas <= 0 || users <= 0 || taps <= 0 || dft_size <= 0 || block_length <= 0 ||
      cyclic_prefix <= 0)
    fail("all dimensions must be positive");
  if (users > antennas) fail("users (K) must not exceed antennas (M)");
  if (dft_size <= taps) fail("dft_size (N) must exceed taps (L)");
  if (cyclic_prefix <= taps) fail("cyclic_prefix (T_c) must exceed taps (L)");
  if (block_length < dft_size) fail("block_length (T) must be at least dft_size (N)");
  if (!std::isfinite(rho_db)) fail("rho_db must be finite");
}

PowerDelayProfile::PowerDelayProfile(RMatrix powers) : powers_(std::move(powers)) {
  if (powers_.rows() == 0 || powers_.cols() == 0)
    throw std::invalid_argument("power delay profile must be non-empty");
  if ((powers_.array() < 0.0).any())
    throw std::invalid_argument("power delay profile entries must be nonnegative");
  for (Eigen::Index k = 0; k < powers_.rows(); ++k)
    if (std::abs(powers_.row(k).sum() - 1.0) > 1e-12)
      throw std::invalid_argument("power delay profile row " + std::to_string(k) +
                                  " does not sum to 1");
}

PowerDelayProfile exponential_pdp(int users, int taps) {
  if (users < 1 || taps < 1) throw std::invalid_argument("exponential_pdp needs K, L >= 1");
  const double theta = (users - 1) / 5.0;
  RVector row(taps);
  for (int l = 0; l < taps; ++l) row(l) = std::exp(-theta * l);
  row /= row.sum();
  return PowerDelayProfile(row.transpose().replicate(users, 1));
}

PowerDelayProfile uniform_pdp(int users, int taps) {
  if (users < 1 || taps < 1) throw std::invalid_argument("uniform_pdp needs K, L >= 1");
  return PowerDelayProfile(RMatrix::Constant(users, taps, 1.0 / taps));
}

ChannelRealization make_channel(MatrixSeq fading, const PowerDelayProfile& pdp,
                                const CorrelationMatrix& corr, int dft_size) {
  if (fading.empty()) throw std::invalid_argument("channel needs at least one tap");
  const auto m = fading.front().rows();
  const auto k = fading.front().cols();
  if (static_cast<int>(fading.size()) != pdp.taps() || k != pdp.users())
    throw std::invalid_argument("fading taps do not match the power delay profile");
  if (m != corr.size()) throw std::invalid_argument("fading taps do not match the correlation size");

  ChannelRealization ch;
  ch.csi.reserve(fading.size());
  for (std::size_t l = 0; l < fading.size(); ++l) {
    if (fading[l].rows() != m || fading[l].cols() != k)
      throw std::invalid_argument("fading taps have inconsistent shapes");
    const RVector amp = pdp.matrix().col(static_cast<Eigen::Index>(l)).cwiseSqrt();
    ch.csi.push_back(corr.sqrt() * fading[l] * amp.asDiagonal());
  }
  ch.csi_freq = taps_to_freq(ch.csi, dft_size);
  ch.fading = std::move(fading);
  return ch;
}

ChannelRealization draw_channel(const SimulationDims& dims, const PowerDelayProfile& pdp,
                                const CorrelationMatrix& corr, RandomStream& rng) {
  if (pdp.users() != dims.users || pdp.taps() != dims.taps || corr.size() != dims.antennas)
    throw std::invalid_argument("draw_channel: dimension mismatch between dims, PDP and correlation");
  MatrixSeq fading;
  fading.reserve(static_cast<std::size_t>(dims.taps));
  for (int l = 0; l < dims.taps; ++l) fading.push_back(rng.complex_normal_block(dims.antennas, dims.users));
  return make_channel(std::move(fading), pdp, corr, dims.dft_size);
}

MatrixSeq taps_to_freq(const MatrixSeq& taps, int dft_size) {
  const int taps_len = static_cast<int>(taps.size());
  if (taps_len == 0) throw std::invalid_argument("taps_to_freq: no taps");
  if (dft_size <= taps_len) throw std::invalid_argument("taps_to_freq: N must exceed L");
  MatrixSeq out(static_cast<std::size_t>(dft_size),
                CMatrix::Zero(taps.front().rows(), taps.front().cols()));
  for (int nu = 0; nu < dft_size; ++nu)
    for (int l = 0; l < taps_len; ++l)
      out[nu] += std::polar(1.0, -2.0 * std::numbers::pi * ((nu * l) % dft_size) / dft_size) * taps[l];
  return out;
}

MatrixSeq freq_to_taps(const MatrixSeq& freq) {
  const int n = static_cast<int>(freq.size());
  if (n == 0) throw std::invalid_argument("freq_to_taps: no bins");
  MatrixSeq out(static_cast<std::size_t>(n), CMatrix::Zero(freq.front().rows(), freq.front().cols()));
  for (int m = 0; m < n; ++m) {
    for (int nu = 0; nu < n; ++nu)
      out[m] += std::polar(1.0, 2.0 * std::numbers::pi * ((nu * m) % n) / n) * freq[nu];
    out[m] /= static_cast<double>(n);
  }
  return out;
}

}  // namespace scmimo

#include "scmimo/equalization.hpp"

#include <cmath>
#include <stdexcept>

namespace scmimo {

UplinkFrame make_uplink_frame(Block payload, int cyclic_prefix) {
  const Eigen::Index t = payload.cols();
  if (cyclic_prefix <= 0 || cyclic_prefix > t)
    throw std::invalid_argument("cyclic prefix must be in [1, T]");
  UplinkFrame frame;
  frame.with_cp.resize(payload.rows(), t + cyclic_prefix);
  frame.with_cp.leftCols(cyclic_prefix) = payload.rightCols(cyclic_prefix);
  frame.with_cp.rightCols(t) = payload;
  frame.payload = std::move(payload);
  return frame;
}

TapFilter uplink_channel(const ChannelRealization& ch) {
  TapFilter f;
  for (int l = 0; l < ch.taps(); ++l) {
    f.delays.push_back(l);
    f.taps.push_back(ch.csi[l]);
  }
  return f;
}

Block uplink_receive(const ChannelRealization& ch, const UplinkFrame& frame, const Block& noise) {
  const int cp = frame.cyclic_prefix();
  if (cp <= ch.taps())
    throw std::invalid_argument("uplink_receive: cyclic prefix must exceed the channel memory");
  if (frame.payload.rows() != ch.users())
    throw std::invalid_argument("uplink_receive: payload must have K rows");
  const Eigen::Index t = frame.payload.cols();
  if (noise.rows() != ch.antennas() || noise.cols() != t)
    throw std::invalid_argument("uplink_receive: noise block must be M x T");
  const Block full = apply_linear(uplink_channel(ch), frame.with_cp);
  return full.rightCols(t) + noise;
}

TapFilter cmfe_filter(const ChannelRealization& ch) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(ch.antennas()) * ch.users());
  TapFilter f;
  for (int l = 0; l < ch.taps(); ++l) {
    f.delays.push_back(-l);
    f.taps.push_back(scale * ch.csi[l].adjoint());
  }
  return f;
}

Block cmfe_apply(const ChannelRealization& ch, const Block& received) {
  if (received.rows() != ch.antennas())
    throw std::invalid_argument("cmfe_apply: received block must have M rows");
  return apply_circular(cmfe_filter(ch), received);
}

FilterBank mmsee_bank(const GramSpectra& spectra, double beta) {
  MatrixSeq freq = spectra.regularized_inverse(beta);
  for (auto& q : freq) q = q.adjoint().eval();
  return make_bank(std::move(freq), beta);
}

FilterBank mmsee_bank(const ChannelRealization& ch, double beta) {
  return mmsee_bank(GramSpectra(ch.csi_freq), beta);
}

FilterBank zfe_bank(const ChannelRealization& ch) { return mmsee_bank(ch, 0.0); }

Block apply_equalizer_bank(const FilterBank& bank, const Block& received) {
  if (received.cols() < bank.dft_size())
    throw std::invalid_argument("apply_equalizer_bank: block length must be at least N");
  return apply_circular(bank.taps(), received);
}

}  // namespace scmimo

#include "scmimo/precoding.hpp"

#include <cmath>
#include <stdexcept>

namespace scmimo {

MatrixSeq downlink_freq(const ChannelRealization& ch) {
  const int n = ch.dft_size();
  MatrixSeq out;
  out.reserve(static_cast<std::size_t>(n));
  // exp(+j 2 pi nu l / N) is the forward kernel evaluated at bin -nu.
  for (int nu = 0; nu < n; ++nu) out.push_back(ch.csi_freq[static_cast<std::size_t>((n - nu) % n)]);
  return out;
}

TapFilter downlink_channel(const ChannelRealization& ch) {
  TapFilter f;
  for (int l = 0; l < ch.taps(); ++l) {
    f.delays.push_back(l);
    f.taps.push_back(ch.csi[l].adjoint());
  }
  return f;
}

TapFilter cmfp_filter(const ChannelRealization& ch) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(ch.antennas()) * ch.users());
  TapFilter f;
  for (int l = 0; l < ch.taps(); ++l) {
    f.delays.push_back(-l);
    f.taps.push_back(scale * ch.csi[l]);
  }
  return f;
}

Block cmfp_transmit(const ChannelRealization& ch, const Block& symbols, Framing framing) {
  if (symbols.rows() != ch.users())
    throw std::invalid_argument("cmfp_transmit: symbol block must have K rows");
  if (symbols.cols() <= ch.taps())
    throw std::invalid_argument("cmfp_transmit: block length must exceed the channel memory");
  return apply(cmfp_filter(ch), symbols, framing);
}

FilterBank rzfp_bank(const GramSpectra& spectra, double beta) {
  FilterBank bank = make_bank(spectra.regularized_inverse(beta), beta);
  normalize_bank(bank);
  return bank;
}

FilterBank rzfp_bank(const ChannelRealization& ch, double beta) {
  return rzfp_bank(GramSpectra(downlink_freq(ch)), beta);
}

FilterBank zfp_bank(const ChannelRealization& ch) { return rzfp_bank(ch, 0.0); }

Block precoded_transmit(const FilterBank& bank, const Block& symbols, Framing framing) {
  if (symbols.cols() < bank.dft_size())
    throw std::invalid_argument("precoded_transmit: block length must be at least N");
  return apply(bank.taps(), symbols, framing);
}

Block downlink_receive(const ChannelRealization& ch, const Block& transmitted, const Block& noise,
                       Framing framing) {
  if (noise.rows() != ch.users() || noise.cols() != transmitted.cols())
    throw std::invalid_argument("downlink_receive: noise block must be K x T");
  return apply(downlink_channel(ch), transmitted, framing) + noise;
}

}  // namespace scmimo

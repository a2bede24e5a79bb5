#pragma once

#include "scmimo/channel.hpp"
#include "scmimo/filter_bank.hpp"

namespace scmimo {

/// Uplink block with its cyclic prefix: the last T_c payload columns are
/// prepended, so `with_cp.col(t) == payload.col((t - T_c) mod T)`.
struct UplinkFrame {
  Block payload;
  Block with_cp;

  int cyclic_prefix() const { return static_cast<int>(with_cp.cols() - payload.cols()); }
};

UplinkFrame make_uplink_frame(Block payload, int cyclic_prefix);

// The base-station side of the uplink channel: csi[l] at delay +l.
TapFilter uplink_channel(const ChannelRealization& ch);

// Linear convolution over the CP frame, first T_c outputs dropped, noise
// added. Throws when T_c <= L.
Block uplink_receive(const ChannelRealization& ch, const UplinkFrame& frame, const Block& noise);

// csi[l]^H / sqrt(MK) at delay -l.
TapFilter cmfe_filter(const ChannelRealization& ch);
// y[i] = (1/sqrt(MK)) sum_l csi[l]^H r[(i + l) mod T].
Block cmfe_apply(const ChannelRealization& ch, const Block& received);

// Q_nu = (H_nu^H H_nu + beta I)^{-1} H_nu^H with H_nu = csi_freq[nu], so
// Q_nu H_nu = I at beta = 0. No output normalization.
FilterBank zfe_bank(const ChannelRealization& ch);
FilterBank mmsee_bank(const ChannelRealization& ch, double beta);
// Same, from precomputed spectra of ch.csi_freq.
FilterBank mmsee_bank(const GramSpectra& spectra, double beta);

// y[i] = sum_m Q_m r[(i - tap_delay(m)) mod T]. Requires T >= N.
Block apply_equalizer_bank(const FilterBank& bank, const Block& received);

}  // namespace scmimo

#pragma once

#include "scmimo/channel.hpp"
#include "scmimo/filter_bank.hpp"

namespace scmimo {

// Downlink transfer matrices sum_l exp(+j 2 pi nu l / N) csi[l]. The
// received signal at bin nu is downlink_freq[nu]^H times the transmitted bin,
// so zero forcing means downlink_freq[nu]^H W_nu = a I.
MatrixSeq downlink_freq(const ChannelRealization& ch);

// The K-user receive side of the downlink: csi[l]^H applied at delay +l.
TapFilter downlink_channel(const ChannelRealization& ch);

// Channel matched filter precoder: csi[l] / sqrt(MK) at delay -l.
TapFilter cmfp_filter(const ChannelRealization& ch);

// x[i] = (1/sqrt(MK)) sum_l csi[l] s[i + l].
Block cmfp_transmit(const ChannelRealization& ch, const Block& symbols,
                    Framing framing = Framing::Circular);

// Both banks come back normalized for unit transmit gain.
FilterBank zfp_bank(const ChannelRealization& ch);
FilterBank rzfp_bank(const ChannelRealization& ch, double beta);
// Same, from precomputed spectra of downlink_freq(ch).
FilterBank rzfp_bank(const GramSpectra& spectra, double beta);

// x[i] = sum_m W_m s[i - tap_delay(m)]. Requires T >= N.
Block precoded_transmit(const FilterBank& bank, const Block& symbols,
                        Framing framing = Framing::Circular);

// y[i] = sum_l csi[l]^H x[i - l] + n[i].
Block downlink_receive(const ChannelRealization& ch, const Block& transmitted,
                       const Block& noise, Framing framing = Framing::Circular);

}  // namespace scmimo

#pragma once

#include "scmimo/channel.hpp"
#include "scmimo/correlation.hpp"

namespace fixture {

// M=16, K=4, L=4, N=T=64, T_c=8: small enough for many draws, N = T so the
// per-bin design is exact on the block grid.
inline scmimo::SimulationDims small_dims() {
  scmimo::SimulationDims d;
  d.antennas = 16;
  d.users = 4;
  d.taps = 4;
  d.dft_size = 64;
  d.block_length = 64;
  d.cyclic_prefix = 8;
  return d;
}

inline scmimo::ChannelRealization channel(const scmimo::SimulationDims& dims, double alpha,
                                          std::uint64_t trial, std::uint64_t seed = 42) {
  scmimo::RandomStream rng(seed, trial);
  return scmimo::draw_channel(dims, scmimo::exponential_pdp(dims.users, dims.taps),
                              scmimo::exponential_correlation(
                                  scmimo::ArrayGeometry::ula(dims.antennas, 0.5), alpha),
                              rng);
}

// Single-tap channel with the given composite matrix, unit PDP and A = I.
inline scmimo::ChannelRealization flat_channel(const scmimo::CMatrix& h, int dft_size) {
  const auto users = static_cast<int>(h.cols());
  return scmimo::make_channel({h}, scmimo::uniform_pdp(users, 1),
                              scmimo::identity_correlation(static_cast<int>(h.rows())), dft_size);
}

inline double cosine(const scmimo::CMatrix& a, const scmimo::CMatrix& b) {
  const auto inner = (a.adjoint() * b).trace();
  return std::abs(inner) / (a.norm() * b.norm());
}

}  // namespace fixture

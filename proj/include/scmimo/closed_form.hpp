#pragma once

#include "scmimo/channel.hpp"
#include "scmimo/correlation.hpp"

namespace scmimo {

// All rates in bits per channel use, with the 1/2 prefactor per user.

// (K/2) log2(1 + M rho / (K (tr(A^2)/M) rho + K)).
double cmfp_rate_closed(double rho, int antennas, int users, double trace_a2);
// rho -> infinity limit of the above: (K/2) log2(1 + M^2 / (K tr(A^2))).
double cmfp_rate_limit(int antennas, int users, double trace_a2);
// (K/2) log2(1 + M rho / K).
double coop_capacity(double rho, int antennas, int users);
// (K/2) log2(1 + (tr(A^2) S rho + tr(A)^2 rho) / (tr(A^2)(K - S) rho + M)),
// S = sum_l d_l^2 of the given PDP row.
double cmfe_rate_closed(double rho, int antennas, int users, double trace_a, double trace_a2,
                        const RVector& pdp_row);

// Expected per-user quantities under the channel matched filters.
double cmfp_desired_power(double rho, int antennas, int users);
double cmfp_effective_noise(double rho, int antennas, double trace_a2);
double cmfe_noise_power(int antennas, int users, double trace_a);

/// E{F(l, l-b)[k,q] conj(F(l', l'-b)[k,q])} where F(l, j) = csi[l]^H csi[j].
/// Throws std::out_of_range when a tap index falls outside [0, L).
cdouble appendix_moment(int l, int l_prime, int b, int k, int q, const CorrelationMatrix& corr,
                        const PowerDelayProfile& pdp);

// Which of the seven moment cases (1-based) the index tuple falls into.
int appendix_case(int l, int l_prime, int b, int k, int q);

}  // namespace scmimo

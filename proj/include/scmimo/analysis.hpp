#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scmimo/channel.hpp"
#include "scmimo/correlation.hpp"
#include "scmimo/filter_bank.hpp"
#include "scmimo/geometry.hpp"

namespace scmimo {

enum class Link { Downlink, Uplink };
enum class FilterKind { CMFP, ZFP, RZFP, CMFE, ZFE, MMSEE };

std::string to_string(Link link);
std::string to_string(FilterKind filter);
Link parse_link(const std::string& text);
FilterKind parse_filter(const std::string& text);
Link link_of(FilterKind filter);
bool uses_beta(FilterKind filter);

/// Per-user statistics of one channel draw, normalized to unit symbol
/// variance. `gain` is the realized same-symbol coefficient of user k; under
/// linear framing it and `gain_power` are averaged over receive times.
struct DrawStats {
  CVector gain;
  RVector gain_power;
  RVector isi;    // same user, other lags
  RVector mui;    // other users, all lags
  RVector noise;  // output noise variance per unit input noise
};

// Impulse response of `second` after `first`, with delays folded into
// [0, period). Taps at equal folded delays are summed.
TapFilter cascade(const TapFilter& first, const TapFilter& second, int period);

// Statistics of a circular K x K end-to-end response.
DrawStats response_stats(const TapFilter& response, const RVector& noise_gain);

// Statistics of `second` after `first` with both applied linearly to a
// T-sample block.
DrawStats linear_response_stats(const TapFilter& first, const TapFilter& second, int block_length,
                                const RVector& noise_gain);

/// Per-user powers, in the units of the received signal.
struct NoiseBreakdown {
  RVector desired;
  RVector if_power;
  RVector isi;
  RVector mui;
  RVector awgn;

  double mean_desired() const { return desired.mean(); }
  double mean_if() const { return if_power.mean(); }
  double mean_isi() const { return isi.mean(); }
  double mean_mui() const { return mui.mean(); }
  double mean_awgn() const { return awgn.mean(); }
  RVector effective_noise() const { return if_power + isi + mui + awgn; }
  RVector sinr() const;
};

// Single-draw decomposition. Downlink users only know `reference` and see
// the deviation of the realized gain from it as interference; the uplink
// receiver knows the realized gain, so IF is zero and `reference` is ignored.
NoiseBreakdown decompose(Link link, const DrawStats& stats, double rho, const CVector& reference);

// sum_k (1/2) log2(1 + SINR_k).
double sum_rate(const RVector& sinr);

/// A fully specified operating point.
struct Scenario {
  SimulationDims dims;
  FilterKind filter = FilterKind::CMFP;
  CorrelationMatrix corr;
  PowerDelayProfile pdp;
  double beta = 0.0;
  Framing framing = Framing::Circular;
  // Labels for reports.
  std::string corr_model = "identity";
  double corr_param = 0.0;
  double corr_mu = 0.0;
};

struct ScenarioMeta {
  Link link = Link::Downlink;
  FilterKind filter = FilterKind::CMFP;
  std::string corr_model;
  double corr_param = 0.0;
  double corr_mu = 0.0;
  double rho_db = 0.0;
  double beta = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SumRateResult {
  double rate_bpcu = 0.0;
  RVector per_user_rates;
  NoiseBreakdown breakdown;
  // Standard errors of the user-averaged breakdown entries.
  double desired_se = 0.0, if_se = 0.0, isi_se = 0.0, mui_se = 0.0, awgn_se = 0.0;
  // Sample mean of the realized gain per user and its standard error.
  CVector mean_gain;
  RVector mean_gain_se;
  ScenarioMeta meta;
};

/// Draw statistics for all trials of a scenario, kept in trial order so the
/// reduction does not depend on scheduling.
struct TrialStats {
  std::vector<DrawStats> draws;
  // Analytic reference gain per user, if the filter has one.
  std::optional<CVector> reference;
};

// Statistics of one channel draw for `filter`. Banks are built from
// `spectra` when given (it must belong to the filter's link).
DrawStats measure_draw(FilterKind filter, const ChannelRealization& ch, const SimulationDims& dims,
                       double beta, Framing framing, const GramSpectra* spectra = nullptr);

// Trial t uses RandomStream(seed, t, Channel).
TrialStats collect_trials(const Scenario& scenario, int trials);
SumRateResult assemble(const TrialStats& stats, const Scenario& scenario, double rho_db);

// collect_trials + assemble at scenario.dims.rho_db.
SumRateResult sum_rate_mc(const Scenario& scenario, int trials);

// CMFP: (1/sqrt(MK)) tr(A) sum_l d_l[k] for every user.
CVector cmfp_reference_gain(const CorrelationMatrix& corr, const PowerDelayProfile& pdp);

// Runs body(i) for i in [0, n) on up to `workers()` threads.
void parallel_for(int n, const std::function<void(int)>& body);
// SCMIMO_THREADS if set, else the hardware concurrency.
int workers();

// Pairwise (cascade) sum of `values` in index order.
double pairwise_sum(const std::vector<double>& values);

}  // namespace scmimo

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scmimo/analysis.hpp"
#include "scmimo/config.hpp"
#include "scmimo/filter_bank.hpp"

namespace scmimo {

/// Searches the regularization weight of RZFP or MMSEE by Monte Carlo sum
/// rate. All candidates are scored on the same channel draws, and trial
/// statistics per candidate are memoized, so sweeping the power through one
/// optimizer reuses the coarse grid.
///
/// Search: the grid 10^k for k = -6..6, then golden-section refinement in
/// log10 on the bracket around the best grid point until the bracket is
/// within 1% in beta. The refined point replaces the grid winner only when
/// strictly better; among equal grid scores (to 1e-12 relative) the smallest
/// beta wins.
class BetaOptimizer {
 public:
  BetaOptimizer(const Scenario& scenario, int trials);

  struct Result {
    double beta = 0.0;
    double rate = 0.0;
    std::vector<std::pair<double, double>> evaluated;  // (beta, rate) in order
  };

  Result optimize(double rho_db);
  double rate(double beta, double rho_db);

 private:
  const TrialStats& stats_for(double beta);

  Scenario scenario_;
  std::vector<ChannelRealization> channels_;
  std::vector<GramSpectra> spectra_;
  std::map<double, TrialStats> memo_;
};

// One-shot convenience over BetaOptimizer.
double optimize_beta(const Scenario& scenario, double rho_db, int trials);

/// One CSV row.
struct SweepRow {
  std::string link;
  std::string filter;
  std::string corr_model;
  double corr_param = 0.0;
  double mu = 0.0;
  double rho_db = 0.0;
  double rate_bpcu = 0.0;
  double desired = 0.0;
  double if_power = 0.0;
  double isi = 0.0;
  double mui = 0.0;
  double awgn = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

SweepRow to_row(const SumRateResult& result);

// Rows in order filter, correlation point, power.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config);

inline constexpr const char* kCsvHeader =
    "link,filter,corr_model,corr_param,mu,rho_f_db,rate_bpcu,desired,if,isi,mui,awgn,trials,seed";

// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double value);

std::string to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);
std::vector<SweepRow> read_csv(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// A standalone matplotlib script that reads `csv_path` (relative to the
// script's own directory when relative) and draws one curve per
// filter/parameter pair, one panel per correlation model and mu.
std::string plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                        const std::string& image_name);
// Writes the script to `script_path`, referencing the CSV relative to it.
// Throws without touching the file when `rows` is empty.
void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                      const std::string& script_path);

}  // namespace scmimo

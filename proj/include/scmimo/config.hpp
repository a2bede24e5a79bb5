#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scmimo/analysis.hpp"
#include "scmimo/channel.hpp"
#include "scmimo/correlation.hpp"
#include "scmimo/filter_bank.hpp"
#include "scmimo/geometry.hpp"

namespace scmimo {

/// Raised for malformed or out-of-domain configuration; the message starts
/// with the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& message);
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class CorrModel { Identity, Exponential, Bessel };
enum class BetaMode { GridOpt, Fixed };

std::string to_string(CorrModel model);
std::string to_string(BetaMode mode);

// One correlation parameter point: alpha for the exponential model, (eta, mu)
// for the Bessel model, unused for identity.
struct CorrPoint {
  double param = 0.0;
  double mu = 0.0;
};

struct ScenarioConfig {
  SimulationDims dims;
  Link link = Link::Downlink;
  std::vector<FilterKind> filters;
  ArrayKind array = ArrayKind::ULA;
  int per_row = 0;  // UPA only
  double spacing = 0.5;
  CorrModel corr_model = CorrModel::Identity;
  std::vector<CorrPoint> corr_points{CorrPoint{}};
  std::string pdp = "exponential";
  std::vector<double> rho_db_grid;
  int trials = 500;
  BetaMode beta_mode = BetaMode::GridOpt;
  double beta_value = 1.0;
  int beta_trials = 100;
  Framing framing = Framing::Circular;
  std::string output;

  ArrayGeometry geometry() const;
  CorrelationMatrix correlation(const CorrPoint& point) const;
  PowerDelayProfile power_delay_profile() const;
  // Base scenario for one filter and correlation point, at the first grid power.
  Scenario scenario(FilterKind filter, const CorrPoint& point) const;
};

/// Ordered key=value map as read from a file. Later assignments win.
using ConfigMap = std::map<std::string, std::string>;

// Lines are `key = value`; `#` starts a comment; blank lines are ignored.
ConfigMap parse_config_text(std::string_view text, const std::string& source = "<config>");
ConfigMap read_config_file(const std::string& path);
// Applies one `key=value` override.
void apply_override(ConfigMap& map, const std::string& assignment);

// Validates every key and builds the config. The seed falls back to
// SCMIMO_SEED, then 1.
ScenarioConfig build_config(const ConfigMap& map);

// Sweep grids: comma-separated values or `start:step:stop` (inclusive).
std::vector<double> parse_grid(const std::string& key, const std::string& text);
// A real number, or a multiple/fraction of pi such as `pi/4`, `-pi/2`, `0.5*pi`.
double parse_angle(const std::string& key, const std::string& text);

}  // namespace scmimo

#include "scmimo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "scmimo/random.hpp"

namespace scmimo {

ConfigError::ConfigError(const std::string& key, const std::string& message)
    : std::invalid_argument(key + ": " + message), key_(key) {}

std::string to_string(CorrModel model) {
  switch (model) {
    case CorrModel::Identity: return "identity";
    case CorrModel::Exponential: return "exponential";
    case CorrModel::Bessel: return "bessel";
  }
  return "?";
}

std::string to_string(BetaMode mode) { return mode == BetaMode::GridOpt ? "grid_opt" : "fixed"; }

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ConfigError(key, "expected a real number, got '" + t + "'");
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  return value;
}

int parse_positive(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < 1 || v > 1'000'000'000) throw ConfigError(key, "must be a positive integer");
  return static_cast<int>(v);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "link",          "filters",         "dims.antennas",     "dims.users",
      "dims.taps",     "dims.dft_size",   "dims.block_length", "dims.cyclic_prefix",
      "geometry.kind", "geometry.per_row", "geometry.spacing", "corr.model",
      "corr.alpha",    "corr.points",     "pdp",               "rho_db",
      "trials",        "beta.mode",       "beta.value",        "beta.trials",
      "seed",          "dl_framing",      "output",            "title"};
  return keys;
}

}  // namespace

double parse_angle(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return parse_real(key, t);
  // [sign][coef*]pi[/den]
  std::string head = trim(t.substr(0, pos));
  std::string tail = trim(t.substr(pos + 2));
  double coef = 1.0;
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  if (head == "-")
    coef = -1.0;
  else if (!head.empty() && head != "+")
    coef = parse_real(key, head);
  double den = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError(key, "malformed angle '" + t + "'");
    den = parse_real(key, tail.substr(1));
    if (den == 0.0) throw ConfigError(key, "division by zero in '" + t + "'");
  }
  return coef * std::numbers::pi / den;
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(key, "grid must not be empty");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError(key, "range must be start:step:stop");
    const double start = parse_real(key, parts[0]);
    const double step = parse_real(key, parts[1]);
    const double stop = parse_real(key, parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError(key, "range needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError(key, "range has too many points");
    for (long long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  for (const auto& item : split(t, ',')) out.push_back(parse_real(key, item));
  return out;
}

ConfigMap parse_config_text(std::string_view text, const std::string& source) {
  ConfigMap map;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError(source + ":" + std::to_string(number), "expected key = value");
    map[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return map;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(ConfigMap& map, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must have the form key=value");
  map[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

ScenarioConfig build_config(const ConfigMap& map) {
  for (const auto& [key, value] : map)
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");

  auto get = [&map](const std::string& key) -> const std::string* {
    auto it = map.find(key);
    return it == map.end() ? nullptr : &it->second;
  };
  auto wrap = [](const std::string& key, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      std::string what = e.what();
      if (what.starts_with(key + ": ")) what.erase(0, key.size() + 2);
      throw ConfigError(key, what);
    }
  };

  ScenarioConfig c;
  if (auto v = get("link")) c.link = wrap("link", [&] { return parse_link(*v); });

  SimulationDims& d = c.dims;
  const std::pair<const char*, int*> dims_keys[] = {
      {"dims.antennas", &d.antennas},       {"dims.users", &d.users},
      {"dims.taps", &d.taps},               {"dims.dft_size", &d.dft_size},
      {"dims.block_length", &d.block_length}, {"dims.cyclic_prefix", &d.cyclic_prefix}};
  for (const auto& [key, field] : dims_keys)
    if (auto v = get(key)) *field = parse_positive(key, *v);
  wrap("dims", [&] {
    d.validate();
    return 0;
  });

  if (auto v = get("filters")) {
    for (const auto& item : split(*v, ',')) {
      const FilterKind f = wrap("filters", [&] { return parse_filter(item); });
      if (link_of(f) != c.link)
        throw ConfigError("filters", to_string(f) + " does not belong to the " + to_string(c.link));
      c.filters.push_back(f);
    }
  }
  if (c.filters.empty()) throw ConfigError("filters", "at least one filter is required");

  if (auto v = get("geometry.kind")) c.array = wrap("geometry.kind", [&] { return parse_array_kind(*v); });
  if (auto v = get("geometry.spacing")) c.spacing = parse_real("geometry.spacing", *v);
  if (auto v = get("geometry.per_row")) c.per_row = parse_positive("geometry.per_row", *v);
  if (c.array == ArrayKind::UPA && c.per_row == 0)
    throw ConfigError("geometry.per_row", "required for a UPA");
  wrap("geometry", [&] { return c.geometry(); });

  if (auto v = get("corr.model")) {
    if (*v == "identity")
      c.corr_model = CorrModel::Identity;
    else if (*v == "exponential")
      c.corr_model = CorrModel::Exponential;
    else if (*v == "bessel")
      c.corr_model = CorrModel::Bessel;
    else
      throw ConfigError("corr.model", "expected identity, exponential or bessel");
  }
  switch (c.corr_model) {
    case CorrModel::Identity:
      if (get("corr.alpha") || get("corr.points"))
        throw ConfigError("corr.model", "identity takes no correlation parameters");
      c.corr_points = {CorrPoint{}};
      break;
    case CorrModel::Exponential: {
      const auto* v = get("corr.alpha");
      if (!v) throw ConfigError("corr.alpha", "required for the exponential model");
      c.corr_points.clear();
      for (double a : parse_grid("corr.alpha", *v)) {
        if (!(a >= 0.0 && a < 1.0)) throw ConfigError("corr.alpha", "values must lie in [0, 1)");
        c.corr_points.push_back({a, 0.0});
      }
      break;
    }
    case CorrModel::Bessel: {
      const auto* v = get("corr.points");
      if (!v) throw ConfigError("corr.points", "required for the Bessel model (eta:mu list)");
      c.corr_points.clear();
      for (const auto& item : split(*v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw ConfigError("corr.points", "each point must be eta:mu");
        const double eta = parse_real("corr.points", parts[0]);
        if (!(eta >= 0.0)) throw ConfigError("corr.points", "eta must be nonnegative");
        c.corr_points.push_back({eta, parse_angle("corr.points", parts[1])});
      }
      break;
    }
  }
  if (c.corr_points.empty()) throw ConfigError("corr", "parameter grid must not be empty");

  if (auto v = get("pdp")) {
    if (*v != "exponential" && *v != "uniform") throw ConfigError("pdp", "expected exponential or uniform");
    c.pdp = *v;
  }

  if (auto v = get("rho_db"))
    c.rho_db_grid = parse_grid("rho_db", *v);
  else
    c.rho_db_grid = parse_grid("rho_db", "-10:2.5:20");
  d.rho_db = c.rho_db_grid.front();

  if (auto v = get("trials")) c.trials = parse_positive("trials", *v);
  if (auto v = get("beta.mode")) {
    if (*v == "grid_opt")
      c.beta_mode = BetaMode::GridOpt;
    else if (*v == "fixed")
      c.beta_mode = BetaMode::Fixed;
    else
      throw ConfigError("beta.mode", "expected grid_opt or fixed");
  }
  if (auto v = get("beta.value")) {
    c.beta_value = parse_real("beta.value", *v);
    if (!(c.beta_value >= 0.0)) throw ConfigError("beta.value", "must be nonnegative");
  }
  if (auto v = get("beta.trials")) c.beta_trials = parse_positive("beta.trials", *v);

  if (auto v = get("seed")) {
    const long long s = parse_integer("seed", *v);
    if (s < 0) throw ConfigError("seed", "must be nonnegative");
    d.seed = static_cast<std::uint64_t>(s);
  } else {
    d.seed = wrap("seed", [] { return default_seed(1); });
  }

  if (auto v = get("dl_framing")) c.framing = wrap("dl_framing", [&] { return parse_framing(*v); });
  if (auto v = get("output")) c.output = *v;

  // Fail early on parameter points the correlation models reject.
  for (const auto& p : c.corr_points) wrap("corr", [&] { return c.correlation(p); });
  return c;
}

ArrayGeometry ScenarioConfig::geometry() const {
  return array == ArrayKind::ULA ? ArrayGeometry::ula(dims.antennas, spacing)
                                 : ArrayGeometry::upa(dims.antennas, per_row, spacing);
}

CorrelationMatrix ScenarioConfig::correlation(const CorrPoint& point) const {
  switch (corr_model) {
    case CorrModel::Identity: return identity_correlation(dims.antennas);
    case CorrModel::Exponential: return exponential_correlation(geometry(), point.param);
    case CorrModel::Bessel: return bessel_correlation(geometry(), point.param, point.mu);
  }
  throw std::logic_error("unknown correlation model");
}

PowerDelayProfile ScenarioConfig::power_delay_profile() const {
  return pdp == "uniform" ? uniform_pdp(dims.users, dims.taps) : exponential_pdp(dims.users, dims.taps);
}

Scenario ScenarioConfig::scenario(FilterKind filter, const CorrPoint& point) const {
  Scenario s{dims,
             filter,
             correlation(point),
             power_delay_profile(),
             beta_value,
             framing,
             to_string(corr_model),
             corr_model == CorrModel::Identity ? 0.0 : point.param,
             corr_model == CorrModel::Bessel ? point.mu : 0.0};
  return s;
}

}  // namespace scmimo

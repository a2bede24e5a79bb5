#include "scmimo/experiments.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scmimo/precoding.hpp"
#include "scmimo/random.hpp"

namespace scmimo {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Regularization search

BetaOptimizer::BetaOptimizer(const Scenario& scenario, int trials) : scenario_(scenario) {
  if (!uses_beta(scenario.filter))
    throw std::invalid_argument(to_string(scenario.filter) + " has no regularization parameter");
  if (trials < 1) throw std::invalid_argument("beta search needs at least one trial");
  scenario_.dims.validate();
  channels_.resize(static_cast<std::size_t>(trials));
  std::vector<std::unique_ptr<GramSpectra>> spectra(static_cast<std::size_t>(trials));
  const bool downlink = link_of(scenario.filter) == Link::Downlink;
  parallel_for(trials, [&](int t) {
    RandomStream rng(scenario_.dims.seed, static_cast<std::uint64_t>(t), StreamPurpose::Channel);
    auto& ch = channels_[static_cast<std::size_t>(t)];
    ch = draw_channel(scenario_.dims, scenario_.pdp, scenario_.corr, rng);
    ch.fading.clear();
    spectra[static_cast<std::size_t>(t)] =
        std::make_unique<GramSpectra>(downlink ? downlink_freq(ch) : ch.csi_freq);
  });
  spectra_.reserve(spectra.size());
  for (auto& s : spectra) spectra_.push_back(std::move(*s));
}

const TrialStats& BetaOptimizer::stats_for(double beta) {
  auto it = memo_.find(beta);
  if (it != memo_.end()) return it->second;
  TrialStats stats;
  stats.draws.resize(channels_.size());
  parallel_for(static_cast<int>(channels_.size()), [&](int t) {
    const auto i = static_cast<std::size_t>(t);
    stats.draws[i] = measure_draw(scenario_.filter, channels_[i], scenario_.dims, beta,
                                  scenario_.framing, &spectra_[i]);
  });
  return memo_.emplace(beta, std::move(stats)).first->second;
}

double BetaOptimizer::rate(double beta, double rho_db) {
  Scenario s = scenario_;
  s.beta = beta;
  return assemble(stats_for(beta), s, rho_db).rate_bpcu;
}

BetaOptimizer::Result BetaOptimizer::optimize(double rho_db) {
  Result r;
  auto eval = [&](double log_beta) {
    const double beta = std::pow(10.0, log_beta);
    const double value = rate(beta, rho_db);
    r.evaluated.emplace_back(beta, value);
    return value;
  };

  // Scores closer than this (relative) count as ties.
  constexpr double kTie = 1e-12;
  auto better = [&](double v, double than) { return v > than + kTie * std::abs(than); };

  constexpr int kLow = -6, kHigh = 6;
  int best_k = kLow;
  double best = -1.0;
  for (int k = kLow; k <= kHigh; ++k) {
    const double v = eval(k);
    if (better(v, best)) {
      best = v;
      best_k = k;
    }
  }
  r.beta = std::pow(10.0, best_k);
  r.rate = best;

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double resolution = std::log10(1.01);
  double a = std::max<double>(kLow, best_k - 1);
  double b = std::min<double>(kHigh, best_k + 1);
  double c = b - golden * (b - a);
  double d = a + golden * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  double refined = c, refined_value = fc;
  if (fd > refined_value) refined = d, refined_value = fd;
  while (b - a > resolution) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - golden * (b - a);
      fc = eval(c);
      if (fc > refined_value) refined = c, refined_value = fc;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + golden * (b - a);
      fd = eval(d);
      if (fd > refined_value) refined = d, refined_value = fd;
    }
  }
  if (better(refined_value, best)) {
    r.beta = std::pow(10.0, refined);
    r.rate = refined_value;
  }
  return r;
}

double optimize_beta(const Scenario& scenario, double rho_db, int trials) {
  BetaOptimizer opt(scenario, trials);
  return opt.optimize(rho_db).beta;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepRow to_row(const SumRateResult& r) {
  SweepRow row;
  row.link = to_string(r.meta.link);
  row.filter = to_string(r.meta.filter);
  row.corr_model = r.meta.corr_model;
  row.corr_param = r.meta.corr_param;
  row.mu = r.meta.corr_mu;
  row.rho_db = r.meta.rho_db;
  row.rate_bpcu = r.rate_bpcu;
  row.desired = r.breakdown.mean_desired();
  row.if_power = r.breakdown.mean_if();
  row.isi = r.breakdown.mean_isi();
  row.mui = r.breakdown.mean_mui();
  row.awgn = r.breakdown.mean_awgn();
  row.trials = r.meta.trials;
  row.seed = r.meta.seed;
  return row;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config) {
  if (config.filters.empty()) throw std::invalid_argument("sweep needs at least one filter");
  if (config.rho_db_grid.empty()) throw std::invalid_argument("sweep needs a non-empty power grid");
  std::vector<SweepRow> rows;
  for (FilterKind filter : config.filters) {
    for (const CorrPoint& point : config.corr_points) {
      Scenario base = config.scenario(filter, point);
      if (uses_beta(filter) && config.beta_mode == BetaMode::GridOpt) {
        BetaOptimizer opt(base, config.beta_trials);
        for (double rho_db : config.rho_db_grid) {
          Scenario s = base;
          s.beta = opt.optimize(rho_db).beta;
          s.dims.rho_db = rho_db;
          rows.push_back(to_row(sum_rate_mc(s, config.trials)));
        }
      } else {
        const TrialStats stats = collect_trials(base, config.trials);
        for (double rho_db : config.rho_db_grid) rows.push_back(to_row(assemble(stats, base, rho_db)));
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.link + ',' + r.filter + ',' + r.corr_model + ',' + format_number(r.corr_param) + ',' +
           format_number(r.mu) + ',' + format_number(r.rho_db) + ',' + format_number(r.rate_bpcu) +
           ',' + format_number(r.desired) + ',' + format_number(r.if_power) + ',' +
           format_number(r.isi) + ',' + format_number(r.mui) + ',' + format_number(r.awgn) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

namespace {

template <class T>
T parse_field(const std::string& field, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw std::invalid_argument("CSV line " + std::to_string(line) + ": bad number '" + field + "'");
  return value;
}

}  // namespace

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("CSV header does not match the sweep schema");
  std::vector<SweepRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string item;
    std::istringstream fields(line);
    while (std::getline(fields, item, ',')) f.push_back(item);
    if (f.size() != 14)
      throw std::invalid_argument("CSV line " + std::to_string(number) + ": expected 14 fields");
    SweepRow r;
    r.link = f[0];
    r.filter = f[1];
    r.corr_model = f[2];
    r.corr_param = parse_field<double>(f[3], number);
    r.mu = parse_field<double>(f[4], number);
    r.rho_db = parse_field<double>(f[5], number);
    r.rate_bpcu = parse_field<double>(f[6], number);
    r.desired = parse_field<double>(f[7], number);
    r.if_power = parse_field<double>(f[8], number);
    r.isi = parse_field<double>(f[9], number);
    r.mui = parse_field<double>(f[10], number);
    r.awgn = parse_field<double>(f[11], number);
    r.trials = parse_field<int>(f[12], number);
    r.seed = parse_field<std::uint64_t>(f[13], number);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Plot script

namespace {

std::string py_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace

std::string plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                        const std::string& image_name) {
  if (rows.empty()) throw std::invalid_argument("cannot plot an empty table");
  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
       "\"\"\"Sum rate versus transmit power, one curve per filter and parameter.\"\"\"\n"
       "import csv\n"
       "import os\n"
       "import sys\n"
       "from collections import OrderedDict\n\n"
       "import matplotlib\n"
       "matplotlib.use('Agg')\n"
       "import matplotlib.pyplot as plt\n\n"
       "HERE = os.path.dirname(os.path.abspath(__file__))\n"
    << "CSV = os.path.join(HERE, " << py_string(csv_path) << ")\n"
    << "IMAGE = os.path.join(HERE, " << py_string(image_name) << ")\n\n\n"
       "def main():\n"
       "    panels = OrderedDict()\n"
       "    with open(CSV, newline='') as f:\n"
       "        for row in csv.DictReader(f):\n"
       "            panel = (row['link'], row['corr_model'], float(row['mu']))\n"
       "            curve = (row['filter'], float(row['corr_param']))\n"
       "            pts = panels.setdefault(panel, OrderedDict()).setdefault(curve, [])\n"
       "            pts.append((float(row['rho_f_db']), float(row['rate_bpcu'])))\n"
       "    fig, axes = plt.subplots(1, len(panels), figsize=(6 * len(panels), 4.5), squeeze=False)\n"
       "    for ax, (panel, curves) in zip(axes[0], panels.items()):\n"
       "        link, model, mu = panel\n"
       "        for (name, param), pts in curves.items():\n"
       "            pts.sort()\n"
       "            label = name if model == 'identity' else '%s, %g' % (name, param)\n"
       "            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker='o', ms=3, label=label)\n"
       "        title = '%s, %s' % (link, model)\n"
       "        if model == 'bessel':\n"
       "            title += ', mu=%.3g' % mu\n"
       "        ax.set_title(title)\n"
       "        ax.set_xlabel('average transmit power (dB)')\n"
       "        ax.set_ylabel('sum rate (bpcu)')\n"
       "        ax.grid(True, alpha=0.3)\n"
       "        ax.legend(fontsize=7)\n"
       "    fig.tight_layout()\n"
       "    fig.savefig(IMAGE, dpi=150)\n"
       "    return 0\n\n\n"
       "if __name__ == '__main__':\n"
       "    sys.exit(main())\n";
  return s.str();
}

void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                      const std::string& script_path) {
  if (rows.empty()) throw std::invalid_argument("cannot plot an empty table; no script written");
  const fs::path script = fs::absolute(script_path).lexically_normal();
  const fs::path csv = fs::absolute(csv_path).lexically_normal();
  std::string relative = csv.lexically_relative(script.parent_path()).generic_string();
  if (relative.empty()) relative = csv.generic_string();
  const std::string image = script.stem().string() + ".png";
  write_text_file(script.string(), plot_script(rows, relative, image));
}

}  // namespace scmimo

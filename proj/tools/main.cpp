#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scmimo/config.hpp"
#include "scmimo/experiments.hpp"
#include "scmimo/random.hpp"
#include "scmimo/validation.hpp"

namespace {

using namespace scmimo;

ScenarioConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  ConfigMap map = read_config_file(path);
  for (const auto& o : overrides) apply_override(map, o);
  return build_config(map);
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& out_override, bool quiet) {
  ScenarioConfig config = load(config_path, overrides);
  if (!out_override.empty()) config.output = out_override;
  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_sweep(config);
  const std::string csv = to_csv(rows);
  if (config.output.empty() || config.output == "-") {
    std::cout << csv;
  } else {
    write_text_file(config.output, csv);
  }
  if (!quiet) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "sweep: " << rows.size() << " rows in " << secs << " s";
    if (!config.output.empty() && config.output != "-") std::cerr << " -> " << config.output;
    std::cerr << '\n';
  }
  return 0;
}

int cmd_validate(const std::string& suite, double tolerance_scale, std::uint64_t seed) {
  SuiteOptions options;
  options.tolerance_scale = tolerance_scale;
  options.seed = seed;
  const SuiteReport report = run_suite(suite, options);
  std::cout << report.format();
  std::cerr << "suite " << suite << ": " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 1;
}

int cmd_plot(const std::string& csv, const std::string& out) {
  const auto rows = read_csv(csv);
  emit_plot_script(rows, csv, out);
  return 0;
}

int cmd_beta(const std::string& config_path, const std::vector<std::string>& overrides, double rho_db) {
  const ScenarioConfig config = load(config_path, overrides);
  std::cout << "filter,corr_model,corr_param,mu,rho_f_db,beta,rate_bpcu\n";
  bool any = false;
  for (FilterKind f : config.filters) {
    if (!uses_beta(f)) continue;
    any = true;
    for (const auto& point : config.corr_points) {
      BetaOptimizer opt(config.scenario(f, point), config.beta_trials);
      const auto r = opt.optimize(rho_db);
      std::cout << to_string(f) << ',' << to_string(config.corr_model) << ',' << format_number(point.param)
                << ',' << format_number(point.mu) << ',' << format_number(rho_db) << ','
                << format_number(r.beta) << ',' << format_number(r.rate) << '\n';
    }
  }
  if (!any) {
    std::cerr << "beta: none of the configured filters has a regularization parameter\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-carrier massive MIMO link simulator"};
  app.require_subcommand(1);

  std::string config_path, csv_path, out_path, suite;
  std::vector<std::string> overrides;
  double rho_db = 0.0, tolerance_scale = 1.0;
  std::uint64_t seed = 0;
  bool quiet = false;

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--override", overrides, "key=value, repeatable");
  sweep->add_option("--out", out_path, "CSV path (overrides the output key; - for stdout)");
  sweep->add_flag("-q,--quiet", quiet, "No progress summary");

  auto* validate = app.add_subcommand("validate", "Run a validation suite");
  validate->add_option("--suite", suite, "closed_forms | appendix | zero_forcing | figures")->required();
  validate->add_option("--tolerance-scale", tolerance_scale, "Multiply every tolerance");
  auto* seed_opt = validate->add_option("--seed", seed, "Master seed (default SCMIMO_SEED or built-in)");

  auto* plot = app.add_subcommand("plot", "Emit a plotting script for a sweep CSV");
  plot->add_option("--csv", csv_path, "Sweep CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out_path, "Script path")->required();

  auto* beta = app.add_subcommand("beta", "Search the regularization weight");
  beta->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  beta->add_option("--rho-db", rho_db, "Average transmit power in dB")->required();
  beta->add_option("--override", overrides, "key=value, repeatable");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return cmd_sweep(config_path, overrides, out_path, quiet);
    if (*validate) {
      if (seed_opt->count() == 0) seed = default_seed(SuiteOptions{}.seed);
      return cmd_validate(suite, tolerance_scale, seed);
    }
    if (*plot) return cmd_plot(csv_path, out_path);
    if (*beta) return cmd_beta(config_path, overrides, rho_db);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scmimo/closed_form.hpp"
#include "scmimo/config.hpp"
#include "scmimo/correlation.hpp"
#include "scmimo/experiments.hpp"
#include "scmimo/validation.hpp"

namespace py = pybind11;
using namespace scmimo;

namespace {

ScenarioConfig config_from(const std::string& text, const std::vector<std::string>& overrides) {
  ConfigMap map = parse_config_text(text);
  for (const auto& o : overrides) apply_override(map, o);
  return build_config(map);
}

ArrayGeometry geometry_from(const std::string& kind, int antennas, int per_row, double spacing) {
  if (kind == "ula") return ArrayGeometry::ula(antennas, spacing);
  if (kind == "upa") return ArrayGeometry::upa(antennas, per_row, spacing);
  throw std::invalid_argument("unknown array kind: " + kind);
}

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["link"] = r.link;
  d["filter"] = r.filter;
  d["corr_model"] = r.corr_model;
  d["corr_param"] = r.corr_param;
  d["mu"] = r.mu;
  d["rho_f_db"] = r.rho_db;
  d["rate_bpcu"] = r.rate_bpcu;
  d["desired"] = r.desired;
  d["if"] = r.if_power;
  d["isi"] = r.isi;
  d["mui"] = r.mui;
  d["awgn"] = r.awgn;
  d["trials"] = r.trials;
  d["seed"] = r.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sum-rate simulator for linear filters on correlated frequency-selective massive MIMO links.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NotPsdError>(m, "NotPsdError", PyExc_ValueError);
  py::register_exception<SingularChannelError>(m, "SingularChannelError", PyExc_ArithmeticError);

  m.def("exponential_correlation",
        [](double alpha, int antennas, const std::string& kind, int per_row, double spacing) {
          return exponential_correlation(geometry_from(kind, antennas, per_row, spacing), alpha).matrix();
        },
        py::arg("alpha"), py::arg("antennas"), py::arg("kind") = "ula", py::arg("per_row") = 0,
        py::arg("spacing") = 0.5);
  m.def("bessel_correlation",
        [](double eta, double mu, int antennas, const std::string& kind, int per_row, double spacing) {
          return bessel_correlation(geometry_from(kind, antennas, per_row, spacing), eta, mu).matrix();
        },
        py::arg("eta"), py::arg("mu"), py::arg("antennas"), py::arg("kind") = "ula", py::arg("per_row") = 0,
        py::arg("spacing") = 0.5);

  m.def("cmfp_rate_closed", &cmfp_rate_closed, py::arg("rho"), py::arg("antennas"), py::arg("users"),
        py::arg("trace_a2"));
  m.def("cmfp_rate_limit", &cmfp_rate_limit, py::arg("antennas"), py::arg("users"), py::arg("trace_a2"));

  m.def("sweep",
        [](const std::string& text, const std::vector<std::string>& overrides) {
          const ScenarioConfig config = config_from(text, overrides);
          std::vector<SweepRow> rows;
          {
            py::gil_scoped_release release;
            rows = run_sweep(config);
          }
          py::list out;
          for (const auto& r : rows) out.append(row_dict(r));
          return out;
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
        "Run a sweep from config text and return one dict per CSV row.");
  m.def("sweep_csv",
        [](const std::string& text, const std::vector<std::string>& overrides) {
          const ScenarioConfig config = config_from(text, overrides);
          py::gil_scoped_release release;
          return to_csv(run_sweep(config));
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{});

  m.def("optimize_beta",
        [](const std::string& text, const std::string& filter, double rho_db, std::size_t point, int trials) {
          const ScenarioConfig config = config_from(text, {});
          if (point >= config.corr_points.size()) throw py::index_error("correlation point out of range");
          const Scenario sc = config.scenario(parse_filter(filter), config.corr_points[point]);
          py::gil_scoped_release release;
          BetaOptimizer opt(sc, trials);
          const auto r = opt.optimize(rho_db);
          return std::make_pair(r.beta, r.rate);
        },
        py::arg("config_text"), py::arg("filter"), py::arg("rho_db"), py::arg("point") = 0, py::arg("trials") = 100,
        "Return (beta, rate) maximizing the Monte-Carlo sum rate.");

  m.def("suite_names", &suite_names);
  m.def("run_suite",
        [](const std::string& name, double tolerance_scale) {
          SuiteOptions options;
          options.tolerance_scale = tolerance_scale;
          SuiteReport report;
          {
            py::gil_scoped_release release;
            report = run_suite(name, options);
          }
          py::list checks;
          for (const auto& c : report.checks) {
            py::dict d;
            d["name"] = c.name;
            d["group"] = c.group;
            d["expected"] = c.expected;
            d["measured"] = c.measured;
            d["tolerance"] = c.tolerance;
            d["passed"] = c.passed();
            checks.append(d);
          }
          py::dict out;
          out["suite"] = report.suite;
          out["passed"] = report.passed();
          out["checks"] = checks;
          return out;
        },
        py::arg("name"), py::arg("tolerance_scale") = 1.0);

  m.attr("CSV_HEADER") = std::string(kCsvHeader);
}

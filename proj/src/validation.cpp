#include "scmimo/validation.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "scmimo/analysis.hpp"
#include "scmimo/closed_form.hpp"
#include "scmimo/equalization.hpp"
#include "scmimo/experiments.hpp"
#include "scmimo/precoding.hpp"
#include "scmimo/random.hpp"

namespace scmimo {

bool Check::passed() const {
  if (!std::isfinite(measured)) return false;
  switch (relation) {
    case Relation::Within: return std::abs(measured - expected) < tolerance;
    case Relation::Greater: return measured > expected;
    case Relation::AtLeast: return measured >= expected;
    case Relation::Less: return measured < expected;
  }
  return false;
}

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return !checks.empty();
}

bool SuiteReport::group_passed(const std::string& group) const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.group != group) continue;
    any = true;
    if (!c.passed()) return false;
  }
  return any;
}

std::string SuiteReport::format() const {
  std::string out = "name,expected,measured,tolerance,verdict\n";
  for (const auto& c : checks)
    out += c.name + ',' + format_number(c.expected) + ',' + format_number(c.measured) + ',' +
           format_number(c.tolerance) + ',' + (c.passed() ? "PASS" : "FAIL") + '\n';
  return out;
}

namespace {

std::string label(double v) { return format_number(v); }

Check within(std::string name, double expected, double measured, double tolerance,
             const SuiteOptions& o, std::string group = {}) {
  return {std::move(name), Relation::Within, expected, measured, tolerance * o.tolerance_scale,
          std::move(group)};
}

Check relative(std::string name, double expected, double measured, double rel, const SuiteOptions& o,
               std::string group = {}) {
  return within(std::move(name), expected, measured, rel * std::abs(expected), o, std::move(group));
}

Check compare(std::string name, Relation rel, double bound, double measured, std::string group = {}) {
  return {std::move(name), rel, bound, measured, 0.0, std::move(group)};
}

Scenario make_scenario(const SimulationDims& dims, FilterKind filter, const ArrayGeometry& geometry,
                       double alpha) {
  return Scenario{dims,
                  filter,
                  exponential_correlation(geometry, alpha),
                  exponential_pdp(dims.users, dims.taps),
                  0.0,
                  Framing::Circular,
                  "exponential",
                  alpha,
                  0.0};
}

double user_mean_gain_power(const SumRateResult& r) { return r.mean_gain.cwiseAbs2().mean(); }

// 2 rho |g| se(g), user-averaged.
double desired_sample_se(const SumRateResult& r, double rho) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < r.mean_gain.size(); ++k)
    acc += 2.0 * rho * std::abs(r.mean_gain(k)) * r.mean_gain_se(k);
  return acc / static_cast<double>(r.mean_gain.size());
}

}  // namespace

SuiteReport closed_forms_suite(const SuiteOptions& o) {
  SuiteReport report{"closed_forms", {}};
  SimulationDims dims;
  dims.antennas = 16;
  dims.users = 4;
  dims.taps = 4;
  dims.block_length = 64;
  dims.dft_size = 16;
  dims.cyclic_prefix = 8;
  dims.rho_db = 10.0;
  dims.seed = o.seed;
  constexpr int kTrials = 2000;
  const double rho = dims.rho();
  const auto geometry = ArrayGeometry::ula(dims.antennas, 0.5);
  const double m = dims.antennas, k = dims.users;

  std::map<double, std::pair<double, double>> desired_by_alpha;  // value, se
  for (double alpha : {0.0, 0.7, 0.9, 0.99}) {
    const std::string tag = "alpha=" + label(alpha);
    const Scenario s = make_scenario(dims, FilterKind::CMFP, geometry, alpha);
    const SumRateResult r = sum_rate_mc(s, kTrials);

    const double desired = rho * user_mean_gain_power(r);
    desired_by_alpha[alpha] = {desired, desired_sample_se(r, rho)};
    report.checks.push_back(relative("cmfp.desired_power." + tag, cmfp_desired_power(rho, dims.antennas, dims.users),
                                     desired, 0.03, o, "1"));
    const double noise = r.breakdown.effective_noise().mean();
    report.checks.push_back(relative("cmfp.effective_noise." + tag,
                                     cmfp_effective_noise(rho, dims.antennas, s.corr.trace_squared()), noise,
                                     0.05, o, "1"));
    report.checks.push_back(relative("cmfp.sum_rate." + tag,
                                     cmfp_rate_closed(rho, dims.antennas, dims.users, s.corr.trace_squared()),
                                     r.rate_bpcu, 0.05, o));

    const Scenario u = make_scenario(dims, FilterKind::CMFE, geometry, alpha);
    const SumRateResult ru = sum_rate_mc(u, kTrials);
    report.checks.push_back(relative("cmfe.awgn." + tag, cmfe_noise_power(dims.antennas, dims.users, u.corr.trace()),
                                     ru.breakdown.mean_awgn(), 0.03, o, "1"));
    if (alpha == 0.0 || alpha == 0.7) {
      const double s2 = u.pdp.sum_squares(0);
      const double tr = u.corr.trace(), tr2 = u.corr.trace_squared();
      const double sinr_closed = (tr2 * s2 * rho + tr * tr * rho) / (tr2 * (k - s2) * rho + m);
      report.checks.push_back(relative("cmfe.sinr." + tag, sinr_closed, ru.breakdown.sinr().mean(), 0.05, o));
      report.checks.push_back(relative("cmfe.sum_rate." + tag,
                                       cmfe_rate_closed(rho, dims.antennas, dims.users, tr, tr2, u.pdp.row(0)),
                                       ru.rate_bpcu, 0.05, o));
    }
  }

  // Desired power does not depend on the correlation.
  const auto [d0, se0] = desired_by_alpha[0.0];
  const auto [d9, se9] = desired_by_alpha[0.9];
  report.checks.push_back(within("cmfp.desired_independent_of_correlation", d0, d9,
                                 2.0 * std::hypot(se0, se9), o));

  // Cooperative capacity bounds the matched filter for correlated arrays.
  for (double alpha : {0.7, 0.9, 0.99}) {
    const double tr2 = exponential_correlation(geometry, alpha).trace_squared();
    report.checks.push_back(compare("cmfp_closed_below_coop.alpha=" + label(alpha), Relation::Less,
                                    coop_capacity(rho, dims.antennas, dims.users),
                                    cmfp_rate_closed(rho, dims.antennas, dims.users, tr2)));
  }
  return report;
}

SuiteReport appendix_suite(const SuiteOptions& o) {
  SuiteReport report{"appendix", {}};
  SimulationDims dims;
  dims.antennas = 8;
  dims.users = 3;
  dims.taps = 4;
  dims.dft_size = 8;
  dims.block_length = 8;
  dims.cyclic_prefix = 5;
  dims.seed = o.seed;
  constexpr int kDraws = 100000;
  const auto corr = exponential_correlation(ArrayGeometry::ula(dims.antennas, 0.5), 0.7);
  const auto pdp = exponential_pdp(dims.users, dims.taps);

  struct Tuple {
    int l, lp, b, k, q;
  };
  // One index tuple per moment case, in case order.
  const Tuple tuples[] = {{1, 1, 0, 0, 0}, {2, 2, 1, 0, 0}, {1, 2, 0, 0, 0}, {2, 3, 1, 0, 0},
                          {1, 1, 0, 0, 1}, {2, 2, 1, 0, 1}, {1, 2, 0, 0, 1}};
  constexpr int kCases = 7;
  std::vector<std::array<cdouble, kCases>> samples(kDraws);
  parallel_for(kDraws, [&](int t) {
    RandomStream rng(dims.seed, static_cast<std::uint64_t>(t), StreamPurpose::Oracle);
    const auto ch = draw_channel(dims, pdp, corr, rng);
    auto f = [&](int l, int j, int k, int q) { return ch.csi[l].col(k).dot(ch.csi[j].col(q)); };
    for (int c = 0; c < kCases; ++c) {
      const Tuple& x = tuples[c];
      samples[t][c] = f(x.l, x.l - x.b, x.k, x.q) * std::conj(f(x.lp, x.lp - x.b, x.k, x.q));
    }
  });

  for (int c = 0; c < kCases; ++c) {
    const Tuple& x = tuples[c];
    std::vector<double> re(kDraws), im(kDraws);
    for (int t = 0; t < kDraws; ++t) {
      re[t] = samples[t][c].real();
      im[t] = samples[t][c].imag();
    }
    auto mean_se = [](const std::vector<double>& v) {
      const double n = static_cast<double>(v.size());
      const double mean = pairwise_sum(v) / n;
      std::vector<double> dev(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - mean) * (v[i] - mean);
      return std::pair{mean, std::sqrt(pairwise_sum(dev) / (n - 1.0) / n)};
    };
    const auto [mre, sre] = mean_se(re);
    const auto [mim, sim] = mean_se(im);
    const cdouble closed = appendix_moment(x.l, x.lp, x.b, x.k, x.q, corr, pdp);
    const std::string name = "moment.case" + std::to_string(c + 1);
    if (std::abs(closed) > 0.0) {
      const double rel_error = std::abs(cdouble(mre, mim) - closed) / std::abs(closed);
      report.checks.push_back(within(name + ".relative_error", 0.0, rel_error, 0.05, o, "2"));
    } else {
      report.checks.push_back(within(name + ".real", 0.0, mre, 3.0 * sre, o, "2"));
      report.checks.push_back(within(name + ".imag", 0.0, mim, 3.0 * sim, o, "2"));
    }
  }
  return report;
}

SuiteReport zero_forcing_suite(const SuiteOptions& o) {
  SuiteReport report{"zero_forcing", {}};
  SimulationDims dims;
  dims.antennas = 16;
  dims.users = 4;
  dims.taps = 4;
  dims.dft_size = 64;
  dims.block_length = 64;
  dims.cyclic_prefix = 8;
  dims.rho_db = 10.0;
  dims.seed = o.seed;
  const double rho = dims.rho();
  constexpr int kDraws = 10;
  const auto corr = exponential_correlation(ArrayGeometry::ula(dims.antennas, 0.5), 0.7);
  const auto pdp = exponential_pdp(dims.users, dims.taps);
  const int users = dims.users, t_len = dims.block_length;

  double zfp_err = 0.0, zfe_err = 0.0, zfe_leak = 0.0, zfp_leak = 0.0, zfe_if = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    RandomStream rng(dims.seed, static_cast<std::uint64_t>(t), StreamPurpose::Channel);
    const auto ch = draw_channel(dims, pdp, corr, rng);

    const FilterBank zfp = zfp_bank(ch);
    const MatrixSeq dl = downlink_freq(ch);
    for (int nu = 0; nu < zfp.dft_size(); ++nu) {
      const CMatrix e = dl[nu].adjoint() * zfp.freq[nu] / zfp.norm - CMatrix::Identity(users, users);
      zfp_err = std::max(zfp_err, e.cwiseAbs().maxCoeff());
    }
    const FilterBank zfe = zfe_bank(ch);
    for (int nu = 0; nu < zfe.dft_size(); ++nu) {
      const CMatrix e = zfe.freq[nu] * ch.csi_freq[nu] / zfe.norm - CMatrix::Identity(users, users);
      zfe_err = std::max(zfe_err, e.cwiseAbs().maxCoeff());
    }

    // Impulse probes through the signal path, one user at a time.
    RVector up = RVector::Zero(users), down = RVector::Zero(users);
    for (int q = 0; q < users; ++q) {
      Block probe = Block::Zero(users, t_len);
      probe(q, 0) = 1.0;
      const Block r = uplink_receive(ch, make_uplink_frame(probe, dims.cyclic_prefix),
                                     Block::Zero(dims.antennas, t_len));
      Block y = apply_equalizer_bank(zfe, r);
      y(q, 0) = 0.0;
      up += y.rowwise().squaredNorm();
      Block yd = downlink_receive(ch, precoded_transmit(zfp, probe), Block::Zero(users, t_len));
      yd(q, 0) = 0.0;
      down += yd.rowwise().squaredNorm();
    }
    zfe_leak = std::max(zfe_leak, rho * up.maxCoeff());
    zfp_leak = std::max(zfp_leak, rho * down.maxCoeff());

    const DrawStats stats = measure_draw(FilterKind::ZFE, ch, dims, 0.0, Framing::Circular);
    zfe_if = std::max(zfe_if, decompose(Link::Uplink, stats, rho, stats.gain).if_power.maxCoeff());
  }
  report.checks.push_back(within("zfp.per_bin_identity", 0.0, zfp_err, 1e-8, o, "3"));
  report.checks.push_back(within("zfe.per_bin_identity", 0.0, zfe_err, 1e-8, o, "3"));
  report.checks.push_back(within("zfe.isi_plus_mui", 0.0, zfe_leak, 1e-6 * rho, o, "3"));
  report.checks.push_back(within("zfp.isi_plus_mui", 0.0, zfp_leak, 1e-6 * rho, o));
  report.checks.push_back(within("zfe.if_power", 0.0, zfe_if, 1e-300, o));
  return report;
}

SuiteReport figures_suite(const SuiteOptions& o) {
  SuiteReport report{"figures", {}};
  SimulationDims dims;  // 64 x 10, L = 4, T = 100, N = 20, T_c = 20
  dims.seed = o.seed;
  constexpr int kTrials = 500;
  constexpr int kBetaTrials = 100;
  const auto ula = ArrayGeometry::ula(dims.antennas, 0.5);
  const auto upa = ArrayGeometry::upa(dims.antennas, 8, 0.5);

  // Rates keyed by (filter, geometry, alpha, rho_db).
  std::map<std::tuple<FilterKind, bool, double, double>, double> cache;
  std::map<std::tuple<FilterKind, bool, double>, TrialStats> plain;
  std::map<std::tuple<FilterKind, bool, double>, std::unique_ptr<BetaOptimizer>> optimizers;
  auto rate = [&](FilterKind f, bool planar, double alpha, double rho_db) {
    const auto key = std::tuple{f, planar, alpha, rho_db};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    Scenario s = make_scenario(dims, f, planar ? upa : ula, alpha);
    double value;
    if (uses_beta(f)) {
      auto& opt = optimizers[{f, planar, alpha}];
      if (!opt) opt = std::make_unique<BetaOptimizer>(s, kBetaTrials);
      s.beta = opt->optimize(rho_db).beta;
      s.dims.rho_db = rho_db;
      value = sum_rate_mc(s, kTrials).rate_bpcu;
    } else {
      auto it = plain.find({f, planar, alpha});
      if (it == plain.end()) it = plain.emplace(std::tuple{f, planar, alpha}, collect_trials(s, kTrials)).first;
      value = assemble(it->second, s, rho_db).rate_bpcu;
    }
    cache[key] = value;
    return value;
  };
  auto name = [](const std::string& what, double alpha, double rho_db) {
    return what + ".alpha=" + label(alpha) + ".rho_db=" + label(rho_db);
  };

  // Uncorrelated, low power: the matched filter is not beaten.
  {
    const double cm = rate(FilterKind::CMFP, false, 0.0, -10.0);
    report.checks.push_back(compare(name("cmfp_ge_zfp", 0.0, -10.0), Relation::AtLeast,
                                    rate(FilterKind::ZFP, false, 0.0, -10.0), cm, "4a"));
    report.checks.push_back(compare(name("cmfp_ge_rzfp", 0.0, -10.0), Relation::AtLeast,
                                    rate(FilterKind::RZFP, false, 0.0, -10.0), cm, "4a"));
  }
  for (double rho_db = -5.0; rho_db <= 20.0 + 1e-9; rho_db += 2.5)
    report.checks.push_back(compare(name("rzfp_gt_cmfp", 0.7, rho_db), Relation::Greater,
                                    rate(FilterKind::CMFP, false, 0.7, rho_db),
                                    rate(FilterKind::RZFP, false, 0.7, rho_db), "4b"));
  for (double alpha : {0.0, 0.7, 0.9, 0.99})
    report.checks.push_back(compare(name("mmsee_gt_cmfe", alpha, 20.0), Relation::Greater,
                                    rate(FilterKind::CMFE, false, alpha, 20.0),
                                    rate(FilterKind::MMSEE, false, alpha, 20.0), "4c"));
  for (double alpha : {0.7, 0.9})
    report.checks.push_back(compare(name("upa_cmfp_lt_ula", alpha, 20.0), Relation::Less,
                                    rate(FilterKind::CMFP, false, alpha, 20.0),
                                    rate(FilterKind::CMFP, true, alpha, 20.0), "4d"));

  // Further orderings at high power.
  for (double alpha : {0.7, 0.9, 0.99}) {
    report.checks.push_back(compare(name("ordering.rzfp_gt_zfp", alpha, 20.0), Relation::Greater,
                                    rate(FilterKind::ZFP, false, alpha, 20.0),
                                    rate(FilterKind::RZFP, false, alpha, 20.0)));
    report.checks.push_back(compare(name("ordering.zfp_gt_cmfp", alpha, 20.0), Relation::Greater,
                                    rate(FilterKind::CMFP, false, alpha, 20.0),
                                    rate(FilterKind::ZFP, false, alpha, 20.0)));
  }
  for (double alpha : {0.0, 0.7, 0.9, 0.99})
    report.checks.push_back(compare(name("ordering.mmsee_ge_zfe", alpha, 20.0), Relation::AtLeast,
                                    rate(FilterKind::ZFE, false, alpha, 20.0),
                                    rate(FilterKind::MMSEE, false, alpha, 20.0)));
  return report;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"closed_forms", "appendix", "zero_forcing", "figures"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "closed_forms") return closed_forms_suite(options);
  if (name == "appendix") return appendix_suite(options);
  if (name == "zero_forcing") return zero_forcing_suite(options);
  if (name == "figures") return figures_suite(options);
  throw std::invalid_argument("unknown suite '" + name + "' (expected closed_forms, appendix, zero_forcing or figures)");
}

}  // namespace scmimo

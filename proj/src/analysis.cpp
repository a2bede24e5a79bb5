#include "scmimo/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "scmimo/equalization.hpp"
#include "scmimo/precoding.hpp"
#include "scmimo/random.hpp"

namespace scmimo {

std::string to_string(Link link) { return link == Link::Downlink ? "downlink" : "uplink"; }

std::string to_string(FilterKind filter) {
  switch (filter) {
    case FilterKind::CMFP: return "CMFP";
    case FilterKind::ZFP: return "ZFP";
    case FilterKind::RZFP: return "RZFP";
    case FilterKind::CMFE: return "CMFE";
    case FilterKind::ZFE: return "ZFE";
    case FilterKind::MMSEE: return "MMSEE";
  }
  return "?";
}

Link parse_link(const std::string& text) {
  if (text == "downlink") return Link::Downlink;
  if (text == "uplink") return Link::Uplink;
  throw std::invalid_argument("unknown link '" + text + "' (expected downlink or uplink)");
}

FilterKind parse_filter(const std::string& text) {
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (FilterKind f : {FilterKind::CMFP, FilterKind::ZFP, FilterKind::RZFP, FilterKind::CMFE,
                       FilterKind::ZFE, FilterKind::MMSEE})
    if (upper == to_string(f)) return f;
  throw std::invalid_argument("unknown filter '" + text + "'");
}

Link link_of(FilterKind filter) {
  switch (filter) {
    case FilterKind::CMFP:
    case FilterKind::ZFP:
    case FilterKind::RZFP: return Link::Downlink;
    default: return Link::Uplink;
  }
}

bool uses_beta(FilterKind filter) { return filter == FilterKind::RZFP || filter == FilterKind::MMSEE; }

// ---------------------------------------------------------------------------
// End-to-end responses

namespace {

long long fold(long long d, long long period) {
  const long long r = d % period;
  return r < 0 ? r + period : r;
}

struct PathProducts {
  std::vector<int> first_delay;
  std::vector<int> second_delay;
  MatrixSeq product;
};

PathProducts path_products(const TapFilter& first, const TapFilter& second) {
  if (first.output_rows() != second.input_rows())
    throw std::invalid_argument("cascade: inner dimensions do not match");
  PathProducts p;
  for (std::size_t i = 0; i < first.taps.size(); ++i)
    for (std::size_t j = 0; j < second.taps.size(); ++j) {
      p.first_delay.push_back(first.delays[i]);
      p.second_delay.push_back(second.delays[j]);
      p.product.push_back(second.taps[j] * first.taps[i]);
    }
  return p;
}

// Accumulates per-user statistics of a set of K x K lag matrices, where
// lag 0 carries the same-symbol gain.
void add_lag_stats(const std::map<long long, CMatrix>& lags, DrawStats& s, double weight) {
  const Eigen::Index k = s.gain.size();
  for (const auto& [lag, c] : lags) {
    const RMatrix power = c.cwiseAbs2();
    for (Eigen::Index u = 0; u < k; ++u) {
      const double own = power(u, u);
      s.mui(u) += weight * (power.row(u).sum() - own);
      if (lag == 0) {
        s.gain(u) += weight * c(u, u);
        s.gain_power(u) += weight * own;
      } else {
        s.isi(u) += weight * own;
      }
    }
  }
}

DrawStats zero_stats(Eigen::Index users, const RVector& noise_gain) {
  if (noise_gain.size() != users) throw std::invalid_argument("noise gain must have one entry per user");
  return {CVector::Zero(users), RVector::Zero(users), RVector::Zero(users), RVector::Zero(users),
          noise_gain};
}

}  // namespace

TapFilter cascade(const TapFilter& first, const TapFilter& second, int period) {
  if (period <= 0) throw std::invalid_argument("cascade: period must be positive");
  const PathProducts p = path_products(first, second);
  std::map<long long, CMatrix> lags;
  for (std::size_t i = 0; i < p.product.size(); ++i) {
    const long long d = fold(static_cast<long long>(p.first_delay[i]) + p.second_delay[i], period);
    auto it = lags.find(d);
    if (it == lags.end())
      lags.emplace(d, p.product[i]);
    else
      it->second += p.product[i];
  }
  TapFilter out;
  for (auto& [d, c] : lags) {
    out.delays.push_back(static_cast<int>(d));
    out.taps.push_back(std::move(c));
  }
  return out;
}

DrawStats response_stats(const TapFilter& response, const RVector& noise_gain) {
  if (response.output_rows() != response.input_rows())
    throw std::invalid_argument("response must be square (K x K)");
  DrawStats s = zero_stats(response.output_rows(), noise_gain);
  std::map<long long, CMatrix> lags;
  for (std::size_t i = 0; i < response.taps.size(); ++i) {
    auto it = lags.find(response.delays[i]);
    if (it == lags.end())
      lags.emplace(response.delays[i], response.taps[i]);
    else
      it->second += response.taps[i];
  }
  add_lag_stats(lags, s, 1.0);
  return s;
}

DrawStats linear_response_stats(const TapFilter& first, const TapFilter& second, int block_length,
                                const RVector& noise_gain) {
  if (block_length <= 0) throw std::invalid_argument("block length must be positive");
  const PathProducts p = path_products(first, second);
  if (p.product.front().rows() != p.product.front().cols())
    throw std::invalid_argument("response must be square (K x K)");
  DrawStats s = zero_stats(p.product.front().rows(), noise_gain);
  const long long t_len = block_length;
  const double weight = 1.0 / block_length;
  for (long long i = 0; i < t_len; ++i) {
    std::map<long long, CMatrix> lags;
    for (std::size_t j = 0; j < p.product.size(); ++j) {
      const long long mid = i - p.second_delay[j];  // intermediate sample index
      const long long lag = static_cast<long long>(p.first_delay[j]) + p.second_delay[j];
      const long long src = i - lag;  // symbol index
      if (mid < 0 || mid >= t_len || src < 0 || src >= t_len) continue;
      auto it = lags.find(lag);
      if (it == lags.end())
        lags.emplace(lag, p.product[j]);
      else
        it->second += p.product[j];
    }
    add_lag_stats(lags, s, weight);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Decomposition

RVector NoiseBreakdown::sinr() const { return desired.cwiseQuotient(effective_noise()); }

double sum_rate(const RVector& sinr) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < sinr.size(); ++k) total += 0.5 * std::log2(1.0 + sinr(k));
  return total;
}

NoiseBreakdown decompose(Link link, const DrawStats& stats, double rho, const CVector& reference) {
  const Eigen::Index k = stats.gain.size();
  NoiseBreakdown b;
  b.isi = rho * stats.isi;
  b.mui = rho * stats.mui;
  b.awgn = stats.noise;
  if (link == Link::Downlink) {
    if (reference.size() != k) throw std::invalid_argument("decompose: reference needs one gain per user");
    b.desired = rho * reference.cwiseAbs2();
    // E|g - ref|^2 = E|g|^2 - 2 Re(conj(ref) g) + |ref|^2, with the first term
    // taken from gain_power so that linear framing is handled too.
    b.if_power.resize(k);
    for (Eigen::Index u = 0; u < k; ++u) {
      const double v = stats.gain_power(u) - 2.0 * std::real(std::conj(reference(u)) * stats.gain(u)) +
                       std::norm(reference(u));
      b.if_power(u) = rho * std::max(v, 0.0);
    }
  } else {
    b.desired = rho * stats.gain_power;
    b.if_power = RVector::Zero(k);
  }
  return b;
}

CVector cmfp_reference_gain(const CorrelationMatrix& corr, const PowerDelayProfile& pdp) {
  const double m = corr.size();
  const double scale = corr.trace() / std::sqrt(m * pdp.users());
  CVector ref(pdp.users());
  for (int k = 0; k < pdp.users(); ++k) ref(k) = scale * pdp.row(k).sum();
  return ref;
}

// ---------------------------------------------------------------------------
// Monte Carlo

DrawStats measure_draw(FilterKind filter, const ChannelRealization& ch, const SimulationDims& dims,
                       double beta, Framing framing, const GramSpectra* spectra) {
  const int t = dims.block_length;
  const auto users = ch.users();
  const RVector unit_noise = RVector::Ones(users);
  auto downlink = [&](const TapFilter& precoder) {
    const TapFilter channel = downlink_channel(ch);
    if (framing == Framing::Linear) return linear_response_stats(precoder, channel, t, unit_noise);
    return response_stats(cascade(precoder, channel, t), unit_noise);
  };
  auto uplink = [&](const TapFilter& equalizer) {
    RVector noise = RVector::Zero(users);
    for (const auto& q : equalizer.taps) noise += q.rowwise().squaredNorm();
    return response_stats(cascade(uplink_channel(ch), equalizer, t), noise);
  };

  switch (filter) {
    case FilterKind::CMFP: return downlink(cmfp_filter(ch));
    case FilterKind::ZFP:
    case FilterKind::RZFP: {
      const double b = filter == FilterKind::ZFP ? 0.0 : beta;
      const FilterBank bank = spectra ? rzfp_bank(*spectra, b) : rzfp_bank(ch, b);
      return downlink(bank.taps());
    }
    case FilterKind::CMFE: return uplink(cmfe_filter(ch));
    case FilterKind::ZFE:
    case FilterKind::MMSEE: {
      const double b = filter == FilterKind::ZFE ? 0.0 : beta;
      const FilterBank bank = spectra ? mmsee_bank(*spectra, b) : mmsee_bank(ch, b);
      return uplink(bank.taps());
    }
  }
  throw std::invalid_argument("unknown filter");
}

TrialStats collect_trials(const Scenario& scenario, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  scenario.dims.validate();
  if (uses_beta(scenario.filter) && !(scenario.beta >= 0.0))
    throw std::invalid_argument("regularization must be nonnegative");
  TrialStats out;
  out.draws.resize(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](int trial) {
    RandomStream rng(scenario.dims.seed, static_cast<std::uint64_t>(trial), StreamPurpose::Channel);
    const ChannelRealization ch = draw_channel(scenario.dims, scenario.pdp, scenario.corr, rng);
    out.draws[static_cast<std::size_t>(trial)] =
        measure_draw(scenario.filter, ch, scenario.dims, scenario.beta, scenario.framing);
  });
  if (scenario.filter == FilterKind::CMFP) out.reference = cmfp_reference_gain(scenario.corr, scenario.pdp);
  return out;
}

namespace {

double mean_of(const std::vector<double>& v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

double standard_error(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  const double m = mean_of(v);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (v[i] - m) * (v[i] - m);
  return std::sqrt(pairwise_sum(dev) / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

SumRateResult assemble(const TrialStats& stats, const Scenario& scenario, double rho_db) {
  const std::size_t n = stats.draws.size();
  if (n == 0) throw std::invalid_argument("assemble: no draws");
  const Eigen::Index k = stats.draws.front().gain.size();
  const double rho = std::pow(10.0, rho_db / 10.0);
  const Link link = link_of(scenario.filter);

  // Trial-ordered series per user, reduced pairwise.
  auto series = [&](auto get, Eigen::Index u) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = get(stats.draws[i], u);
    return v;
  };

  SumRateResult r;
  r.mean_gain.resize(k);
  r.mean_gain_se.resize(k);
  DrawStats mean = zero_stats(k, RVector::Zero(k));
  for (Eigen::Index u = 0; u < k; ++u) {
    const auto re = series([](const DrawStats& d, Eigen::Index j) { return d.gain(j).real(); }, u);
    const auto im = series([](const DrawStats& d, Eigen::Index j) { return d.gain(j).imag(); }, u);
    mean.gain(u) = {mean_of(re), mean_of(im)};
    r.mean_gain(u) = mean.gain(u);
    r.mean_gain_se(u) = std::hypot(standard_error(re), standard_error(im));
    mean.gain_power(u) =
        mean_of(series([](const DrawStats& d, Eigen::Index j) { return d.gain_power(j); }, u));
    mean.isi(u) = mean_of(series([](const DrawStats& d, Eigen::Index j) { return d.isi(j); }, u));
    mean.mui(u) = mean_of(series([](const DrawStats& d, Eigen::Index j) { return d.mui(j); }, u));
    mean.noise(u) = mean_of(series([](const DrawStats& d, Eigen::Index j) { return d.noise(j); }, u));
  }

  const CVector reference = stats.reference.value_or(mean.gain);
  r.breakdown = decompose(link, mean, rho, reference);

  // Standard errors of the user-averaged components.
  auto user_avg = [&](auto get) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index u = 0; u < k; ++u) acc += get(stats.draws[i], u);
      v[i] = acc / static_cast<double>(k);
    }
    return standard_error(v);
  };
  r.isi_se = rho * user_avg([](const DrawStats& d, Eigen::Index u) { return d.isi(u); });
  r.mui_se = rho * user_avg([](const DrawStats& d, Eigen::Index u) { return d.mui(u); });
  r.awgn_se = user_avg([](const DrawStats& d, Eigen::Index u) { return d.noise(u); });
  if (link == Link::Downlink) {
    r.if_se = rho * user_avg([&](const DrawStats& d, Eigen::Index u) {
      return std::norm(d.gain(u) - reference(u)) + (d.gain_power(u) - std::norm(d.gain(u)));
    });
    if (!stats.reference) {
      double acc = 0.0;
      for (Eigen::Index u = 0; u < k; ++u) acc += 2.0 * rho * std::abs(mean.gain(u)) * r.mean_gain_se(u);
      r.desired_se = acc / static_cast<double>(k);
    }
  } else {
    r.desired_se = rho * user_avg([](const DrawStats& d, Eigen::Index u) { return d.gain_power(u); });
  }

  const RVector sinr = r.breakdown.sinr();
  r.per_user_rates = (0.5 * (1.0 + sinr.array()).log() / std::log(2.0)).matrix();
  r.rate_bpcu = sum_rate(sinr);

  r.meta.link = link;
  r.meta.filter = scenario.filter;
  r.meta.corr_model = scenario.corr_model;
  r.meta.corr_param = scenario.corr_param;
  r.meta.corr_mu = scenario.corr_mu;
  r.meta.rho_db = rho_db;
  r.meta.beta = uses_beta(scenario.filter) ? scenario.beta : 0.0;
  r.meta.trials = static_cast<int>(n);
  r.meta.seed = scenario.dims.seed;
  return r;
}

SumRateResult sum_rate_mc(const Scenario& scenario, int trials) {
  return assemble(collect_trials(scenario, trials), scenario, scenario.dims.rho_db);
}

// ---------------------------------------------------------------------------
// Execution helpers

int workers() {
  if (const char* env = std::getenv("SCMIMO_THREADS"); env != nullptr && *env != '\0') {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("SCMIMO_THREADS is not an integer: ") + env);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int threads = std::min(workers(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads - 1));
  for (int t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(const std::vector<double>& values) {
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += values[i];
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return self(self, lo, mid) + self(self, mid, hi);
  };
  return rec(rec, 0, values.size());
}

}  // namespace scmimo

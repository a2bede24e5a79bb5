#include <cmath>
#include <cstdlib>
#include <numeric>

#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scmimo/analysis.hpp"
#include "scmimo/closed_form.hpp"
#include "scmimo/equalization.hpp"
#include "scmimo/precoding.hpp"

using namespace scmimo;

namespace {

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) { ::setenv("SCMIMO_THREADS", value, 1); }
  ~ThreadsEnv() { ::unsetenv("SCMIMO_THREADS"); }
};

TapFilter random_filter(int out, int in, std::vector<int> delays, std::uint64_t seed) {
  TapFilter f;
  f.delays = std::move(delays);
  for (std::size_t j = 0; j < f.delays.size(); ++j) f.taps.push_back(oracle::random_matrix(out, in, seed + j));
  return f;
}

}  // namespace

TEST_CASE("filter names") {
  for (auto f : {FilterKind::CMFP, FilterKind::ZFP, FilterKind::RZFP, FilterKind::CMFE, FilterKind::ZFE,
                 FilterKind::MMSEE})
    CHECK(parse_filter(to_string(f)) == f);
  CHECK(parse_filter("rzfp") == FilterKind::RZFP);
  CHECK(link_of(FilterKind::ZFE) == Link::Uplink);
  CHECK(uses_beta(FilterKind::MMSEE));
  CHECK_FALSE(uses_beta(FilterKind::ZFP));
  CHECK(parse_link("uplink") == Link::Uplink);
  CHECK_THROWS(parse_filter("LMMSE"));
  CHECK_THROWS(parse_link("sidelink"));
}

TEST_CASE("cascade matches applying both filters to a signal") {
  const TapFilter first = random_filter(5, 3, {0, 2, -1}, 10);
  const TapFilter second = random_filter(3, 5, {1, -3}, 20);
  const Block x = oracle::random_matrix(3, 12, 30);
  const Block direct = apply_circular(second, apply_circular(first, x));
  const Block composed = apply_circular(cascade(first, second, 12), x);
  CHECK(oracle::max_abs(direct - composed) < 1e-12);
  const TapFilter c = cascade(first, second, 12);
  for (int d : c.delays) {
    CHECK(d >= 0);
    CHECK(d < 12);
  }
  CHECK_THROWS(cascade(first, first, 12));
}

TEST_CASE("response statistics") {
  SUBCASE("identity response") {
    TapFilter id{{0}, {CMatrix::Identity(3, 3)}};
    const DrawStats s = response_stats(id, RVector::Ones(3));
    CHECK(oracle::max_abs(s.gain - CVector::Ones(3)) == 0.0);
    CHECK(s.isi.maxCoeff() == 0.0);
    CHECK(s.mui.maxCoeff() == 0.0);
  }
  SUBCASE("hand-built response") {
    CMatrix t0(2, 2), t1(2, 2);
    t0 << 2.0, 0.5, 0.0, 1.0;
    t1 << 0.1, 0.0, cdouble(0.0, 0.3), 0.2;
    const DrawStats s = response_stats(TapFilter{{0, 1}, {t0, t1}}, RVector::Constant(2, 0.7));
    CHECK(s.gain(0) == cdouble(2.0));
    CHECK(s.gain_power(1) == doctest::Approx(1.0));
    CHECK(s.isi(0) == doctest::Approx(0.01));
    CHECK(s.isi(1) == doctest::Approx(0.04));
    CHECK(s.mui(0) == doctest::Approx(0.25));
    CHECK(s.mui(1) == doctest::Approx(0.09));
    CHECK(s.noise(1) == 0.7);
  }
  SUBCASE("linear framing approaches circular as the block grows") {
    const auto dims = fixture::small_dims();
    const auto ch = fixture::channel(dims, 0.3, 1);
    const RVector ng = RVector::Ones(4);
    const TapFilter pre = cmfp_filter(ch), chan = downlink_channel(ch);
    auto gap = [&](int t) {
      const DrawStats lin = linear_response_stats(pre, chan, t, ng);
      const DrawStats circ = response_stats(cascade(pre, chan, t), ng);
      CHECK(lin.isi.maxCoeff() <= circ.isi.maxCoeff() + 1e-12);
      return (lin.gain - circ.gain).cwiseAbs().maxCoeff();
    };
    const double short_gap = gap(64), long_gap = gap(640);
    CHECK(short_gap > 0.0);
    CHECK(long_gap < 0.2 * short_gap);
  }
}

TEST_CASE("decomposition") {
  DrawStats s;
  s.gain = CVector::Constant(2, cdouble(1.5, 0.5));
  s.gain_power = s.gain.cwiseAbs2();
  s.isi = RVector::Constant(2, 0.2);
  s.mui = RVector::Constant(2, 0.3);
  s.noise = RVector::Constant(2, 0.4);
  const CVector ref = CVector::Constant(2, cdouble(1.0, 0.0));

  const auto dl = decompose(Link::Downlink, s, 2.0, ref);
  CHECK(dl.desired(0) == doctest::Approx(2.0));
  CHECK(dl.if_power(0) == doctest::Approx(2.0 * std::norm(cdouble(0.5, 0.5))));
  CHECK(dl.isi(0) == doctest::Approx(0.4));
  CHECK(dl.mui(0) == doctest::Approx(0.6));
  CHECK(dl.awgn(0) == doctest::Approx(0.4));

  const auto ul = decompose(Link::Uplink, s, 2.0, ref);
  CHECK(ul.desired(0) == doctest::Approx(2.0 * 2.5));
  CHECK(ul.if_power.maxCoeff() == 0.0);
  CHECK(ul.sinr()(0) == doctest::Approx(5.0 / 1.4));

  s.noise.setZero();
  CHECK(decompose(Link::Uplink, s, 2.0, ref).awgn.maxCoeff() == 0.0);
  CHECK_THROWS(decompose(Link::Downlink, s, 2.0, CVector::Zero(3)));
}

TEST_CASE("components are nonnegative and account for the received power") {
  const auto dims = fixture::small_dims();
  const double rho = 2.0;
  const int draws = 600;
  const auto corr = exponential_correlation(ArrayGeometry::ula(16, 0.5), 0.7);
  const auto pdp = exponential_pdp(4, 4);
  const CVector ref = cmfp_reference_gain(corr, pdp);
  double received = 0.0, parts = 0.0;
  for (int t = 0; t < draws; ++t) {
    RandomStream crng(4, static_cast<std::uint64_t>(t));
    const auto ch = draw_channel(dims, pdp, corr, crng);
    RandomStream srng(4, static_cast<std::uint64_t>(t), StreamPurpose::Symbols);
    RandomStream nrng(4, static_cast<std::uint64_t>(t), StreamPurpose::Noise);
    const Block y = downlink_receive(ch, cmfp_transmit(ch, srng.complex_normal_block(4, 64, rho)),
                                     nrng.complex_normal_block(4, 64));
    received += y.squaredNorm() / (64.0 * 4.0);
    const auto b = decompose(Link::Downlink, measure_draw(FilterKind::CMFP, ch, dims, 0.0, Framing::Circular),
                             rho, ref);
    CHECK(b.desired.minCoeff() >= 0.0);
    CHECK(b.if_power.minCoeff() >= 0.0);
    CHECK(b.isi.minCoeff() >= 0.0);
    CHECK(b.mui.minCoeff() >= 0.0);
    CHECK(b.awgn.minCoeff() >= 0.0);
    parts += (b.desired + b.effective_noise()).mean();
  }
  CHECK(received / draws == doctest::Approx(parts / draws).epsilon(0.03));
}

TEST_CASE("sum rate recomputation is exact") {
  auto dims = fixture::small_dims();
  dims.rho_db = 5.0;
  const auto corr = exponential_correlation(ArrayGeometry::ula(16, 0.5), 0.9);
  for (auto f : {FilterKind::CMFP, FilterKind::ZFP, FilterKind::RZFP, FilterKind::CMFE, FilterKind::ZFE,
                 FilterKind::MMSEE}) {
    Scenario sc{dims, f, corr, exponential_pdp(4, 4), 0.5};
    const auto r = sum_rate_mc(sc, 20);
    CHECK(r.rate_bpcu == sum_rate(r.breakdown.sinr()));
    CHECK(r.per_user_rates.sum() == doctest::Approx(r.rate_bpcu).epsilon(1e-14));
    CHECK(r.meta.filter == f);
    CHECK(r.meta.trials == 20);
  }
}

TEST_CASE("matched filter precoder against its closed forms") {
  SUBCASE("interference power at A = I is rho") {
    const auto dims = fixture::small_dims();
    Scenario sc{dims, FilterKind::CMFP, identity_correlation(16), exponential_pdp(4, 4)};
    const auto r = sum_rate_mc(sc, 2000);
    const double interference = r.breakdown.mean_if() + r.breakdown.mean_isi() + r.breakdown.mean_mui();
    CHECK(interference == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.breakdown.mean_desired() == doctest::Approx(cmfp_desired_power(1.0, 16, 4)).epsilon(0.03));
  }
  SUBCASE("rate vanishes with power") {
    auto dims = fixture::small_dims();
    double prev = 1e300;
    for (double db : {0.0, -20.0, -40.0, -60.0}) {
      dims.rho_db = db;
      Scenario sc{dims, FilterKind::CMFP, identity_correlation(16), exponential_pdp(4, 4)};
      const double r = sum_rate_mc(sc, 50).rate_bpcu;
      CHECK(r < prev);
      prev = r;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("results do not depend on the worker count") {
  auto dims = fixture::small_dims();
  dims.rho_db = 10.0;
  Scenario sc{dims, FilterKind::RZFP, exponential_correlation(ArrayGeometry::ula(16, 0.5), 0.7),
              exponential_pdp(4, 4), 0.3};
  SumRateResult one, many, again;
  {
    ThreadsEnv env("1");
    one = sum_rate_mc(sc, 40);
  }
  {
    ThreadsEnv env("7");
    many = sum_rate_mc(sc, 40);
    again = sum_rate_mc(sc, 40);
  }
  CHECK(one.rate_bpcu == many.rate_bpcu);
  CHECK(many.rate_bpcu == again.rate_bpcu);
  CHECK(one.desired_se == many.desired_se);
  {
    ThreadsEnv env("lots");
    CHECK_THROWS(workers());
  }
}

TEST_CASE("parallel helpers") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
  CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
  CHECK_THROWS(parallel_for(10, [](int i) {
    if (i == 7) throw std::runtime_error("boom");
  }));

  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  double naive = 0.0;
  for (double x : v) naive += x;
  CHECK(pairwise_sum(v) == doctest::Approx(naive).epsilon(1e-14));
  CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("closed-form rates") {
  CHECK(cmfp_rate_closed(1.0, 64, 10, 64.0) == doctest::Approx(10.351946639456990).epsilon(1e-13));
  CHECK(cmfp_rate_limit(64, 10, 64.0) == doctest::Approx(14.437626353707937).epsilon(1e-13));
  CHECK(coop_capacity(1.0, 64, 10) == doctest::Approx(14.437626353707937).epsilon(1e-13));
  CHECK(cmfp_rate_closed(1e12, 64, 10, 64.0) == doctest::Approx(cmfp_rate_limit(64, 10, 64.0)).epsilon(1e-9));
  CHECK(cmfp_rate_closed(1.0, 64, 10, 128.0) < cmfp_rate_closed(1.0, 64, 10, 64.0));
  for (double rho : {0.1, 1.0, 10.0, 100.0}) {
    CHECK(coop_capacity(rho, 64, 10) >= cmfp_rate_closed(rho, 64, 10, 64.0));
    CHECK(coop_capacity(rho, 64, 10) > cmfp_rate_closed(rho, 64, 10, 70.0));
  }
  RVector uniform = RVector::Constant(4, 0.25);
  CHECK(cmfe_rate_closed(1.0, 16, 4, 16.0, 16.0, uniform) == doctest::Approx(4.288779818670350).epsilon(1e-13));
  CHECK(cmfe_rate_closed(1e-12, 16, 4, 16.0, 16.0, uniform) < 1e-10);
  CHECK(cmfp_desired_power(2.0, 16, 4) == doctest::Approx(8.0));
  CHECK(cmfp_effective_noise(2.0, 16, 32.0) == doctest::Approx(5.0));
  CHECK(cmfe_noise_power(16, 4, 16.0) == doctest::Approx(0.25));
  CHECK_THROWS(cmfp_rate_closed(-1.0, 64, 10, 64.0));
  CHECK_THROWS(cmfe_rate_closed(1.0, 16, 4, 16.0, 16.0, RVector::Constant(4, 0.3)));
}

TEST_CASE("appendix moments") {
  const auto corr = identity_correlation(8);
  const auto pdp = uniform_pdp(3, 2);
  CHECK(appendix_moment(0, 0, 0, 1, 1, corr, pdp).real() == doctest::Approx((8.0 + 64.0) * 0.25));
  CHECK(std::abs(appendix_moment(0, 1, 0, 0, 2, corr, pdp)) == 0.0);
  CHECK(appendix_case(0, 0, 0, 0, 0) == 1);
  CHECK(appendix_case(0, 1, 0, 0, 2) == 7);
  for (int l = 0; l < 4; ++l)
    for (int lp = 0; lp < 4; ++lp)
      for (int b = 0; b <= std::min(l, lp); ++b)
        for (int k = 0; k < 2; ++k)
          for (int q = 0; q < 2; ++q) {
            const int c = appendix_case(l, lp, b, k, q);
            CHECK(c >= 1);
            CHECK(c <= 7);
          }
  CHECK_THROWS_AS(appendix_moment(2, 0, 0, 0, 0, corr, pdp), std::out_of_range);
  CHECK_THROWS_AS(appendix_moment(1, 1, 2, 0, 0, corr, pdp), std::out_of_range);
  CHECK_THROWS_AS(appendix_moment(0, 0, 0, 3, 0, corr, pdp), std::out_of_range);
}

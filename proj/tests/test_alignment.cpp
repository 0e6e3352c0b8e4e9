#include <doctest.h>

#include <cmath>

#include "paleocorr/alignment.hpp"
#include "paleocorr/pseudoproxy.hpp"

using namespace paleocorr;

TEST_CASE("alignment spec parsing round trips") {
  CHECK(AlignmentSpec::parse("LI").method == Method::LI);
  CHECK(AlignmentSpec::parse("NV").method == Method::NV);
  const AlignmentSpec g = AlignmentSpec::parse("G(0.5)");
  CHECK(g.method == Method::G);
  CHECK(g.scale == doctest::Approx(0.5));
  CHECK(g.name() == "G(0.5)");
  CHECK(AlignmentSpec::parse("S(2)").name() == "S(2)");
  CHECK_THROWS_AS(AlignmentSpec::parse("XYZ"), DataError);
  CHECK_THROWS_AS(AlignmentSpec::parse("G(-1)"), DomainError);
  CHECK(AlignmentSpec::default_set().size() == 6);
}

TEST_CASE("LI is exact on a linear signal and never extrapolates") {
  const TimeSeries x({0.0, 0.5, 1.5, 2.5, 3.5, 10.0}, {1, 2, 3, 4, 5, 6});
  std::vector<double> yt{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> yv;
  for (double t : yt) yv.push_back(2.0 * t + 1.0);
  const AlignedPairs p = align(x, TimeSeries(yt, yv), AlignmentSpec::parse("LI"));
  REQUIRE(p.effective_n() == 5);  // x at t=10 lies outside y's support
  for (std::size_t i = 0; i < p.x.size(); ++i)
    CHECK(p.y[i] == doctest::Approx(2.0 * x.times[i] + 1.0));
}

TEST_CASE("G reduces to a symmetric average between two neighbours") {
  const TimeSeries x({-1.0, 0.5, 2.0}, {0.0, 1.0, 0.0});
  const TimeSeries y({-1.0, 0.0, 1.0, 2.0}, {5.0, 1.0, 3.0, 5.0});
  AlignmentSpec spec;
  spec.method = Method::G;
  spec.scale = 0.05;  // h = 0.05 * dt: only the two nearest matter at t=0.5
  const AlignedPairs p = align(x, y, spec);
  REQUIRE(p.effective_n() == 3);
  CHECK(p.y[1] == doctest::Approx(2.0));  // equidistant mean of 1 and 3
}

TEST_CASE("NV matches nearest neighbours at most once within half a step") {
  const TimeSeries x({0.0, 1.0, 2.0, 3.0}, {10, 11, 12, 13});
  const TimeSeries y({0.1, 1.2, 1.9, 3.0}, {20, 21, 22, 23});
  const AlignedPairs p = align(x, y, AlignmentSpec::parse("NV"));
  REQUIRE(p.effective_n() == 4);
  CHECK(p.y == std::vector<double>{20, 21, 22, 23});

  // y observation reusable would double-match; single-use forbids it
  const TimeSeries x2({0.0, 0.2, 5.0, 6.0}, {1, 2, 3, 4});
  const TimeSeries y2({0.1, 5.1, 6.1, 7.0}, {30, 31, 32, 33});
  const AlignedPairs q = align(x2, y2, AlignmentSpec::parse("NV"));
  // x=0 takes y=0.1; x=0.2 finds it used and nothing else in range
  REQUIRE(q.effective_n() == 3);
  CHECK(q.x == std::vector<double>{1, 3, 4});
}

TEST_CASE("slotting averages both series over shared slots") {
  std::vector<double> t;
  std::vector<double> xv, yv;
  for (int i = 0; i < 8; ++i) {
    t.push_back(i);
    xv.push_back(i);
    yv.push_back(10.0 + i);
  }
  AlignmentSpec spec;
  spec.method = Method::S;
  spec.scale = 2.0;  // slot width 2 * dt = 2
  const AlignedPairs p = align(TimeSeries(t, xv), TimeSeries(t, yv), spec);
  // slots [0,2), [2,4), [4,6); the trailing partial slot is dropped
  REQUIRE(p.effective_n() == 3);
  CHECK(p.x == std::vector<double>{0.5, 2.5, 4.5});
  CHECK(p.y == std::vector<double>{10.5, 12.5, 14.5});
}

TEST_CASE("align requires overlap and at least 3 pairs") {
  const TimeSeries a({0.0, 1.0, 2.0}, {1, 2, 3});
  const TimeSeries b({10.0, 11.0, 12.0}, {1, 2, 3});
  CHECK_THROWS_AS(align(a, b, AlignmentSpec::parse("LI")), DataError);
}

TEST_CASE("gacf with a narrow kernel equals the plain lag product mean") {
  const TimeSeries ts({0, 1, 2, 3, 4, 5}, {0.5, -1.0, 0.8, 0.3, -0.6, 0.9});
  double expected = 0.0;
  for (int i = 0; i < 5; ++i) expected += ts.values[i] * ts.values[i + 1];
  expected /= 5.0;
  CHECK(gacf(ts, 1.0, 0.05) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("gacf recovers the OU autocorrelation on a regular grid") {
  const double drag = 0.4;
  RngStream g = derive_stream(41);
  const std::vector<double> x = generate_ou(20000, 1.0, drag, g);
  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const TimeSeries ts(t, x);
  CHECK(gacf(ts) == doctest::Approx(std::exp(-drag)).epsilon(1).scale(0.03));
}

TEST_CASE("gacf rejects bad arguments") {
  const TimeSeries ts({0, 1, 2}, {1.0, 2.0, 1.5});
  CHECK_THROWS_AS(gacf(ts, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(gacf(ts, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(gacf(ts, 100.0, 0.01), NumericError);  // no pairs in reach
}

TEST_CASE("highpass keeps the fast component and drops the slow one") {
  std::vector<double> t, slow, fast, v;
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < 2000; ++i) {
    t.push_back(i);
    slow.push_back(std::sin(2.0 * pi * i / 1000.0));
    fast.push_back(std::sin(2.0 * pi * i / 20.0));
    v.push_back(slow.back() * 3.0 + fast.back());
  }
  const TimeSeries out = highpass(TimeSeries(t, v), 100.0);
  // correlation with the fast component should dominate
  auto corr = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    const double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      sa += a[i];
      sb += b[i];
      saa += a[i] * a[i];
      sbb += b[i] * b[i];
      sab += a[i] * b[i];
    }
    return (sab / n - sa * sb / (n * n)) /
           std::sqrt((saa / n - sa * sa / (n * n)) * (sbb / n - sb * sb / (n * n)));
  };
  CHECK(corr(out.values, fast) > 0.9);
  CHECK(std::abs(corr(out.values, slow)) < 0.2);
  CHECK_THROWS_AS(highpass(TimeSeries(t, v), 0.0), DomainError);
}

TEST_CASE("window arithmetic: 20 ka span, 5 ka width, 2.5 ka step") {
  std::vector<double> t, v;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(i * 100.0);
    v.push_back(std::sin(i * 0.3));
  }
  const TimeSeries ts(t, v);
  const auto wins = windows(ts, ts, 5000.0, 2500.0);
  REQUIRE(wins.size() == 7);
  for (std::size_t k = 0; k < wins.size(); ++k)
    CHECK(wins[k].start == doctest::Approx(2500.0 * k));
  // every observation lands in at least one window
  std::size_t covered = 0;
  for (const auto& w : wins) covered += w.x_times.size();
  CHECK(covered >= t.size());
  // width equal to the whole span: exactly one window holding everything
  const auto one = windows(ts, ts, 20000.0, 20000.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].x_times.size() == t.size());
}

TEST_CASE("sparse windows are flagged, not dropped") {
  const TimeSeries x({0.0, 1.0, 5000.0, 5001.0, 5002.0, 5003.0, 5004.0, 10000.0},
                     {1, 2, 3, 4, 5, 6, 7, 8});
  const auto wins = windows(x, x, 5000.0, 5000.0);
  REQUIRE(wins.size() == 2);
  CHECK(wins[0].insufficient);   // only 2 observations
  CHECK(!wins[1].insufficient);  // 6 observations
}

TEST_CASE("lag_scan recovers a small injected lag") {
  RngStream g = derive_stream(42);
  const LatentPair pair = generate_latent_pair(200, 0.9, 0.1, g);
  std::vector<double> yt(pair.times);
  for (double& t : yt) t -= 3.0;  // y dated too old by 3 steps
  const TimeSeries x(pair.times, pair.x);
  const TimeSeries y(yt, pair.y);
  InferenceConfig cfg;
  cfg.n_steps = 3000;
  cfg.n_keep = 500;
  cfg.seed = 5;
  const std::vector<double> lags{-6, -4, -2, 0, 2, 3, 4, 6};
  const LagScanResult res = lag_scan(x, y, lags, AlignmentSpec::parse("LI"), cfg);
  CHECK(res.best_lag == doctest::Approx(3.0));
  CHECK(res.entries.size() == lags.size());
  CHECK_THROWS_AS(lag_scan(x, y, {}, AlignmentSpec::parse("LI"), cfg), DomainError);
}

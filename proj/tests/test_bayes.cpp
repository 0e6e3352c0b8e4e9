#include <doctest.h>

#include <cmath>

#include "paleocorr/bayes.hpp"
#include "paleocorr/rng.hpp"

using namespace paleocorr;

namespace {

AlignedPairs bvn_sample(std::size_t n, double rho, RngStream& g) {
  AlignedPairs p;
  const double w = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = draw_normal(g);
    const double b = draw_normal(g);
    p.x.push_back(a);
    p.y.push_back(rho * a + w * b);
  }
  return p;
}

double pearson(const AlignedPairs& p) {
  const double n = static_cast<double>(p.x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    sx += p.x[i];
    sy += p.y[i];
    sxx += p.x[i] * p.x[i];
    syy += p.y[i] * p.y[i];
    sxy += p.x[i] * p.y[i];
  }
  const double mx = sx / n, my = sy / n;
  return (sxy / n - mx * my) /
         std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
}

}  // namespace

TEST_CASE("inference config validation") {
  InferenceConfig c;
  c.n_steps = 1;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.burn_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.n_keep = 30000;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.proposal_scales[2] = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  InferenceConfig ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("metropolis needs at least 3 pairs and is deterministic") {
  AlignedPairs tiny;
  tiny.x = {1.0, 2.0};
  tiny.y = {1.0, 2.0};
  InferenceConfig cfg;
  CHECK_THROWS_AS(metropolis(tiny, cfg), DataError);

  RngStream g = derive_stream(31);
  const AlignedPairs p = bvn_sample(100, 0.5, g);
  cfg.n_steps = 3000;
  cfg.n_keep = 500;
  cfg.seed = 99;
  const PosteriorSample a = metropolis(p, cfg);
  const PosteriorSample b = metropolis(p, cfg);
  REQUIRE(a.rho_draws.size() == 500);
  CHECK(a.rho_draws == b.rho_draws);
  CHECK(a.acceptance_rate > 0.01);
  CHECK(a.acceptance_rate < 0.99);
}

TEST_CASE("posterior mode tracks the sample correlation") {
  RngStream g = derive_stream(32);
  InferenceConfig cfg;
  double total = 0.0;
  const int reps = 10;
  for (int i = 0; i < reps; ++i) {
    const AlignedPairs p = bvn_sample(500, 0.5, g);
    cfg.seed = 1000 + i;
    const PosteriorSample s = metropolis(p, cfg);
    total += std::abs(posterior_mode(s) - pearson(p));
  }
  CHECK(total / reps < 0.06);
}

TEST_CASE("log_posterior is -inf outside the domain") {
  AlignedPairs p;
  p.x = {0.1, -0.2, 0.3};
  p.y = {0.0, 0.1, -0.1};
  BnmParams t;
  t.rho = 1.5;
  CHECK(log_posterior(t, p) == -std::numeric_limits<double>::infinity());
  t = {};
  t.sigma_x = -1.0;
  CHECK(log_posterior(t, p) == -std::numeric_limits<double>::infinity());
  t = {};
  t.eta = 6.0;
  CHECK(log_posterior(t, p) == -std::numeric_limits<double>::infinity());
  t = {};
  CHECK(std::isfinite(log_posterior(t, p)));
}

TEST_CASE("posterior_mode matches a brute-force KDE argmax") {
  RngStream g = derive_stream(33);
  PosteriorSample s;
  for (int i = 0; i < 5000; ++i) s.rho_draws.push_back(0.3 + 0.05 * draw_normal(g));
  const double mode = posterior_mode(s);
  CHECK(std::abs(mode - 0.3) < 0.02);

  // independent argmax over a fine grid with a fixed kernel width
  const double h = 0.01;
  double best = -1.0, arg = 0.0;
  for (double t = 0.0; t <= 0.6; t += 0.002) {
    double dens = 0.0;
    for (double v : s.rho_draws) {
      const double z = (t - v) / h;
      dens += std::exp(-0.5 * z * z);
    }
    if (dens > best) {
      best = dens;
      arg = t;
    }
  }
  CHECK(mode == doctest::Approx(arg).epsilon(1).scale(0.02));
}

TEST_CASE("idr of a normal sample is close to 3.29 sigma") {
  RngStream g = derive_stream(34);
  PosteriorSample s;
  for (int i = 0; i < 20000; ++i) s.rho_draws.push_back(0.1 * draw_normal(g));
  // Q95 - Q5 of N(0, sigma) = 2 * 1.6449 * sigma
  CHECK(idr(s) == doctest::Approx(0.32897).epsilon(0.05));
}

TEST_CASE("sign decision thresholds at 1 - alpha posterior mass") {
  PosteriorSample s;
  for (int i = 0; i < 96; ++i) s.rho_draws.push_back(0.5);
  for (int i = 0; i < 4; ++i) s.rho_draws.push_back(-0.5);
  CHECK(sign_decision(s, 0.05) == SignDecision::positive);
  PosteriorSample w;
  for (int i = 0; i < 90; ++i) w.rho_draws.push_back(0.5);
  for (int i = 0; i < 10; ++i) w.rho_draws.push_back(-0.5);
  CHECK(sign_decision(w, 0.05) == SignDecision::indifferent);
  PosteriorSample n;
  for (int i = 0; i < 99; ++i) n.rho_draws.push_back(-0.5);
  n.rho_draws.push_back(0.5);
  CHECK(sign_decision(n, 0.05) == SignDecision::negative);
  CHECK_THROWS_AS(sign_decision(s, 0.0), DomainError);
  CHECK_THROWS_AS(sign_decision(s, 0.5), DomainError);
}

TEST_CASE("pool_ensemble concatenates draws and averages acceptance") {
  PosteriorSample a, b;
  a.rho_draws = {0.1, 0.2};
  a.acceptance_rate = 0.2;
  b.rho_draws = {0.3, 0.4, 0.5};
  b.acceptance_rate = 0.4;
  b.convergence_warning = true;
  const PosteriorSample p = pool_ensemble({a, b});
  CHECK(p.rho_draws.size() == 5);
  CHECK(p.pooled_from == 2);
  CHECK(p.acceptance_rate == doctest::Approx(0.3));
  CHECK(p.convergence_warning);
  CHECK_THROWS_AS(pool_ensemble({}), DataError);
}

TEST_CASE("likelihood-free chain with eta = 1 is centered and wide") {
  InferenceConfig cfg;
  cfg.n_steps = 30000;
  cfg.n_keep = 1000;
  cfg.seed = 77;
  cfg.adapt = false;
  cfg.proposal_scales = {1.0, 1.0, 1.0, 1.0, 1.5, 0.5};
  const PosteriorSample s = sample_prior(cfg, 1.0);
  double mean = 0.0;
  for (double v : s.rho_draws) {
    REQUIRE(v > -1.0);
    REQUIRE(v < 1.0);
    mean += v;
  }
  mean /= s.rho_draws.size();
  CHECK(std::abs(mean) < 0.1);
  // uniform(-1,1) variance is 1/3
  double var = 0.0;
  for (double v : s.rho_draws) var += (v - mean) * (v - mean);
  var /= s.rho_draws.size();
  CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.15));
  CHECK_THROWS_AS(sample_prior(cfg, 0.0), DomainError);
}

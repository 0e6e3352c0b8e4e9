#include "paleocorr/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "paleocorr/errors.hpp"
#include "paleocorr/rng.hpp"

namespace paleocorr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093453;

/// Sufficient statistics of the pairs; make every likelihood evaluation O(1).
struct SuffStats {
  double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;

  static SuffStats from(const AlignedPairs& p) {
    SuffStats s;
    s.n = static_cast<double>(p.x.size());
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      s.sx += p.x[i];
      s.sy += p.y[i];
      s.sxx += p.x[i] * p.x[i];
      s.syy += p.y[i] * p.y[i];
      s.sxy += p.x[i] * p.y[i];
    }
    return s;
  }
};

double log_likelihood(const BnmParams& t, const SuffStats& s) {
  const double om = 1.0 - t.rho * t.rho;
  const double qxx = s.sxx - 2.0 * t.mu_x * s.sx + s.n * t.mu_x * t.mu_x;
  const double qyy = s.syy - 2.0 * t.mu_y * s.sy + s.n * t.mu_y * t.mu_y;
  const double qxy = s.sxy - t.mu_x * s.sy - t.mu_y * s.sx + s.n * t.mu_x * t.mu_y;
  const double vx = t.sigma_x * t.sigma_x;
  const double vy = t.sigma_y * t.sigma_y;
  return -s.n * kLog2Pi - s.n * std::log(t.sigma_x) - s.n * std::log(t.sigma_y) -
         0.5 * s.n * std::log(om) -
         0.5 / om *
             (qxx / vx - 2.0 * t.rho * qxy / (t.sigma_x * t.sigma_y) + qyy / vy);
}

double log_prior(const BnmParams& t) {
  if (!t.in_domain()) return kNegInf;
  // means ~ N(0, 10)
  double lp = -(t.mu_x * t.mu_x + t.mu_y * t.mu_y) / 200.0;
  // sigmas ~ HalfCauchy(2.5)
  lp += -std::log1p((t.sigma_x / 2.5) * (t.sigma_x / 2.5));
  lp += -std::log1p((t.sigma_y / 2.5) * (t.sigma_y / 2.5));
  // rho | eta ~ bivariate LKJ: (eta-1) log(1-rho^2) - log B(eta,eta) - (2eta-1) log 2
  const double om = 1.0 - t.rho * t.rho;
  const double logbeta = 2.0 * std::lgamma(t.eta) - std::lgamma(2.0 * t.eta);
  lp += (t.eta - 1.0) * std::log(om) - logbeta - (2.0 * t.eta - 1.0) * std::log(2.0);
  // eta ~ Uniform(0, 5): constant inside the domain
  return lp;
}

struct ChainState {
  std::array<double, 6> u{};  // mu_x, mu_y, log sx, log sy, atanh rho, eta

  BnmParams params() const {
    BnmParams t;
    t.mu_x = u[0];
    t.mu_y = u[1];
    t.sigma_x = std::exp(u[2]);
    t.sigma_y = std::exp(u[3]);
    t.rho = std::tanh(u[4]);
    t.eta = u[5];
    return t;
  }
};

/// Log target in the unconstrained space, including the Jacobian of
/// (log sigma, atanh rho).
double log_target(const ChainState& st, const SuffStats* stats) {
  const BnmParams t = st.params();
  double lp = log_prior(t);
  if (lp == kNegInf) return kNegInf;
  if (stats) lp += log_likelihood(t, *stats);
  const double om = 1.0 - t.rho * t.rho;
  return lp + std::log(t.sigma_x) + std::log(t.sigma_y) + std::log(om);
}

PosteriorSample run_chain(const SuffStats* stats, const InferenceConfig& cfg,
                          ChainState st, std::array<bool, 6> active) {
  RngStream rng = derive_stream(cfg.seed, 0x6d636d63ULL);
  std::array<double, 6> scales = cfg.proposal_scales;
  const int burn = static_cast<int>(std::floor(cfg.burn_fraction * cfg.n_steps));
  double lp = log_target(st, stats);

  std::vector<double> post_burn;
  post_burn.reserve(cfg.n_steps - burn);
  long accepted_post = 0;
  int window_acc = 0, window_n = 0;
  const int adapt_window = 250;
  const int adapt_end = burn / 2;

  for (int step = 0; step < cfg.n_steps; ++step) {
    ChainState prop = st;
    for (int k = 0; k < 6; ++k)
      if (active[k]) prop.u[k] += scales[k] * draw_normal(rng);
    const double lpp = log_target(prop, stats);
    bool accept = false;
    if (lpp > kNegInf) {
      const double logu = std::log(draw_uniform(rng));
      accept = logu < lpp - lp;
    }
    if (accept) {
      st = prop;
      lp = lpp;
    }
    if (cfg.adapt && step < adapt_end) {
      window_acc += accept ? 1 : 0;
      if (++window_n == adapt_window) {
        const double rate = static_cast<double>(window_acc) / window_n;
        if (rate < 0.2)
          for (double& s : scales) s *= 0.8;
        else if (rate > 0.4)
          for (double& s : scales) s *= 1.25;
        window_acc = window_n = 0;
      }
    }
    if (step >= burn) {
      accepted_post += accept ? 1 : 0;
      post_burn.push_back(std::tanh(st.u[4]));
    }
  }

  PosteriorSample out;
  const int n_post = static_cast<int>(post_burn.size());
  const int keep = std::min(cfg.n_keep, n_post);
  const int stride = n_post / keep;
  out.rho_draws.reserve(keep);
  for (int k = 0; k < keep; ++k) out.rho_draws.push_back(post_burn[(k + 1) * stride - 1]);
  out.acceptance_rate = static_cast<double>(accepted_post) / n_post;
  out.convergence_warning = out.acceptance_rate < 0.01 || out.acceptance_rate > 0.99;
  return out;
}

}  // namespace

bool BnmParams::in_domain() const {
  return sigma_x > 0.0 && sigma_y > 0.0 && std::abs(rho) < 1.0 && eta > 0.0 &&
         eta < 5.0;
}

void InferenceConfig::validate() const {
  if (n_steps < 2) throw DomainError("inference: n_steps must be >= 2");
  if (burn_fraction < 0.0 || burn_fraction >= 1.0)
    throw DomainError("inference: burn_fraction must lie in [0, 1)");
  if (n_keep < 1) throw DomainError("inference: n_keep must be >= 1");
  if (n_keep > static_cast<int>((1.0 - burn_fraction) * n_steps))
    throw DomainError("inference: n_keep exceeds post-burn-in draw count");
  for (double s : proposal_scales)
    if (s <= 0.0) throw DomainError("inference: proposal scales must be positive");
}

const char* to_string(SignDecision s) {
  switch (s) {
    case SignDecision::positive: return "positive";
    case SignDecision::negative: return "negative";
    default: return "indifferent";
  }
}

double log_posterior(const BnmParams& params, const AlignedPairs& pairs) {
  const double lp = log_prior(params);
  if (lp == kNegInf) return kNegInf;
  const SuffStats s = SuffStats::from(pairs);
  return lp + log_likelihood(params, s);
}

PosteriorSample metropolis(const AlignedPairs& pairs, const InferenceConfig& cfg) {
  cfg.validate();
  if (pairs.effective_n() < 3)
    throw DataError("metropolis: need at least 3 aligned pairs");
  const SuffStats stats = SuffStats::from(pairs);

  // start the chain from the data moments
  const double n = stats.n;
  const double mx = stats.sx / n, my = stats.sy / n;
  const double vx = std::max((stats.sxx - n * mx * mx) / (n - 1.0), 1e-12);
  const double vy = std::max((stats.syy - n * my * my) / (n - 1.0), 1e-12);
  double r = (stats.sxy / n - mx * my) / std::sqrt(vx * vy) * n / (n - 1.0);
  r = std::clamp(r, -0.98, 0.98);

  ChainState st;
  st.u = {mx, my, 0.5 * std::log(vx), 0.5 * std::log(vy), std::atanh(r), 1.0};
  return run_chain(&stats, cfg, st, {true, true, true, true, true, true});
}

PosteriorSample sample_prior(const InferenceConfig& cfg, double eta) {
  cfg.validate();
  if (eta <= 0.0 || eta >= 5.0)
    throw DomainError("sample_prior: eta must lie in (0, 5)");
  ChainState st;
  st.u = {0.0, 0.0, 0.0, 0.0, 0.0, eta};
  return run_chain(nullptr, cfg, st, {true, true, true, true, true, false});
}

double posterior_mode(const PosteriorSample& s) {
  const auto& d = s.rho_draws;
  if (d.size() < 100) throw DataError("posterior_mode: need at least 100 draws");
  const auto [mn_it, mx_it] = std::minmax_element(d.begin(), d.end());
  const double lo = *mn_it, hi = *mx_it;
  if (hi <= lo) return lo;  // degenerate sample

  const double n = static_cast<double>(d.size());
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.349);
  double h = 0.9 * spread * std::pow(n, -0.2);
  if (h <= 0.0) h = (hi - lo) / 100.0;

  constexpr int kGrid = 512;
  double best_val = -1.0, best_loc = lo;
  for (int g = 0; g < kGrid; ++g) {
    const double t = lo + (hi - lo) * g / (kGrid - 1);
    double dens = 0.0;
    for (double v : sorted) {
      const double z = (t - v) / h;
      dens += std::exp(-0.5 * z * z);
    }
    if (dens > best_val) {
      best_val = dens;
      best_loc = t;
    }
  }
  return best_loc;
}

double idr(const PosteriorSample& s) {
  if (s.rho_draws.size() < 100) throw DataError("idr: need at least 100 draws");
  return quantile(s.rho_draws, 0.95) - quantile(s.rho_draws, 0.05);
}

SignDecision sign_decision(const PosteriorSample& s, double alpha) {
  if (alpha <= 0.0 || alpha >= 0.5)
    throw DomainError("sign_decision: alpha must lie in (0, 0.5)");
  const double n = static_cast<double>(s.rho_draws.size());
  double pos = 0.0, neg = 0.0;
  for (double v : s.rho_draws) {
    if (v > 0.0) pos += 1.0;
    else if (v < 0.0) neg += 1.0;
  }
  if (pos / n >= 1.0 - alpha) return SignDecision::positive;
  if (neg / n >= 1.0 - alpha) return SignDecision::negative;
  return SignDecision::indifferent;
}

PosteriorSample pool_ensemble(const std::vector<PosteriorSample>& samples) {
  if (samples.empty()) throw DataError("pool_ensemble: empty input");
  PosteriorSample out;
  out.pooled_from = static_cast<int>(samples.size());
  double acc = 0.0;
  for (const auto& s : samples) {
    out.rho_draws.insert(out.rho_draws.end(), s.rho_draws.begin(), s.rho_draws.end());
    acc += s.acceptance_rate;
    out.convergence_warning = out.convergence_warning || s.convergence_warning;
  }
  out.acceptance_rate = acc / samples.size();
  return out;
}

}  // namespace paleocorr

#pragma once

#include <cstdint>
#include <vector>

#include "paleocorr/rng.hpp"
#include "paleocorr/series.hpp"

namespace paleocorr {

/// Generator knobs for one pseudoproxy pair.
struct PseudoproxyParams {
  int n_obs = 100;        ///< target number of observations per record
  double coupling = 0.5;  ///< true correlation c in [0, 1]
  double drag = 0.1;      ///< OU mean-reversion rate theta (> 0, 1/time)
  double sed_mean = 0.35; ///< mean sedimentation rate mu_S (> 0, depth/time)
  double sed_skew = 1.5;  ///< sedimentation skewness gamma_S (> 0)
  std::uint64_t seed = 0;

  void validate() const;

  /// Draws each field uniformly from the benchmark sweep intervals:
  /// n_obs in [25,300], c in [0.1,0.9], theta in [0.01,0.9],
  /// mu_S in [0.2,0.5], gamma_S in [1,2].
  static PseudoproxyParams draw_sweep(RngStream& rng, std::uint64_t seed);
};

/// Coupled latent climate signals on a regular unit grid.
struct LatentPair {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> y;
};

/// Stochastic sedimentation history: one layer per latent sample.
/// Layer i spans depths (layer_top_depths[i] - thickness_i,
/// layer_top_depths[i]] and carries assigned_values[i] deposited at
/// layer_times[i].
struct SedimentColumn {
  std::vector<double> layer_top_depths;  ///< cumulative thickness, strictly increasing
  std::vector<double> layer_times;
  std::vector<double> assigned_values;

  double total_depth() const { return layer_top_depths.back(); }
};

/// A regularly depth-sampled core: observation depths plus the resulting
/// irregular time series.
struct SampledCore {
  std::vector<double> depths;
  std::vector<double> times;
  std::vector<double> values;

  TimeSeries series() const { return TimeSeries(times, values); }
};

/// Stationary Ornstein-Uhlenbeck path on a regular grid of step dt, unit
/// stationary variance, exact discrete transition.
std::vector<double> generate_ou(std::size_t n, double dt, double drag, RngStream& rng);

/// y_i = c x_i + sqrt(1 - c^2) eps_i with an independent OU path eps of the
/// same drag, so the population correlation of (x, y) is exactly c.
std::vector<double> couple(const std::vector<double>& x, double coupling,
                           double drag, double dt, RngStream& rng);

/// Latent pair on times 0,1,...,n-1.
LatentPair generate_latent_pair(std::size_t n, double coupling, double drag,
                                RngStream& rng);

/// Assigns each value a gamma-distributed layer thickness. The gamma shape is
/// moment-matched: k = (2/gamma_S)^2, scale = mu_S / k, so the thickness mean
/// is mu_S and its skewness gamma_S.
SedimentColumn deposit(const std::vector<double>& values,
                       const std::vector<double>& times, double sed_mean,
                       double sed_skew, RngStream& rng);

/// Samples the column at regular depth intervals (probes at 0, spacing,
/// 2*spacing, ...). Each observation takes the value and true time of the
/// layer containing the probe; consecutive probes landing in the same layer
/// collapse to one observation.
SampledCore sample_core(const SedimentColumn& column, double sample_spacing);

}  // namespace paleocorr

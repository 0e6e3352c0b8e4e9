#pragma once

#include <iosfwd>
#include <vector>

#include "paleocorr/rng.hpp"

namespace paleocorr {

/// Empirical mapping between calendar age and radiocarbon age with per-knot
/// uncertainty. Immutable after load; lookups never extrapolate.
struct CalibrationCurve {
  std::vector<double> cal_age;      ///< strictly increasing, years
  std::vector<double> c14_age;      ///< years
  std::vector<double> curve_sigma;  ///< positive, years

  double min_cal() const { return cal_age.front(); }
  double max_cal() const { return cal_age.back(); }
  bool contains(double cal) const { return cal >= min_cal() && cal <= max_cal(); }

  /// Linear interpolation of the radiocarbon age; throws DataError outside range.
  double c14_at(double cal) const;
  /// Linear interpolation of the curve uncertainty; throws DataError outside range.
  double sigma_at(double cal) const;

  void validate() const;
};

/// Parses the three-column text format (cal_age, c14_age, sigma), comma- or
/// whitespace-separated, '#' comment lines skipped. Errors carry line numbers.
CalibrationCurve load_calibration_curve(std::istream& in);

/// Bundled strictly monotone piecewise-linear curve spanning 0..200000 cal a,
/// with slope wiggles and age-dependent uncertainty. Lets synthetic runs and
/// tests work without distributing a published curve file.
CalibrationCurve toy_marine_curve();

/// One simulated (or measured) radiocarbon determination at a core depth.
struct RadiocarbonDate {
  double depth = 0.0;
  double measured_c14 = 0.0;  ///< years
  double meas_sigma = 0.0;    ///< > 0, years
};

/// Simulates dating a horizon of known calendar age: curve lookup plus
/// Gaussian noise with variance meas_sigma^2 + curve_sigma^2.
RadiocarbonDate forward_date(double depth, double cal_age,
                             const CalibrationCurve& curve, double meas_sigma,
                             RngStream& rng);

/// Discrete calibrated-age distribution on a regular calendar-age grid.
struct CalibratedDistribution {
  std::vector<double> ages;     ///< grid points (support after truncation)
  std::vector<double> weights;  ///< normalized to sum 1

  double sample(RngStream& rng) const;
  double quantile(double p) const;
  double mode() const;
};

/// Posterior over calendar age: weight(t) proportional to
/// exp(-(measured - mu_curve(t))^2 / (2 (meas_sigma^2 + sigma_curve(t)^2))),
/// support truncated below 1e-9 of the maximum weight.
CalibratedDistribution calibrate_date(const RadiocarbonDate& date,
                                      const CalibrationCurve& curve,
                                      double grid_step = 5.0);

/// Per-observation distribution over plausible ages: stored realizations are
/// strictly monotone in depth; median_ages is the per-depth median.
struct AgeEnsemble {
  std::vector<double> depths;
  std::vector<std::vector<double>> realizations;  ///< [n_real][n_depths]
  std::vector<double> median_ages;
};

struct EnsembleOptions {
  double grid_step = 5.0;
  int retry_cap = 100;            ///< redraws per date before rejecting a realization
  int attempt_factor = 100;       ///< total realization attempts = factor * n_real
};

/// Draws age-model realizations: one calibrated age per dated depth, with
/// monotonicity enforced by reject-and-redraw, linearly interpolated to the
/// observation depths. No extrapolation beyond the dated span.
AgeEnsemble build_age_ensemble(const std::vector<double>& obs_depths,
                               const std::vector<RadiocarbonDate>& dates,
                               const CalibrationCurve& curve, int n_real,
                               RngStream& rng,
                               const EnsembleOptions& opts = {});

}  // namespace paleocorr

#pragma once

#include <string>
#include <vector>

#include "paleocorr/bayes.hpp"
#include "paleocorr/series.hpp"

namespace paleocorr {

/// The four joint-distribution approximation methods.
enum class Method { LI, G, NV, S };

/// Method plus its scale: the Gaussian bandwidth h or slot width W as a
/// multiple of the pair-averaged mean sampling interval. NV uses a fixed
/// matching limit of 0.5 * dt.
struct AlignmentSpec {
  Method method = Method::LI;
  double scale = 1.0;

  std::string name() const;              ///< "LI", "G(0.5)", "NV", "S(2)", ...
  static AlignmentSpec parse(const std::string& s);

  /// The benchmark set: LI, G(0.5), G(2), NV, S(1), S(2).
  static std::vector<AlignmentSpec> default_set();
};

/// Produces concurrent value pairs from two unequally sampled series.
/// Never extrapolates; throws DataError when fewer than 3 pairs result or
/// the time ranges do not overlap.
AlignedPairs align(const TimeSeries& x, const TimeSeries& y,
                   const AlignmentSpec& spec);

/// Gaussian-kernel lag correlation over ordered observation pairs; the
/// irregular-sampling analogue of the lag autocorrelation.
double gacf(const TimeSeries& ts, double lag, double bandwidth);

/// Defaults: lag = mean_dt, bandwidth = 0.25 * mean_dt.
double gacf(const TimeSeries& ts);

/// Subtracts a Gaussian-kernel smooth with bandwidth cutoff / (2 pi),
/// removing wavelengths well above the cutoff; output re-normalized.
TimeSeries highpass(const TimeSeries& ts, double cutoff);

struct LagScanEntry {
  double lag = 0.0;
  double mode = 0.0;
  double q5 = 0.0, q95 = 0.0;
  std::size_t n_pairs = 0;
  bool valid = false;
};

struct LagScanResult {
  double best_lag = 0.0;
  std::vector<LagScanEntry> entries;
};

/// Shifts y by each candidate lag, aligns, runs inference and records the
/// posterior mode; best_lag maximizes the mode. Per-lag summaries are kept
/// so flat maxima stay visible.
LagScanResult lag_scan(const TimeSeries& x, const TimeSeries& y,
                       const std::vector<double>& lags, const AlignmentSpec& spec,
                       const InferenceConfig& cfg);

struct Window {
  double start = 0.0, end = 0.0;
  std::vector<double> x_times, x_values;
  std::vector<double> y_times, y_values;
  bool insufficient = false;  ///< fewer than 5 observations in either series
};

/// Sliding windows covering the joint time span; observations with
/// start <= t < end. Sparse windows are flagged, never dropped.
std::vector<Window> windows(const TimeSeries& x, const TimeSeries& y,
                            double width, double step);

}  // namespace paleocorr

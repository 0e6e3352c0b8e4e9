#pragma once

#include <cstddef>
#include <vector>

#include "paleocorr/errors.hpp"

namespace paleocorr {

/// An irregularly sampled record: strictly increasing observation times with
/// one finite value per time. The common currency of all modules.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;

  TimeSeries() = default;
  TimeSeries(std::vector<double> t, std::vector<double> v);

  std::size_t size() const { return times.size(); }
  double span() const { return times.back() - times.front(); }
};

/// Concurrent value pairs produced by an alignment method; the direct input
/// to inference.
struct AlignedPairs {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t effective_n() const { return x.size(); }
};

/// Rescales to zero mean and unit sample variance (n-1 denominator).
/// Throws DataError on a constant series.
TimeSeries normalize(const TimeSeries& ts);

/// Mean sampling interval (t_N - t_1) / (N - 1).
double mean_dt(const TimeSeries& ts);

/// Linearly interpolated p-quantile of an unsorted sample.
double quantile(std::vector<double> v, double p);

}  // namespace paleocorr

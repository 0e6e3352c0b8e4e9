#include "paleocorr/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace paleocorr {

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> v)
    : times(std::move(t)), values(std::move(v)) {
  if (times.size() != values.size())
    throw DataError("time series: times and values differ in length");
  if (times.size() < 2) throw DataError("time series needs at least 2 observations");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw DataError("time series contains non-finite entries");
    if (i > 0 && times[i] <= times[i - 1])
      throw DataError("time series times must be strictly increasing");
  }
}

TimeSeries normalize(const TimeSeries& ts) {
  const std::size_t n = ts.size();
  const double mean = std::accumulate(ts.values.begin(), ts.values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : ts.values) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1);
  if (var <= 0.0) throw DataError("normalize: series has zero variance");
  const double sd = std::sqrt(var);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (ts.values[i] - mean) / sd;
  return TimeSeries(ts.times, std::move(out));
}

double mean_dt(const TimeSeries& ts) {
  return (ts.times.back() - ts.times.front()) / static_cast<double>(ts.size() - 1);
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw DataError("quantile of empty sample");
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  const double f = h - static_cast<double>(lo);
  return v[lo] * (1.0 - f) + v[lo + 1] * f;
}

}  // namespace paleocorr

#include "paleocorr/chronology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "paleocorr/errors.hpp"

namespace paleocorr {

namespace {

double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi >= xs.size()) return ys.back();
  const std::size_t lo = hi - 1;
  const double f = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] * (1.0 - f) + ys[hi] * f;
}

}  // namespace

void CalibrationCurve::validate() const {
  if (cal_age.size() < 2 || cal_age.size() != c14_age.size() ||
      cal_age.size() != curve_sigma.size())
    throw DataError("calibration curve: needs >= 2 rows of equal length columns");
  for (std::size_t i = 0; i < cal_age.size(); ++i) {
    if (i > 0 && cal_age[i] <= cal_age[i - 1])
      throw DataError("calibration curve: cal ages must be strictly increasing");
    if (curve_sigma[i] < 0.0)
      throw DataError("calibration curve: negative sigma");
  }
}

double CalibrationCurve::c14_at(double cal) const {
  if (!contains(cal)) throw DataError("calibration curve lookup outside range");
  return lerp_at(cal_age, c14_age, cal);
}

double CalibrationCurve::sigma_at(double cal) const {
  if (!contains(cal)) throw DataError("calibration curve lookup outside range");
  return lerp_at(cal_age, curve_sigma, cal);
}

CalibrationCurve load_calibration_curve(std::istream& in) {
  CalibrationCurve curve;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line;
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (s[first] == '#') continue;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream row(s);
    double cal, c14, sig;
    if (!(row >> cal >> c14 >> sig))
      throw DataError("calibration curve: malformed row at line " +
                      std::to_string(lineno));
    if (!curve.cal_age.empty() && cal <= curve.cal_age.back())
      throw DataError("calibration curve: non-monotone cal age at line " +
                      std::to_string(lineno));
    if (sig < 0.0)
      throw DataError("calibration curve: negative sigma at line " +
                      std::to_string(lineno));
    curve.cal_age.push_back(cal);
    curve.c14_age.push_back(c14);
    curve.curve_sigma.push_back(sig);
  }
  curve.validate();
  return curve;
}

CalibrationCurve toy_marine_curve() {
  CalibrationCurve curve;
  for (double t = 0.0; t <= 200000.0; t += 500.0) {
    curve.cal_age.push_back(t);
    // strictly monotone with slope wiggles between ~0.82 and ~1.08
    curve.c14_age.push_back(0.95 * t + 300.0 * std::sin(t / 2500.0));
    curve.curve_sigma.push_back(20.0 + t / 2000.0);
  }
  curve.validate();
  return curve;
}

RadiocarbonDate forward_date(double depth, double cal_age,
                             const CalibrationCurve& curve, double meas_sigma,
                             RngStream& rng) {
  if (meas_sigma < 0.0) throw DomainError("forward_date: negative meas_sigma");
  const double mu = curve.c14_at(cal_age);
  const double sc = curve.sigma_at(cal_age);
  const double sigma = std::sqrt(meas_sigma * meas_sigma + sc * sc);
  RadiocarbonDate d;
  d.depth = depth;
  d.measured_c14 = mu + sigma * draw_normal(rng);
  d.meas_sigma = meas_sigma;
  return d;
}

double CalibratedDistribution::sample(RngStream& rng) const {
  const double u = draw_uniform(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < ages.size(); ++i) {
    cum += weights[i];
    if (u <= cum) return ages[i];
  }
  return ages.back();
}

double CalibratedDistribution::quantile(double p) const {
  double cum = 0.0;
  for (std::size_t i = 0; i < ages.size(); ++i) {
    cum += weights[i];
    if (p <= cum) return ages[i];
  }
  return ages.back();
}

double CalibratedDistribution::mode() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < weights.size(); ++i)
    if (weights[i] > weights[best]) best = i;
  return ages[best];
}

CalibratedDistribution calibrate_date(const RadiocarbonDate& date,
                                      const CalibrationCurve& curve,
                                      double grid_step) {
  if (grid_step <= 0.0) throw DomainError("calibrate_date: grid_step must be positive");
  std::vector<double> grid, logw;
  for (double t = curve.min_cal(); t <= curve.max_cal() + 1e-9; t += grid_step) {
    const double tt = std::min(t, curve.max_cal());
    const double mu = curve.c14_at(tt);
    const double sc = curve.sigma_at(tt);
    const double var = date.meas_sigma * date.meas_sigma + sc * sc;
    const double r = date.measured_c14 - mu;
    grid.push_back(tt);
    logw.push_back(-0.5 * r * r / var);
  }
  const double maxlw = *std::max_element(logw.begin(), logw.end());
  if (maxlw < -700.0)
    throw NumericError("calibrate_date: date lies far outside the curve");
  CalibratedDistribution dist;
  const double cutoff = std::log(1e-9);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (logw[i] - maxlw < cutoff) continue;
    const double w = std::exp(logw[i] - maxlw);
    dist.ages.push_back(grid[i]);
    dist.weights.push_back(w);
    total += w;
  }
  for (double& w : dist.weights) w /= total;
  return dist;
}

AgeEnsemble build_age_ensemble(const std::vector<double>& obs_depths,
                               const std::vector<RadiocarbonDate>& dates,
                               const CalibrationCurve& curve, int n_real,
                               RngStream& rng, const EnsembleOptions& opts) {
  if (dates.size() < 2) throw DataError("age ensemble: need >= 2 dated depths");
  if (n_real < 1) throw DomainError("age ensemble: n_real must be >= 1");
  std::vector<RadiocarbonDate> sorted = dates;
  std::sort(sorted.begin(), sorted.end(),
            [](const RadiocarbonDate& a, const RadiocarbonDate& b) {
              return a.depth < b.depth;
            });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].depth <= sorted[i - 1].depth)
      throw DataError("age ensemble: duplicate dated depths");
  for (double d : obs_depths)
    if (d < sorted.front().depth || d > sorted.back().depth)
      throw DataError("age ensemble: observation depth outside dated span");

  std::vector<CalibratedDistribution> dists;
  dists.reserve(sorted.size());
  for (const auto& d : sorted) dists.push_back(calibrate_date(d, curve, opts.grid_step));

  std::vector<double> date_depths;
  for (const auto& d : sorted) date_depths.push_back(d.depth);

  AgeEnsemble ens;
  ens.depths = obs_depths;
  const long max_attempts = static_cast<long>(opts.attempt_factor) * n_real;
  long attempts = 0;
  std::vector<double> date_ages(sorted.size());
  while (static_cast<int>(ens.realizations.size()) < n_real) {
    if (attempts++ >= max_attempts)
      throw NumericError("age ensemble: retry cap exhausted (degenerate chronology)");
    bool ok = true;
    for (std::size_t i = 0; i < dists.size(); ++i) {
      int tries = 0;
      double age = dists[i].sample(rng);
      while (i > 0 && age <= date_ages[i - 1]) {
        if (++tries > opts.retry_cap) { ok = false; break; }
        age = dists[i].sample(rng);
      }
      if (!ok) break;
      date_ages[i] = age;
    }
    if (!ok) continue;
    std::vector<double> row(obs_depths.size());
    for (std::size_t j = 0; j < obs_depths.size(); ++j)
      row[j] = lerp_at(date_depths, date_ages, obs_depths[j]);
    ens.realizations.push_back(std::move(row));
  }

  ens.median_ages.resize(obs_depths.size());
  std::vector<double> col(ens.realizations.size());
  for (std::size_t j = 0; j < obs_depths.size(); ++j) {
    for (std::size_t r = 0; r < ens.realizations.size(); ++r)
      col[r] = ens.realizations[r][j];
    std::sort(col.begin(), col.end());
    const std::size_t m = col.size() / 2;
    ens.median_ages[j] = (col.size() % 2 == 1) ? col[m] : 0.5 * (col[m - 1] + col[m]);
  }
  return ens;
}

}  // namespace paleocorr

#include "paleocorr/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paleocorr/errors.hpp"
#include "paleocorr/rng.hpp"

namespace paleocorr {

namespace {

constexpr double kPi = 3.14159265358979323846;

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi == 0) return ys.front();
  const std::size_t lo = hi - 1;
  const double f = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] * (1.0 - f) + ys[hi] * f;
}

/// Kernel-weighted mean of y at time t; log-space weights so distant
/// neighbours underflow gracefully.
double kernel_mean(const std::vector<double>& ty, const std::vector<double>& vy,
                   double t, double h) {
  double best = -1e300;
  for (double s : ty) {
    const double e = -0.5 * (t - s) * (t - s) / (h * h);
    if (e > best) best = e;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < ty.size(); ++j) {
    const double w = std::exp(-0.5 * (t - ty[j]) * (t - ty[j]) / (h * h) - best);
    num += w * vy[j];
    den += w;
  }
  return num / den;
}

}  // namespace

std::string AlignmentSpec::name() const {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  switch (method) {
    case Method::LI: return "LI";
    case Method::NV: return "NV";
    case Method::G: return "G(" + fmt(scale) + ")";
    default: return "S(" + fmt(scale) + ")";
  }
}

AlignmentSpec AlignmentSpec::parse(const std::string& s) {
  AlignmentSpec spec;
  if (s == "LI") { spec.method = Method::LI; spec.scale = 1.0; return spec; }
  if (s == "NV") { spec.method = Method::NV; spec.scale = 0.5; return spec; }
  const auto open = s.find('(');
  const auto close = s.rfind(')');
  if (open != std::string::npos && close == s.size() - 1 && close > open + 1) {
    const std::string head = s.substr(0, open);
    const double v = std::stod(s.substr(open + 1, close - open - 1));
    if (v <= 0.0) throw DomainError("alignment scale must be positive: " + s);
    if (head == "G") { spec.method = Method::G; spec.scale = v; return spec; }
    if (head == "S") { spec.method = Method::S; spec.scale = v; return spec; }
  }
  throw DataError("unknown alignment method: " + s);
}

std::vector<AlignmentSpec> AlignmentSpec::default_set() {
  return {AlignmentSpec::parse("LI"), AlignmentSpec::parse("G(0.5)"),
          AlignmentSpec::parse("G(2)"), AlignmentSpec::parse("NV"),
          AlignmentSpec::parse("S(1)"), AlignmentSpec::parse("S(2)")};
}

AlignedPairs align(const TimeSeries& x, const TimeSeries& y,
                   const AlignmentSpec& spec) {
  if (spec.scale <= 0.0) throw DomainError("align: scale must be positive");
  const double lo = std::max(x.times.front(), y.times.front());
  const double hi = std::min(x.times.back(), y.times.back());
  if (lo >= hi) throw DataError("align: series time ranges do not overlap");
  const double dt = 0.5 * (mean_dt(x) + mean_dt(y));

  AlignedPairs out;
  switch (spec.method) {
    case Method::LI: {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x.times[i];
        if (t < y.times.front() || t > y.times.back()) continue;
        out.x.push_back(x.values[i]);
        out.y.push_back(interp_linear(y.times, y.values, t));
      }
      break;
    }
    case Method::G: {
      const double h = spec.scale * dt;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x.times[i];
        if (t < y.times.front() || t > y.times.back()) continue;
        out.x.push_back(x.values[i]);
        out.y.push_back(kernel_mean(y.times, y.values, t, h));
      }
      break;
    }
    case Method::NV: {
      const double limit = 0.5 * dt;
      std::vector<bool> used(y.size(), false);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x.times[i];
        const auto it = std::lower_bound(y.times.begin(), y.times.end(), t);
        std::size_t cand = y.size();
        double best = limit + 1.0;
        // check the neighbour on each side, preferring the earlier one on ties
        const std::size_t right = static_cast<std::size_t>(it - y.times.begin());
        if (right > 0 && !used[right - 1]) {
          best = t - y.times[right - 1];
          cand = right - 1;
        }
        if (right < y.size() && !used[right]) {
          const double d = y.times[right] - t;
          if (d < best) { best = d; cand = right; }
        }
        if (cand < y.size() && best <= limit) {
          used[cand] = true;
          out.x.push_back(x.values[i]);
          out.y.push_back(y.values[cand]);
        }
      }
      break;
    }
    case Method::S: {
      const double w = spec.scale * dt;
      std::size_t ix = 0, iy = 0;
      for (double s = lo; s + w <= hi + 1e-12 * std::max(1.0, std::abs(hi)); s += w) {
        const double e = s + w;
        double sx = 0.0, sy = 0.0;
        int nx = 0, ny = 0;
        while (ix < x.size() && x.times[ix] < s) ++ix;
        for (std::size_t i = ix; i < x.size() && x.times[i] < e; ++i) {
          sx += x.values[i];
          ++nx;
        }
        while (iy < y.size() && y.times[iy] < s) ++iy;
        for (std::size_t i = iy; i < y.size() && y.times[i] < e; ++i) {
          sy += y.values[i];
          ++ny;
        }
        if (nx > 0 && ny > 0) {
          out.x.push_back(sx / nx);
          out.y.push_back(sy / ny);
        }
      }
      break;
    }
  }
  if (out.effective_n() < 3)
    throw DataError("align: fewer than 3 concurrent pairs (insufficient overlap)");
  return out;
}

double gacf(const TimeSeries& ts, double lag, double bandwidth) {
  if (lag <= 0.0) throw DomainError("gacf: lag must be positive");
  if (bandwidth <= 0.0) throw DomainError("gacf: bandwidth must be positive");
  const double window = 6.0 * bandwidth;
  double num = 0.0, den = 0.0;
  std::size_t j0 = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts.times[i];
    while (j0 < ts.size() && ts.times[j0] - t < lag - window) ++j0;
    for (std::size_t j = std::max(j0, i + 1); j < ts.size(); ++j) {
      const double d = ts.times[j] - t - lag;
      if (d > window) break;
      const double w = std::exp(-0.5 * d * d / (bandwidth * bandwidth));
      num += w * ts.values[i] * ts.values[j];
      den += w;
    }
  }
  if (den < 1e-12) throw NumericError("gacf: total kernel weight vanishes");
  return num / den;
}

double gacf(const TimeSeries& ts) {
  const double dt = mean_dt(ts);
  return gacf(ts, dt, 0.25 * dt);
}

TimeSeries highpass(const TimeSeries& ts, double cutoff) {
  if (cutoff <= 0.0) throw DomainError("highpass: cutoff must be positive");
  const double b = cutoff / (2.0 * kPi);
  const double window = 6.0 * b;
  const std::size_t n = ts.size();
  std::vector<double> resid(n);
  std::size_t j0 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = ts.times[i];
    while (j0 < n && ts.times[j0] < t - window) ++j0;
    double num = 0.0, den = 0.0;
    for (std::size_t j = j0; j < n && ts.times[j] <= t + window; ++j) {
      const double d = (t - ts.times[j]) / b;
      const double w = std::exp(-0.5 * d * d);
      num += w * ts.values[j];
      den += w;
    }
    resid[i] = ts.values[i] - num / den;
  }
  return normalize(TimeSeries(ts.times, std::move(resid)));
}

LagScanResult lag_scan(const TimeSeries& x, const TimeSeries& y,
                       const std::vector<double>& lags, const AlignmentSpec& spec,
                       const InferenceConfig& cfg) {
  if (lags.empty()) throw DomainError("lag_scan: empty lag grid");
  LagScanResult res;
  res.entries.reserve(lags.size());
  bool any = false;
  double best_mode = -2.0;
  for (std::size_t k = 0; k < lags.size(); ++k) {
    LagScanEntry e;
    e.lag = lags[k];
    std::vector<double> shifted = y.times;
    for (double& t : shifted) t += e.lag;
    try {
      const AlignedPairs pairs = align(x, TimeSeries(shifted, y.values), spec);
      InferenceConfig c = cfg;
      c.seed = mix64(cfg.seed ^ mix64(k + 1));
      const PosteriorSample s = metropolis(pairs, c);
      e.mode = posterior_mode(s);
      e.q5 = quantile(s.rho_draws, 0.05);
      e.q95 = quantile(s.rho_draws, 0.95);
      e.n_pairs = pairs.effective_n();
      e.valid = true;
      if (!any || e.mode > best_mode) {
        best_mode = e.mode;
        res.best_lag = e.lag;
        any = true;
      }
    } catch (const DataError&) {
      e.valid = false;
    }
    res.entries.push_back(e);
  }
  if (!any)
    throw DataError("lag_scan: no lag yields sufficient overlap");
  return res;
}

std::vector<Window> windows(const TimeSeries& x, const TimeSeries& y,
                            double width, double step) {
  if (width <= 0.0) throw DomainError("windows: width must be positive");
  if (step <= 0.0 || step > width)
    throw DomainError("windows: step must lie in (0, width]");
  const double t0 = std::min(x.times.front(), y.times.front());
  const double t1 = std::max(x.times.back(), y.times.back());
  std::vector<Window> out;
  for (double s = t0; s + width <= t1 + 1e-9 * std::max(1.0, std::abs(t1)); s += step) {
    Window w;
    w.start = s;
    w.end = s + width;
    // the half-open rule would orphan the very last observation
    const bool closes_span = w.end >= t1 - 1e-12;
    auto inside = [&](double t) {
      return t >= w.start && (t < w.end || (closes_span && t <= w.end));
    };
    for (std::size_t i = 0; i < x.size(); ++i)
      if (inside(x.times[i])) {
        w.x_times.push_back(x.times[i]);
        w.x_values.push_back(x.values[i]);
      }
    for (std::size_t i = 0; i < y.size(); ++i)
      if (inside(y.times[i])) {
        w.y_times.push_back(y.times[i]);
        w.y_values.push_back(y.values[i]);
      }
    w.insufficient = w.x_times.size() < 5 || w.y_times.size() < 5;
    out.push_back(std::move(w));
  }
  if (out.empty()) {
    // span shorter than the window: emit the single covering window
    Window w;
    w.start = t0;
    w.end = t0 + width;
    w.x_times = x.times;
    w.x_values = x.values;
    w.y_times = y.times;
    w.y_values = y.values;
    w.insufficient = w.x_times.size() < 5 || w.y_times.size() < 5;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace paleocorr

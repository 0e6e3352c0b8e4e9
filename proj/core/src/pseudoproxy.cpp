#include "paleocorr/pseudoproxy.hpp"

#include <algorithm>
#include <cmath>

#include "paleocorr/errors.hpp"

namespace paleocorr {

void PseudoproxyParams::validate() const {
  if (n_obs < 2) throw DomainError("pseudoproxy: n_obs must be >= 2");
  if (coupling < 0.0 || coupling > 1.0)
    throw DomainError("pseudoproxy: coupling must lie in [0, 1]");
  if (drag <= 0.0) throw DomainError("pseudoproxy: drag must be positive");
  if (sed_mean <= 0.0) throw DomainError("pseudoproxy: sed_mean must be positive");
  if (sed_skew <= 0.0) throw DomainError("pseudoproxy: sed_skew must be positive");
}

PseudoproxyParams PseudoproxyParams::draw_sweep(RngStream& rng, std::uint64_t seed) {
  PseudoproxyParams p;
  p.n_obs = static_cast<int>(std::floor(draw_uniform(rng, 25.0, 301.0)));
  p.n_obs = std::min(p.n_obs, 300);
  p.coupling = draw_uniform(rng, 0.1, 0.9);
  p.drag = draw_uniform(rng, 0.01, 0.9);
  p.sed_mean = draw_uniform(rng, 0.2, 0.5);
  p.sed_skew = draw_uniform(rng, 1.0, 2.0);
  p.seed = seed;
  return p;
}

std::vector<double> generate_ou(std::size_t n, double dt, double drag, RngStream& rng) {
  if (n < 1) throw DomainError("generate_ou: n must be >= 1");
  if (dt <= 0.0) throw DomainError("generate_ou: dt must be positive");
  if (drag <= 0.0) throw DomainError("generate_ou: drag must be positive");
  std::vector<double> x(n);
  x[0] = draw_normal(rng);  // stationary initialization, unit variance
  const double a = std::exp(-drag * dt);
  const double s = std::sqrt(1.0 - a * a);
  for (std::size_t i = 1; i < n; ++i) x[i] = a * x[i - 1] + s * draw_normal(rng);
  return x;
}

std::vector<double> couple(const std::vector<double>& x, double coupling,
                           double drag, double dt, RngStream& rng) {
  if (coupling < 0.0 || coupling > 1.0)
    throw DomainError("couple: coupling must lie in [0, 1]");
  const std::vector<double> eps = generate_ou(x.size(), dt, drag, rng);
  std::vector<double> y(x.size());
  const double w = std::sqrt(1.0 - coupling * coupling);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = coupling * x[i] + w * eps[i];
  return y;
}

LatentPair generate_latent_pair(std::size_t n, double coupling, double drag,
                                RngStream& rng) {
  LatentPair p;
  p.times.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.times[i] = static_cast<double>(i);
  p.x = generate_ou(n, 1.0, drag, rng);
  p.y = couple(p.x, coupling, drag, 1.0, rng);
  return p;
}

SedimentColumn deposit(const std::vector<double>& values,
                       const std::vector<double>& times, double sed_mean,
                       double sed_skew, RngStream& rng) {
  if (sed_mean <= 0.0) throw DomainError("deposit: sed_mean must be positive");
  if (sed_skew <= 0.0) throw DomainError("deposit: sed_skew must be positive");
  if (values.size() != times.size())
    throw DataError("deposit: values and times differ in length");
  const double shape = (2.0 / sed_skew) * (2.0 / sed_skew);
  const double scale = sed_mean / shape;
  SedimentColumn col;
  col.layer_top_depths.resize(values.size());
  double depth = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = 0.0;
    while (d <= 0.0) d = draw_gamma(rng, shape, scale);  // gamma can underflow to 0
    depth += d;
    col.layer_top_depths[i] = depth;
  }
  col.layer_times = times;
  col.assigned_values = values;
  return col;
}

SampledCore sample_core(const SedimentColumn& column, double sample_spacing) {
  if (sample_spacing <= 0.0)
    throw DomainError("sample_core: spacing must be positive");
  const double total = column.total_depth();
  if (sample_spacing >= total)
    throw DataError("sample_core: spacing exceeds total core depth (empty output)");
  SampledCore out;
  std::size_t layer = 0;
  std::size_t last_layer = static_cast<std::size_t>(-1);
  const std::size_t n_layers = column.layer_top_depths.size();
  for (std::size_t k = 0;; ++k) {
    const double probe = static_cast<double>(k) * sample_spacing;
    if (probe > total) break;
    while (layer < n_layers && column.layer_top_depths[layer] <= probe) ++layer;
    if (layer >= n_layers) break;
    if (layer == last_layer) continue;  // same layer: collapse duplicates
    last_layer = layer;
    out.depths.push_back(probe);
    out.times.push_back(column.layer_times[layer]);
    out.values.push_back(column.assigned_values[layer]);
  }
  return out;
}

}  // namespace paleocorr

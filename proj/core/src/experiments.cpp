#include "paleocorr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "paleocorr/errors.hpp"

namespace paleocorr {

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return std::string(buf);
}

std::uint64_t cell_seed(std::uint64_t seed, int pair_id, const AlignmentSpec& m,
                        Scenario s) {
  std::uint64_t h = mix64(seed ^ 0xce11ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(pair_id + 1));
  for (char c : m.name()) h = mix64(h ^ static_cast<unsigned char>(c));
  return mix64(h ^ static_cast<std::uint64_t>(static_cast<int>(s) + 17));
}

/// Dated horizons: observation indices evenly spread, both ends included.
std::vector<std::size_t> date_indices(std::size_t n_obs, int n_dates) {
  const int k = std::max(2, std::min<int>(n_dates, static_cast<int>(n_obs)));
  std::vector<std::size_t> idx;
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * (n_obs - 1) / (k - 1)));
    if (idx.empty() || j != idx.back()) idx.push_back(j);
  }
  return idx;
}

struct CoreChronology {
  std::vector<double> median_times;
  std::vector<std::vector<double>> member_times;
};

CoreChronology simulate_chronology(const SampledCore& core,
                                   const ChronologyConfig& cfg, int n_ens,
                                   RngStream& rng) {
  static const CalibrationCurve curve = toy_marine_curve();
  if (core.depths.size() < 2)
    throw DataError("chronology: core has fewer than 2 observations");
  const auto idx = date_indices(core.depths.size(), cfg.n_dates);
  if (idx.size() < 2) throw DataError("chronology: fewer than 2 dated horizons");
  std::vector<RadiocarbonDate> dates;
  dates.reserve(idx.size());
  for (std::size_t j : idx) {
    const double cal = cfg.age_offset + core.times[j] * cfg.years_per_unit;
    dates.push_back(forward_date(core.depths[j], cal, curve, cfg.meas_sigma, rng));
  }
  const int n_real = std::max(cfg.n_real_median, n_ens);
  EnsembleOptions opts;
  opts.grid_step = cfg.grid_step;
  const AgeEnsemble ens =
      build_age_ensemble(core.depths, dates, curve, n_real, rng, opts);

  CoreChronology out;
  out.median_times.reserve(core.depths.size());
  for (double a : ens.median_ages)
    out.median_times.push_back((a - cfg.age_offset) / cfg.years_per_unit);
  out.member_times.resize(n_ens);
  for (int r = 0; r < n_ens; ++r) {
    out.member_times[r].reserve(core.depths.size());
    for (double a : ens.realizations[r])
      out.member_times[r].push_back((a - cfg.age_offset) / cfg.years_per_unit);
  }
  return out;
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::equal: return "equal";
    case Scenario::unequal: return "unequal";
    case Scenario::agemodel_median: return "agemodel_median";
    default: return "agemodel_ensemble";
  }
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "equal") return Scenario::equal;
  if (s == "unequal") return Scenario::unequal;
  if (s == "agemodel_median") return Scenario::agemodel_median;
  if (s == "agemodel_ensemble") return Scenario::agemodel_ensemble;
  throw DataError("unknown scenario: " + s);
}

const char* to_string(GroupKey k) {
  switch (k) {
    case GroupKey::coupling: return "coupling";
    case GroupKey::length: return "length";
    case GroupKey::theta: return "theta";
    default: return "gacf";
  }
}

double scaled_bias(double mode, double c) {
  if (c == 0.0) throw DomainError("scaled_bias undefined at c = 0");
  return (mode - c) / c;
}

PairData make_pair_data(const PseudoproxyParams& params,
                        const ChronologyConfig& chron, int n_ens,
                        double core_spacing, std::uint64_t sweep_seed,
                        int pair_id) {
  params.validate();
  if (core_spacing <= 0.0) throw DomainError("core_spacing must be positive");
  PairData data;
  data.params = params;

  // Latent length such that the expected number of core observations stays
  // at n_obs: total depth ~ n_lat * mu_S, probes every core_spacing.
  const auto n_lat = static_cast<std::size_t>(std::max<double>(
      params.n_obs + 1,
      std::ceil(params.n_obs * core_spacing / params.sed_mean)));

  RngStream rng_latent = derive_stream(sweep_seed, pair_id, 1);
  const LatentPair latent =
      generate_latent_pair(n_lat, params.coupling, params.drag, rng_latent);

  RngStream rng_sed_x = derive_stream(sweep_seed, pair_id, 2);
  RngStream rng_sed_y = derive_stream(sweep_seed, pair_id, 3);
  const SedimentColumn col_x =
      deposit(latent.x, latent.times, params.sed_mean, params.sed_skew, rng_sed_x);
  SedimentColumn col_y =
      deposit(latent.y, latent.times, params.sed_mean, params.sed_skew, rng_sed_y);

  // equal sampling: both records share the x sedimentation history
  SedimentColumn col_shared_y = col_x;
  col_shared_y.assigned_values = latent.y;
  const SampledCore eq_x = sample_core(col_x, core_spacing);
  const SampledCore eq_y = sample_core(col_shared_y, core_spacing);
  data.equal_x = eq_x.series();
  data.equal_y = eq_y.series();

  const SampledCore core_x = eq_x;  // same column, same probes
  const SampledCore core_y = sample_core(col_y, core_spacing);
  data.unequal_x = core_x.series();
  data.unequal_y = core_y.series();

  try {
    RngStream rng_chron_x = derive_stream(sweep_seed, pair_id, 4);
    RngStream rng_chron_y = derive_stream(sweep_seed, pair_id, 5);
    const CoreChronology cx = simulate_chronology(core_x, chron, n_ens, rng_chron_x);
    const CoreChronology cy = simulate_chronology(core_y, chron, n_ens, rng_chron_y);
    data.median_x = TimeSeries(cx.median_times, core_x.values);
    data.median_y = TimeSeries(cy.median_times, core_y.values);
    data.ensemble_x.reserve(n_ens);
    data.ensemble_y.reserve(n_ens);
    for (int r = 0; r < n_ens; ++r) {
      data.ensemble_x.emplace_back(cx.member_times[r], core_x.values);
      data.ensemble_y.emplace_back(cy.member_times[r], core_y.values);
    }
  } catch (const Error& e) {
    data.chronology_failed = true;
    data.chronology_error = e.what();
  }
  return data;
}

RealizationResult evaluate_cell(const PairData& data, const AlignmentSpec& method,
                                const ScenarioSpec& scenario,
                                const InferenceConfig& inference, double alpha,
                                std::uint64_t seed, int pair_id) {
  RealizationResult res;
  res.pair_id = pair_id;
  res.params = data.params;
  res.method = method;
  res.scenario = scenario;
  res.gacf_x = std::numeric_limits<double>::quiet_NaN();
  res.mode = std::numeric_limits<double>::quiet_NaN();
  res.idr = std::numeric_limits<double>::quiet_NaN();

  auto skip = [&](const std::string& why) {
    res.skipped = true;
    res.skip_reason = why;
    return res;
  };

  const bool needs_chronology = scenario.kind == Scenario::agemodel_median ||
                                scenario.kind == Scenario::agemodel_ensemble;
  if (needs_chronology && data.chronology_failed)
    return skip("chronology: " + data.chronology_error);

  try {
    const TimeSeries* sx = nullptr;
    const TimeSeries* sy = nullptr;
    switch (scenario.kind) {
      case Scenario::equal: sx = &data.equal_x; sy = &data.equal_y; break;
      case Scenario::unequal: sx = &data.unequal_x; sy = &data.unequal_y; break;
      default: sx = &data.median_x; sy = &data.median_y; break;
    }
    const TimeSeries nx = normalize(*sx);
    try {
      res.gacf_x = gacf(nx);
    } catch (const Error&) {
      // persistence undefined on this sampling; leave NaN
    }

    PosteriorSample sample;
    if (scenario.kind == Scenario::agemodel_ensemble) {
      std::vector<PosteriorSample> members;
      double n_sum = 0.0;
      const int n_ens = static_cast<int>(data.ensemble_x.size());
      for (int r = 0; r < n_ens; ++r) {
        try {
          const TimeSeries ex = normalize(data.ensemble_x[r]);
          const TimeSeries ey = normalize(data.ensemble_y[r]);
          const AlignedPairs pairs = align(ex, ey, method);
          InferenceConfig c = inference;
          c.seed = mix64(seed ^ static_cast<std::uint64_t>(r + 1));
          members.push_back(metropolis(pairs, c));
          n_sum += static_cast<double>(pairs.effective_n());
        } catch (const DataError&) {
          // member without enough overlap; skip it, keep the rest
        }
      }
      if (members.empty()) return skip("alignment: no ensemble member aligned");
      sample = pool_ensemble(members);
      res.effective_n =
          static_cast<std::size_t>(std::llround(n_sum / members.size()));
    } else {
      const TimeSeries ny = normalize(*sy);
      const AlignedPairs pairs = align(nx, ny, method);
      InferenceConfig c = inference;
      c.seed = seed;
      sample = metropolis(pairs, c);
      res.effective_n = pairs.effective_n();
    }

    res.mode = posterior_mode(sample);
    res.idr = paleocorr::idr(sample);
    res.sign = sign_decision(sample, alpha);
    double pos = 0.0;
    for (double v : sample.rho_draws)
      if (v > 0.0) pos += 1.0;
    res.pos_fraction = pos / static_cast<double>(sample.rho_draws.size());
  } catch (const Error& e) {
    return skip(e.what());
  }
  return res;
}

RealizationResult run_realization(const PseudoproxyParams& params,
                                  const AlignmentSpec& method,
                                  const ScenarioSpec& scenario,
                                  const SweepConfig& cfg, int pair_id) {
  const PairData data = make_pair_data(params, cfg.chronology, scenario.n_ens,
                                       cfg.core_spacing, cfg.seed, pair_id);
  return evaluate_cell(data, method, scenario, cfg.inference, cfg.alpha,
                       cell_seed(cfg.seed, pair_id, method, scenario.kind),
                       pair_id);
}

int ResultStore::skipped_count() const {
  int n = 0;
  for (const auto& r : rows) n += r.skipped ? 1 : 0;
  return n;
}

const char* ResultStore::csv_header() {
  return "pair_id,method,scale,scenario,c,n_obs,theta,mu_s,gamma_s,gacf,mode,"
         "idr,sign,effective_n,skipped";
}

std::string ResultStore::csv_row(const RealizationResult& r) {
  std::string s;
  s += std::to_string(r.pair_id);
  s += ',';
  s += r.method.name();
  s += ',';
  s += fmt_num(r.method.scale);
  s += ',';
  s += to_string(r.scenario.kind);
  s += ',';
  s += fmt_num(r.params.coupling);
  s += ',';
  s += std::to_string(r.params.n_obs);
  s += ',';
  s += fmt_num(r.params.drag);
  s += ',';
  s += fmt_num(r.params.sed_mean);
  s += ',';
  s += fmt_num(r.params.sed_skew);
  s += ',';
  s += fmt_num(r.gacf_x);
  s += ',';
  s += fmt_num(r.mode);
  s += ',';
  s += fmt_num(r.idr);
  s += ',';
  s += to_string(r.sign);
  s += ',';
  s += std::to_string(r.effective_n);
  s += ',';
  s += r.skipped ? '1' : '0';
  return s;
}

void ResultStore::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

ResultStore run_suite(const SweepConfig& cfg, const PairCallback& on_pair) {
  if (cfg.n_pairs < 1) throw DomainError("run_suite: n_pairs must be >= 1");
  std::vector<ScenarioSpec> scenarios = cfg.scenarios;
  if (scenarios.empty())
    scenarios = {{Scenario::equal}, {Scenario::unequal},
                 {Scenario::agemodel_median}, {Scenario::agemodel_ensemble}};
  int max_ens = 1;
  for (const auto& s : scenarios) max_ens = std::max(max_ens, s.n_ens);

  auto run_pair = [&](int pair_id) {
    RngStream prng = derive_stream(cfg.seed, pair_id, 0);
    PseudoproxyParams params = PseudoproxyParams::draw_sweep(prng, cfg.seed);
    if (cfg.coupling_override) params.coupling = *cfg.coupling_override;
    std::vector<RealizationResult> out;
    out.reserve(cfg.methods.size() * scenarios.size());
    try {
      const PairData data = make_pair_data(params, cfg.chronology, max_ens,
                                           cfg.core_spacing, cfg.seed, pair_id);
      for (const auto& m : cfg.methods)
        for (const auto& sc : scenarios)
          out.push_back(evaluate_cell(data, m, sc, cfg.inference, cfg.alpha,
                                      cell_seed(cfg.seed, pair_id, m, sc.kind),
                                      pair_id));
    } catch (const Error& e) {
      for (const auto& m : cfg.methods)
        for (const auto& sc : scenarios) {
          RealizationResult r;
          r.pair_id = pair_id;
          r.params = params;
          r.method = m;
          r.scenario = sc;
          r.mode = r.idr = r.gacf_x = std::numeric_limits<double>::quiet_NaN();
          r.skipped = true;
          r.skip_reason = e.what();
          out.push_back(std::move(r));
        }
    }
    return out;
  };

  ResultStore store;
  if (cfg.workers <= 1) {
    for (int i = 0; i < cfg.n_pairs; ++i) {
      auto rows = run_pair(i);
      if (on_pair) on_pair(i, rows);
      for (auto& r : rows) store.rows.push_back(std::move(r));
    }
    return store;
  }

  std::vector<std::vector<RealizationResult>> slots(cfg.n_pairs);
  std::vector<char> done(cfg.n_pairs, 0);
  std::atomic<int> next{0};
  std::mutex mu;
  std::condition_variable cv;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.n_pairs) return;
      auto rows = run_pair(i);
      {
        std::lock_guard<std::mutex> lk(mu);
        slots[i] = std::move(rows);
        done[i] = 1;
      }
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min(cfg.workers, cfg.n_pairs);
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (int i = 0; i < cfg.n_pairs; ++i) {
    std::unique_lock<std::mutex> lk(mu);
    cv.wait(lk, [&] { return done[i] == 1; });
    auto rows = std::move(slots[i]);
    lk.unlock();
    if (on_pair) on_pair(i, rows);
    for (auto& r : rows) store.rows.push_back(std::move(r));
  }
  for (auto& t : pool) t.join();
  return store;
}

namespace {

double param_value(const RealizationResult& r, GroupKey key) {
  switch (key) {
    case GroupKey::coupling: return r.params.coupling;
    case GroupKey::length: return static_cast<double>(r.params.n_obs);
    case GroupKey::theta: return r.params.drag;
    default: return r.gacf_x;
  }
}

double median_of(std::vector<double> v) {
  return quantile(std::move(v), 0.5);
}

}  // namespace

double rmse(const std::vector<const RealizationResult*>& rows) {
  if (rows.empty()) throw DataError("rmse: empty group");
  double ss = 0.0;
  for (const auto* r : rows) {
    const double e = r->mode - r->params.coupling;
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(rows.size()));
}

SignFractions sign_fractions(const std::vector<const RealizationResult*>& rows) {
  SignFractions f;
  f.n = static_cast<int>(rows.size());
  if (rows.empty()) return f;
  for (const auto* r : rows) {
    switch (r->sign) {
      case SignDecision::positive: f.correct += 1.0; break;
      case SignDecision::negative: f.wrong += 1.0; break;
      default: f.indifferent += 1.0; break;
    }
  }
  f.correct /= f.n;
  f.wrong /= f.n;
  f.indifferent /= f.n;
  return f;
}

std::vector<GroupMetrics> decile_metrics(const ResultStore& store, GroupKey key) {
  struct Range { double lo, hi; };
  const Range full = key == GroupKey::coupling ? Range{0.1, 0.9}
                     : key == GroupKey::length ? Range{25.0, 300.0}
                     : key == GroupKey::theta  ? Range{0.01, 0.9}
                                               : Range{0.0, 0.0};

  std::vector<std::pair<std::string, std::string>> cells;  // method, scenario
  for (const auto& r : store.rows) {
    const auto c = std::make_pair(r.method.name(),
                                  std::string(to_string(r.scenario.kind)));
    if (std::find(cells.begin(), cells.end(), c) == cells.end())
      cells.push_back(c);
  }

  std::vector<GroupMetrics> out;
  for (const auto& [meth, scen] : cells) {
    std::vector<const RealizationResult*> subset;
    for (const auto& r : store.rows)
      if (!r.skipped && r.method.name() == meth &&
          to_string(r.scenario.kind) == scen && r.params.coupling > 0.0)
        subset.push_back(&r);
    if (subset.empty()) continue;

    Range range = full;
    if (key == GroupKey::gacf) {
      std::vector<double> vals;
      for (const auto* r : subset)
        if (std::isfinite(r->gacf_x)) vals.push_back(r->gacf_x);
      if (vals.size() < 10) continue;
      std::sort(vals.begin(), vals.end());
      range = {vals.front(), vals.back()};
    }
    const double width = range.hi - range.lo;
    const struct { const char* name; double lo, hi; } bins[] = {
        {"low", range.lo, range.lo + 0.1 * width},
        {"mid", range.lo + 0.45 * width, range.lo + 0.55 * width},
        {"high", range.hi - 0.1 * width, range.hi},
    };
    for (const auto& b : bins) {
      std::vector<const RealizationResult*> grp;
      for (const auto* r : subset) {
        const double v = param_value(*r, key);
        if (std::isfinite(v) && v >= b.lo && v <= b.hi) grp.push_back(r);
      }
      if (grp.empty()) continue;
      GroupMetrics m;
      m.method = meth;
      m.scenario = scen;
      m.key = to_string(key);
      m.bin = b.name;
      std::vector<double> sbias, sidr;
      for (const auto* r : grp) {
        sbias.push_back(scaled_bias(r->mode, r->params.coupling));
        sidr.push_back(r->idr / r->params.coupling);
      }
      m.median_scaled_bias = median_of(sbias);
      m.bias_q25 = quantile(sbias, 0.25);
      m.bias_q75 = quantile(sbias, 0.75);
      m.median_scaled_idr = median_of(sidr);
      m.rmse = rmse(grp);
      const SignFractions f = sign_fractions(grp);
      m.frac_correct = f.correct;
      m.frac_wrong = f.wrong;
      m.frac_indifferent = f.indifferent;
      m.n = static_cast<int>(grp.size());
      out.push_back(std::move(m));
    }
  }
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<GroupMetrics>& rows) {
  out << "method,scenario,key,bin,median_scaled_bias,bias_q25,bias_q75,"
         "median_scaled_idr,rmse,frac_correct,frac_wrong,frac_indifferent,n\n";
  for (const auto& m : rows) {
    out << m.method << ',' << m.scenario << ',' << m.key << ',' << m.bin << ','
        << fmt_num(m.median_scaled_bias) << ',' << fmt_num(m.bias_q25) << ','
        << fmt_num(m.bias_q75) << ',' << fmt_num(m.median_scaled_idr) << ','
        << fmt_num(m.rmse) << ',' << fmt_num(m.frac_correct) << ','
        << fmt_num(m.frac_wrong) << ',' << fmt_num(m.frac_indifferent) << ','
        << m.n << '\n';
  }
}

RocCurve roc_curve(const std::vector<double>& positive_scores,
                   const std::vector<double>& negative_scores,
                   const std::vector<double>& thresholds) {
  if (positive_scores.empty() || negative_scores.empty())
    throw DataError("roc_curve: both classes must be nonempty");
  RocCurve curve;
  for (double thr : thresholds) {
    double tp = 0.0, fp = 0.0;
    for (double s : positive_scores) tp += s >= thr ? 1.0 : 0.0;
    for (double s : negative_scores) fp += s >= thr ? 1.0 : 0.0;
    curve.points.push_back({thr, fp / negative_scores.size(),
                            tp / positive_scores.size()});
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const RocPoint& a, const RocPoint& b) {
              return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr);
            });
  double auc = 0.0, px = 0.0, py = 0.0;
  for (const auto& p : curve.points) {
    auc += (p.fpr - px) * 0.5 * (p.tpr + py);
    px = p.fpr;
    py = p.tpr;
  }
  auc += (1.0 - px) * 0.5 * (1.0 + py);
  curve.auc = auc;
  return curve;
}

RocCurve roc_curve(const std::vector<double>& positive_scores,
                   const std::vector<double>& negative_scores) {
  std::vector<double> thr = positive_scores;
  thr.insert(thr.end(), negative_scores.begin(), negative_scores.end());
  thr.push_back(0.0);
  thr.push_back(std::numeric_limits<double>::infinity());
  std::sort(thr.begin(), thr.end());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
  return roc_curve(positive_scores, negative_scores, thr);
}

}  // namespace paleocorr

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "paleocorr/alignment.hpp"
#include "paleocorr/bayes.hpp"
#include "paleocorr/chronology.hpp"
#include "paleocorr/errors.hpp"
#include "paleocorr/experiments.hpp"
#include "paleocorr/pseudoproxy.hpp"
#include "paleocorr/rng.hpp"
#include "record.hpp"

namespace fs = std::filesystem;
using namespace paleocorr;
using cli::RunConfig;

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return std::string(buf);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path.string());
  return f;
}

fs::path prepare_outdir(const RunConfig& cfg) {
  const fs::path out(cfg.get("out"));
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw DataError("cannot create output directory " + out.string());
  open_out(out / "config.resolved") << cfg.resolved();
  return out;
}

CalibrationCurve curve_from_config(const RunConfig& cfg) {
  const std::string& c = cfg.get("curve");
  if (c == "toy") return toy_marine_curve();
  std::ifstream in(c);
  if (!in) throw DataError("calibration curve: cannot open " + c);
  return load_calibration_curve(in);
}

InferenceConfig inference_from_config(const RunConfig& cfg) {
  InferenceConfig inf;
  inf.n_steps = cfg.get_int("inference.n_steps");
  inf.burn_fraction = cfg.get_double("inference.burn_fraction");
  inf.n_keep = cfg.get_int("inference.n_keep");
  inf.adapt = cfg.get_bool("inference.adapt");
  inf.seed = cfg.get_u64("seed");
  inf.validate();
  return inf;
}

ChronologyConfig chronology_from_config(const RunConfig& cfg) {
  ChronologyConfig ch;
  ch.n_dates = cfg.get_int("chronology.n_dates");
  ch.meas_sigma = cfg.get_double("chronology.meas_sigma");
  ch.grid_step = cfg.get_double("chronology.grid_step");
  ch.years_per_unit = cfg.get_double("chronology.years_per_unit");
  ch.age_offset = cfg.get_double("chronology.age_offset");
  ch.n_real_median = cfg.get_int("chronology.n_real_median");
  return ch;
}

/// normalize, then optional kernel high-pass per the detrend_cutoff key
TimeSeries prepare(const TimeSeries& ts, const RunConfig& cfg) {
  TimeSeries out = normalize(ts);
  const double cutoff = cfg.get_double("detrend_cutoff");
  if (cutoff > 0.0) out = highpass(out, cutoff);
  return out;
}

std::vector<RadiocarbonDate> load_dates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("dates: cannot open " + path);
  std::vector<RadiocarbonDate> dates;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // depth,c14_age,sigma
      continue;
    }
    RadiocarbonDate d;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &d.depth, &d.measured_c14,
                    &d.meas_sigma) != 3)
      throw DataError("dates: " + path + ":" + std::to_string(lineno) +
                      ": expected depth,c14_age,sigma");
    dates.push_back(d);
  }
  if (dates.size() < 2) throw DataError("dates: " + path + ": need at least 2 rows");
  return dates;
}

std::vector<std::size_t> spread_indices(std::size_t n, int k) {
  k = std::max(2, std::min<int>(k, static_cast<int>(n)));
  std::vector<std::size_t> idx;
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * (n - 1) / (k - 1)));
    if (idx.empty() || j != idx.back()) idx.push_back(j);
  }
  return idx;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg) {
  const fs::path out = prepare_outdir(cfg);
  PseudoproxyParams params;
  params.n_obs = cfg.get_int("simulate.n_obs");
  params.coupling = cfg.get_double("simulate.coupling");
  params.drag = cfg.get_double("simulate.theta");
  params.sed_mean = cfg.get_double("simulate.mu_s");
  params.sed_skew = cfg.get_double("simulate.gamma_s");
  params.seed = cfg.get_u64("seed");
  params.validate();
  const double spacing = cfg.get_double("simulate.core_spacing");
  if (spacing <= 0.0) throw DomainError("simulate.core_spacing must be positive");
  const int n_ens = cfg.get_int("simulate.n_ens");
  const ChronologyConfig chron = chronology_from_config(cfg);
  const CalibrationCurve curve = curve_from_config(cfg);
  const std::uint64_t seed = params.seed;

  const auto n_lat = static_cast<std::size_t>(std::max<double>(
      params.n_obs + 1, std::ceil(params.n_obs * spacing / params.sed_mean)));
  RngStream rng_latent = derive_stream(seed, 0, 1);
  const LatentPair latent =
      generate_latent_pair(n_lat, params.coupling, params.drag, rng_latent);
  RngStream rng_sx = derive_stream(seed, 0, 2);
  RngStream rng_sy = derive_stream(seed, 0, 3);
  const SedimentColumn col_x =
      deposit(latent.x, latent.times, params.sed_mean, params.sed_skew, rng_sx);
  const SedimentColumn col_y =
      deposit(latent.y, latent.times, params.sed_mean, params.sed_skew, rng_sy);
  const SampledCore core_x = sample_core(col_x, spacing);
  const SampledCore core_y = sample_core(col_y, spacing);

  const auto to_age = [&](double t) {
    return chron.age_offset + t * chron.years_per_unit;
  };
  auto write_true = [&](const char* name, const std::vector<double>& vals) {
    cli::RecordFile rec;
    rec.metadata["name"] = std::string("true_") + name;
    rec.metadata["units"] = "normalized";
    for (double t : latent.times) rec.age.push_back(to_age(t));
    rec.value = vals;
    cli::save_record((out / (std::string("true_") + name + ".csv")).string(), rec);
  };
  write_true("x", latent.x);
  write_true("y", latent.y);

  auto write_core = [&](const char* name, const SampledCore& core) {
    cli::RecordFile rec;
    rec.metadata["name"] = std::string("core_") + name;
    rec.metadata["units"] = "normalized";
    rec.depth = core.depths;
    for (double t : core.times) rec.age.push_back(to_age(t));
    rec.value = core.values;
    cli::save_record((out / (std::string("core_") + name + ".csv")).string(), rec);
  };
  write_core("x", core_x);
  write_core("y", core_y);

  auto write_chronology = [&](const char* name, const SampledCore& core,
                              RngStream rng) {
    const auto idx = spread_indices(core.depths.size(), chron.n_dates);
    std::vector<RadiocarbonDate> dates;
    for (std::size_t j : idx)
      dates.push_back(forward_date(core.depths[j], to_age(core.times[j]), curve,
                                   chron.meas_sigma, rng));
    auto df = open_out(out / (std::string("dates_") + name + ".csv"));
    df << "depth,c14_age,sigma\n";
    for (const auto& d : dates)
      df << fmt_num(d.depth) << ',' << fmt_num(d.measured_c14) << ','
         << fmt_num(d.meas_sigma) << "\n";
    EnsembleOptions opts;
    opts.grid_step = chron.grid_step;
    const int n_real = std::max(chron.n_real_median, n_ens);
    const AgeEnsemble ens =
        build_age_ensemble(core.depths, dates, curve, n_real, rng, opts);
    auto ef = open_out(out / (std::string("ensemble_") + name + ".csv"));
    ef << "depth,median";
    for (int r = 0; r < n_ens; ++r) ef << ",r" << r;
    ef << "\n";
    for (std::size_t i = 0; i < ens.depths.size(); ++i) {
      ef << fmt_num(ens.depths[i]) << ',' << fmt_num(ens.median_ages[i]);
      for (int r = 0; r < n_ens; ++r) ef << ',' << fmt_num(ens.realizations[r][i]);
      ef << "\n";
    }
  };
  write_chronology("x", core_x, derive_stream(seed, 0, 4));
  write_chronology("y", core_y, derive_stream(seed, 0, 5));

  std::cout << "simulate: wrote pseudoproxy pair to " << out.string() << "\n";
  return 0;
}

int cmd_calibrate(const RunConfig& cfg, double c14, double sigma) {
  if (sigma <= 0.0) throw DomainError("calibrate: sigma must be positive");
  const fs::path out = prepare_outdir(cfg);
  const CalibrationCurve curve = curve_from_config(cfg);
  RadiocarbonDate date;
  date.measured_c14 = c14;
  date.meas_sigma = sigma;
  const CalibratedDistribution dist =
      calibrate_date(date, curve, cfg.get_double("calibrate.grid_step"));

  auto df = open_out(out / "calibrated.csv");
  df << "cal_age,weight\n";
  for (std::size_t i = 0; i < dist.ages.size(); ++i)
    df << fmt_num(dist.ages[i]) << ',' << fmt_num(dist.weights[i]) << "\n";

  std::string summary;
  summary += "mode = " + fmt_num(dist.mode()) + "\n";
  summary += "q05 = " + fmt_num(dist.quantile(0.05)) + "\n";
  summary += "q50 = " + fmt_num(dist.quantile(0.50)) + "\n";
  summary += "q95 = " + fmt_num(dist.quantile(0.95)) + "\n";
  open_out(out / "calibrate_summary.txt") << summary;
  std::cout << summary;
  return 0;
}

int cmd_correlate(const RunConfig& cfg, const std::string& path_a,
                  const std::string& path_b) {
  const fs::path out = prepare_outdir(cfg);
  const cli::RecordFile rec_a = cli::load_record(path_a);
  const cli::RecordFile rec_b = cli::load_record(path_b);
  const AlignmentSpec spec = AlignmentSpec::parse(cfg.get("alignment.method"));
  const InferenceConfig inf = inference_from_config(cfg);
  const int n_ens = cfg.get_int("correlate.ensemble");

  PosteriorSample sample;
  std::size_t effective_n = 0;
  if (n_ens > 0) {
    if (!rec_a.has_depth() || !rec_b.has_depth())
      throw DataError("correlate: ensemble mode needs depth columns");
    if (cfg.get("correlate.dates_a").empty() || cfg.get("correlate.dates_b").empty())
      throw DomainError("correlate: ensemble mode needs correlate.dates_a/dates_b");
    const CalibrationCurve curve = curve_from_config(cfg);
    EnsembleOptions opts;
    opts.grid_step = cfg.get_double("chronology.grid_step");
    RngStream rng_a = derive_stream(inf.seed, 11, 1);
    RngStream rng_b = derive_stream(inf.seed, 11, 2);
    const AgeEnsemble ens_a =
        build_age_ensemble(rec_a.depth, load_dates(cfg.get("correlate.dates_a")),
                           curve, n_ens, rng_a, opts);
    const AgeEnsemble ens_b =
        build_age_ensemble(rec_b.depth, load_dates(cfg.get("correlate.dates_b")),
                           curve, n_ens, rng_b, opts);
    std::vector<PosteriorSample> members;
    double n_sum = 0.0;
    for (int r = 0; r < n_ens; ++r) {
      const TimeSeries ta =
          prepare(TimeSeries(ens_a.realizations[r], rec_a.value), cfg);
      const TimeSeries tb =
          prepare(TimeSeries(ens_b.realizations[r], rec_b.value), cfg);
      const AlignedPairs pairs = align(ta, tb, spec);
      InferenceConfig c = inf;
      c.seed = mix64(inf.seed ^ mix64(r + 1));
      members.push_back(metropolis(pairs, c));
      n_sum += static_cast<double>(pairs.effective_n());
    }
    sample = pool_ensemble(members);
    effective_n = static_cast<std::size_t>(std::llround(n_sum / n_ens));
  } else {
    const TimeSeries ta = prepare(rec_a.series(), cfg);
    const TimeSeries tb = prepare(rec_b.series(), cfg);
    const AlignedPairs pairs = align(ta, tb, spec);
    sample = metropolis(pairs, inf);
    effective_n = pairs.effective_n();
  }

  const double mode = posterior_mode(sample);
  const double spread = idr(sample);
  const SignDecision sign = sign_decision(sample, cfg.get_double("alpha"));

  std::string summary;
  summary += "method = " + spec.name() + "\n";
  summary += "mode = " + fmt_num(mode) + "\n";
  summary += "idr = " + fmt_num(spread) + "\n";
  summary += std::string("sign = ") + to_string(sign) + "\n";
  summary += "effective_n = " + std::to_string(effective_n) + "\n";
  summary += "n_draws = " + std::to_string(sample.rho_draws.size()) + "\n";
  summary += "pooled_from = " + std::to_string(std::max(sample.pooled_from, 1)) + "\n";
  summary += "acceptance_rate = " + fmt_num(sample.acceptance_rate) + "\n";
  open_out(out / "correlate_summary.txt") << summary;
  auto df = open_out(out / "draws.csv");
  df << "rho\n";
  for (double v : sample.rho_draws) df << fmt_num(v) << "\n";
  std::cout << summary;
  return 0;
}

int cmd_windows(const RunConfig& cfg, const std::string& path_a,
                const std::string& path_b) {
  const fs::path out = prepare_outdir(cfg);
  const AlignmentSpec spec = AlignmentSpec::parse(cfg.get("alignment.method"));
  const InferenceConfig inf = inference_from_config(cfg);
  TimeSeries ta = prepare(cli::load_record(path_a).series(), cfg);
  TimeSeries tb = prepare(cli::load_record(path_b).series(), cfg);

  if (cfg.get_bool("windows.lag_scan")) {
    const double lo = cfg.get_double("windows.lag_min");
    const double hi = cfg.get_double("windows.lag_max");
    const double step = cfg.get_double("windows.lag_step");
    if (step <= 0.0 || hi < lo) throw DomainError("windows: bad lag grid");
    std::vector<double> lags;
    for (double l = lo; l <= hi + 1e-9; l += step) lags.push_back(l);
    InferenceConfig c = inf;
    c.seed = mix64(inf.seed ^ 0x1a65ULL);
    const LagScanResult scan = lag_scan(ta, tb, lags, spec, c);
    auto lf = open_out(out / "lag_scan.csv");
    lf << "lag,mode,q5,q95,n_pairs,valid\n";
    for (const auto& e : scan.entries)
      lf << fmt_num(e.lag) << ',' << fmt_num(e.mode) << ',' << fmt_num(e.q5) << ','
         << fmt_num(e.q95) << ',' << e.n_pairs << ',' << (e.valid ? 1 : 0) << "\n";
    std::cout << "best_lag = " << fmt_num(scan.best_lag) << "\n";
    std::vector<double> shifted = tb.times;
    for (double& t : shifted) t += scan.best_lag;
    tb = TimeSeries(shifted, tb.values);
  }

  const auto wins =
      windows(ta, tb, cfg.get_double("windows.width"), cfg.get_double("windows.step"));
  const double alpha = cfg.get_double("alpha");
  auto wf = open_out(out / "windows.csv");
  wf << "start,end,mode,q5,q95,sign,n_a,n_b,flag\n";
  int widx = 0;
  for (const auto& w : wins) {
    std::string flag;
    double mode = std::nan(""), q5 = std::nan(""), q95 = std::nan("");
    std::string sign = "indifferent";
    if (w.insufficient) {
      flag = "insufficient";
    } else {
      try {
        const AlignedPairs pairs = align(TimeSeries(w.x_times, w.x_values),
                                         TimeSeries(w.y_times, w.y_values), spec);
        InferenceConfig c = inf;
        c.seed = mix64(inf.seed ^ mix64(widx + 101));
        const PosteriorSample s = metropolis(pairs, c);
        mode = posterior_mode(s);
        q5 = quantile(s.rho_draws, 0.05);
        q95 = quantile(s.rho_draws, 0.95);
        sign = to_string(sign_decision(s, alpha));
      } catch (const Error& e) {
        flag = e.what();
        std::replace(flag.begin(), flag.end(), ',', ';');
      }
    }
    wf << fmt_num(w.start) << ',' << fmt_num(w.end) << ',' << fmt_num(mode) << ','
       << fmt_num(q5) << ',' << fmt_num(q95) << ',' << sign << ','
       << w.x_times.size() << ',' << w.y_times.size() << ',' << flag << "\n";
    ++widx;
  }
  std::cout << "windows: wrote " << wins.size() << " rows to "
            << (out / "windows.csv").string() << "\n";
  return 0;
}

int cmd_experiment(const RunConfig& cfg) {
  const fs::path out = prepare_outdir(cfg);
  SweepConfig sc;
  sc.n_pairs = cfg.get_int("experiment.n_pairs");
  sc.methods.clear();
  for (const auto& m : cli::split_list(cfg.get("experiment.methods")))
    sc.methods.push_back(AlignmentSpec::parse(m));
  if (sc.methods.empty()) throw DomainError("experiment: no methods configured");
  sc.scenarios.clear();
  for (const auto& s : cli::split_list(cfg.get("experiment.scenarios")))
    sc.scenarios.push_back({scenario_from_string(s), cfg.get_int("experiment.n_ens")});
  if (sc.scenarios.empty()) throw DomainError("experiment: no scenarios configured");
  sc.seed = cfg.get_u64("seed");
  sc.core_spacing = cfg.get_double("experiment.core_spacing");
  const std::string& ov = cfg.get("experiment.coupling_override");
  if (ov != "none") sc.coupling_override = std::stod(ov);
  sc.alpha = cfg.get_double("alpha");
  sc.chronology = chronology_from_config(cfg);
  sc.inference = inference_from_config(cfg);
  sc.workers = cfg.get_int("workers");

  auto rf = open_out(out / "results.csv");
  rf << ResultStore::csv_header() << "\n";
  const ResultStore store =
      run_suite(sc, [&](int pair_id, const std::vector<RealizationResult>& rows) {
        for (const auto& r : rows) rf << ResultStore::csv_row(r) << "\n";
        rf.flush();
        if ((pair_id + 1) % 10 == 0 || pair_id + 1 == sc.n_pairs)
          std::cerr << "pair " << (pair_id + 1) << "/" << sc.n_pairs << "\n";
      });

  if (cfg.get_bool("experiment.metrics")) {
    std::vector<GroupMetrics> all;
    for (GroupKey key : {GroupKey::coupling, GroupKey::length, GroupKey::theta,
                         GroupKey::gacf}) {
      const auto part = decile_metrics(store, key);
      all.insert(all.end(), part.begin(), part.end());
    }
    auto mf = open_out(out / "metrics.csv");
    write_metrics_csv(mf, all);
  }

  if (cfg.get_bool("experiment.roc")) {
    SweepConfig neg = sc;
    neg.coupling_override = 0.0;
    const ResultStore store_neg = run_suite(neg);
    auto rocf = open_out(out / "roc.csv");
    auto aucf = open_out(out / "auc.csv");
    rocf << "method,scenario,threshold,fpr,tpr\n";
    aucf << "method,scenario,auc\n";
    for (const auto& m : sc.methods)
      for (const auto& s : sc.scenarios) {
        std::vector<double> pos, negs;
        auto collect = [&](const ResultStore& st, std::vector<double>& dst) {
          for (const auto& r : st.rows)
            if (!r.skipped && r.method.name() == m.name() &&
                r.scenario.kind == s.kind)
              dst.push_back(r.pos_fraction);
        };
        collect(store, pos);
        collect(store_neg, negs);
        if (pos.empty() || negs.empty()) continue;
        const RocCurve curve = roc_curve(pos, negs);
        for (const auto& p : curve.points)
          rocf << m.name() << ',' << to_string(s.kind) << ','
               << fmt_num(p.threshold) << ',' << fmt_num(p.fpr) << ','
               << fmt_num(p.tpr) << "\n";
        aucf << m.name() << ',' << to_string(s.kind) << ',' << fmt_num(curve.auc)
             << "\n";
      }
  }

  std::cout << "experiment: " << store.rows.size() << " rows ("
            << store.skipped_count() << " skipped) in "
            << (out / "results.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior correlation of irregularly sampled, age-uncertain "
               "time series; pseudoproxy benchmark tools"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::string seed_str;
  int workers = 0;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--seed", seed_str, "Random seed (overrides config)");
  app.add_option("--out", out_dir, "Output directory (overrides config)");
  app.add_option("--workers", workers, "Worker thread count (overrides config)");

  auto* sim = app.add_subcommand("simulate", "Generate one pseudoproxy pair");
  double cal_c14 = 0.0, cal_sigma = 0.0;
  auto* cal = app.add_subcommand("calibrate", "Calibrate a radiocarbon date");
  cal->add_option("c14_age", cal_c14, "Radiocarbon age, years")->required();
  cal->add_option("sigma", cal_sigma, "Measurement error, years")->required();
  std::string rec_a, rec_b;
  auto* cor = app.add_subcommand("correlate", "Correlation posterior of two records");
  cor->add_option("record_a", rec_a, "First record file")->required();
  cor->add_option("record_b", rec_b, "Second record file")->required();
  auto* win = app.add_subcommand("windows", "Sliding-window correlation");
  win->add_option("record_a", rec_a, "First record file")->required();
  win->add_option("record_b", rec_b, "Second record file")->required();
  auto* exp = app.add_subcommand("experiment", "Pseudoproxy benchmark sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    cfg.apply_env();
    if (!seed_str.empty()) cfg.set("seed", seed_str);
    if (!out_dir.empty()) cfg.set("out", out_dir);
    if (workers > 0) cfg.set("workers", std::to_string(workers));

    if (sim->parsed()) return cmd_simulate(cfg);
    if (cal->parsed()) return cmd_calibrate(cfg, cal_c14, cal_sigma);
    if (cor->parsed()) return cmd_correlate(cfg, rec_a, rec_b);
    if (win->parsed()) return cmd_windows(cfg, rec_a, rec_b);
    if (exp->parsed()) return cmd_experiment(cfg);
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paleocorr/alignment.hpp"
#include "paleocorr/bayes.hpp"
#include "paleocorr/chronology.hpp"
#include "paleocorr/pseudoproxy.hpp"

namespace paleocorr {

/// The four uncertainty scenarios of the pseudoproxy benchmark.
enum class Scenario { equal, unequal, agemodel_median, agemodel_ensemble };

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ScenarioSpec {
  Scenario kind = Scenario::equal;
  int n_ens = 10;  ///< age-model realizations, ensemble scenario only
};

/// Radiocarbon-dating setup for the synthetic cores. Latent time units are
/// mapped onto calendar years so the toy calibration curve applies.
struct ChronologyConfig {
  int n_dates = 16;             ///< dated horizons per core, ends included
  double meas_sigma = 50.0;     ///< measurement error, years
  double grid_step = 5.0;       ///< calibration grid, years
  double years_per_unit = 75.0; ///< latent time unit -> calendar years
  double age_offset = 500.0;    ///< calendar age of latent time zero
  int n_real_median = 50;       ///< realizations behind the median model
};

/// Outcome of one (pair, method, scenario) cell.
struct RealizationResult {
  int pair_id = 0;
  PseudoproxyParams params;
  AlignmentSpec method;
  ScenarioSpec scenario;
  double mode = 0.0;
  double idr = 0.0;
  SignDecision sign = SignDecision::indifferent;
  double pos_fraction = 0.0;  ///< fraction of posterior draws above zero
  double gacf_x = 0.0;
  std::size_t effective_n = 0;
  bool skipped = false;
  std::string skip_reason;
};

/// (mode - c) / c; throws DomainError at c = 0 where the scaling is undefined.
double scaled_bias(double mode, double c);

/// Per-scenario observation series for one pseudoproxy pair. All scenarios
/// share the same latent signals and sediment columns.
struct PairData {
  PseudoproxyParams params;
  TimeSeries equal_x, equal_y;
  TimeSeries unequal_x, unequal_y;
  TimeSeries median_x, median_y;
  std::vector<TimeSeries> ensemble_x, ensemble_y;
  bool chronology_failed = false;
  std::string chronology_error;
};

struct SweepConfig {
  int n_pairs = 200;
  std::vector<AlignmentSpec> methods = AlignmentSpec::default_set();
  std::vector<ScenarioSpec> scenarios;
  std::uint64_t seed = 0;
  /// Regular core sampling interval in depth units. The latent series length
  /// is chosen as ceil(n_obs * core_spacing / sed_mean) so the expected
  /// record length stays at n_obs.
  double core_spacing = 1.0;
  /// Forces the coupling of every drawn parameter vector; used to generate
  /// the uncorrelated class for ROC analysis.
  std::optional<double> coupling_override;
  double alpha = 0.05;
  ChronologyConfig chronology;
  InferenceConfig inference;
  int workers = 1;
};

/// Builds all scenario series for one parameter vector. Deterministic given
/// (sweep seed, pair id).
PairData make_pair_data(const PseudoproxyParams& params,
                        const ChronologyConfig& chron, int n_ens,
                        double core_spacing, std::uint64_t sweep_seed,
                        int pair_id);

/// Runs one cell: normalize, align, infer, summarize. Alignment or
/// chronology failures become skipped records, never silent drops.
RealizationResult evaluate_cell(const PairData& data, const AlignmentSpec& method,
                                const ScenarioSpec& scenario,
                                const InferenceConfig& inference, double alpha,
                                std::uint64_t cell_seed, int pair_id);

/// Convenience wrapper regenerating everything from the parameter vector.
RealizationResult run_realization(const PseudoproxyParams& params,
                                  const AlignmentSpec& method,
                                  const ScenarioSpec& scenario,
                                  const SweepConfig& cfg, int pair_id = 0);

struct ResultStore {
  std::vector<RealizationResult> rows;
  int skipped_count() const;

  static const char* csv_header();
  void write_csv(std::ostream& out) const;
  static std::string csv_row(const RealizationResult& r);
};

/// Fires once per finished pair, in pair order, with that pair's rows.
/// Lets callers append to a result store incrementally.
using PairCallback =
    std::function<void(int pair_id, const std::vector<RealizationResult>&)>;

/// The pseudoproxy benchmark sweep: n_pairs parameter vectors, every
/// method x scenario cell, deterministic per-cell streams. Results are
/// identical for any worker count.
ResultStore run_suite(const SweepConfig& cfg, const PairCallback& on_pair = {});

/// Group metrics over a result subset.
struct GroupMetrics {
  std::string method;
  std::string scenario;
  std::string key;  ///< parameter name
  std::string bin;  ///< low / mid / high decile
  double median_scaled_bias = 0.0;
  double bias_q25 = 0.0, bias_q75 = 0.0;
  double median_scaled_idr = 0.0;
  double rmse = 0.0;
  double frac_correct = 0.0, frac_wrong = 0.0, frac_indifferent = 0.0;
  int n = 0;
};

enum class GroupKey { coupling, length, theta, gacf };
const char* to_string(GroupKey k);

/// Lowest / middle / highest decile bins per parameter (fixed bins over the
/// sweep intervals; empirical deciles for the estimated persistence).
std::vector<GroupMetrics> decile_metrics(const ResultStore& store, GroupKey key);

void write_metrics_csv(std::ostream& out, const std::vector<GroupMetrics>& rows);

/// sqrt(mean((mode - c)^2)) over the non-skipped rows of a subset.
double rmse(const std::vector<const RealizationResult*>& rows);

struct SignFractions {
  double correct = 0.0, wrong = 0.0, indifferent = 0.0;
  int n = 0;
};

/// correct = positive fraction, wrong = negative, rest indifferent
/// (benchmark truth has c > 0).
SignFractions sign_fractions(const std::vector<const RealizationResult*>& rows);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0, tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// ROC over score = posterior mass above zero; positive call iff
/// score >= threshold. AUC by trapezoid.
RocCurve roc_curve(const std::vector<double>& positive_scores,
                   const std::vector<double>& negative_scores,
                   const std::vector<double>& thresholds);

/// Threshold sweep over all distinct scores plus sentinels.
RocCurve roc_curve(const std::vector<double>& positive_scores,
                   const std::vector<double>& negative_scores);

}  // namespace paleocorr

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oligo/engine.hpp"
#include "oligo/stats.hpp"

namespace oligo {

// A batch of runs over one or more conditions. With no sweep parameter there
// is a single condition (the base config). With one, each sweep value yields
// a condition whose config is the base with that parameter overridden.
struct ExperimentSpec {
    std::string name;
    ModelConfig config;
    std::optional<std::string> sweep_parameter;
    std::vector<double> sweep_values;
    int runs_per_condition = 20;
    long total_cycles = 1300;
    long warmup_cycles = 300;
    std::uint64_t master_seed = 1;

    // Throws std::invalid_argument on unknown sweep parameter, empty value
    // list when a parameter is named, runs < 1, or a bad cycle layout.
    void validate() const;

    // Conditions in declaration order: sweep values expanded onto the base
    // config, or just the base config when there is no sweep.
    std::vector<ModelConfig> condition_configs() const;
    std::string condition_label(std::size_t index) const;
};

// True when `name` is a scalar parameter run_experiment can sweep.
bool is_sweep_parameter(const std::string& name);

// Assigns one named scalar parameter. Update-rule bypasses (fix_* flags) are
// not implied; set them on the base config where a sweep requires one.
// Throws std::invalid_argument on unknown names.
void apply_sweep_parameter(ModelConfig& config, const std::string& name, double value);

// Outcome names, in the column order used for tables and CSVs.
const std::vector<std::string>& outcome_names();

// One experimental condition, aggregated over its runs. `means` holds the
// grand mean per outcome (mean over runs of the per-run values); `per_run`
// holds the underlying per-run samples for the pairwise tests.
struct ConditionOutcome {
    std::string label;
    double sweep_value = 0.0;  // meaningful only for sweep experiments
    int runs = 0;
    std::map<std::string, double> means;
    std::map<std::string, std::vector<double>> per_run;
};

struct SweepCorrelation {
    std::string outcome;
    double spearman = 0.0;
    std::size_t points = 0;  // data points the coefficient was computed from
};

struct PairwiseTest {
    std::string outcome;
    std::string baseline;   // label of the reference condition
    std::string condition;  // label of the compared condition
    TestResult test;        // Welch two-sample, condition minus baseline
    double cohens_d = 0.0;
    bool degenerate = false;  // both sides (near-)constant; test not meaningful
};

struct OutcomeTable {
    ExperimentSpec spec;
    std::vector<ConditionOutcome> conditions;
    // Sweep experiments only: Spearman of sweep value against each outcome.
    std::vector<SweepCorrelation> correlations;
    // Multi-condition experiments: each later condition against the first.
    std::vector<PairwiseTest> tests;
};

// Per-run scalars backing the outcome table, computed over measurement cycles.
std::map<std::string, double> run_outcomes(const RunTrace& trace);

// Master seed for one condition's run bundle; run i inside the bundle is
// seeded derive_run_seed(condition_master_seed(...), i).
std::uint64_t condition_master_seed(std::uint64_t master_seed, std::size_t condition_index);

// Fraction of measurement cycles whose winner had both the strictly greater
// olig value and the strictly greater |ideo| relative to the range midpoint.
double olig_defeats_center_fraction(const RunTrace& trace);

OutcomeTable run_experiment(const ExperimentSpec& spec, int threads = 0);

// Red-support behavior over the first `window` measurement cycles of a run,
// mirroring the summary statistics used for the polling comparison.
struct ValidationMetrics {
    double mean_support = 0.0;
    double min_support = 0.0;
    double max_support = 0.0;
    double mean_abs_change = 0.0;
    double max_abs_change = 0.0;
    double sd_change = 0.0;  // sample sd of the consecutive differences
};

ValidationMetrics validation_metrics(const RunTrace& trace, long window = 120);

const std::vector<std::string>& validation_metric_names();
double validation_metric(const ValidationMetrics& m, const std::string& name);

struct PollRecord {
    std::string period;
    double red_support = 0.0;
    double blue_support = 0.0;
};

struct PollSeries {
    std::vector<PollRecord> records;
};

// The same six summary statistics computed over the poll red-support series.
ValidationMetrics poll_metrics(const PollSeries& polls);

struct MetricComparison {
    std::string metric;
    double model_mean = 0.0;
    double model_sd = 0.0;   // across runs
    double reference = 0.0;  // poll-side value
    double cohens_d = 0.0;   // (model mean - reference) / model sd
};

// Pairs per-run model metrics with the poll-side values, one Cohen's d per
// metric. Throws on an empty model sample or a poll series with < 2 records.
std::vector<MetricComparison> compare_to_polls(const std::vector<ValidationMetrics>& model_runs,
                                               const PollSeries& polls);

// Preconfigured experiments: base variants, the six sweeps, the fixed-value
// variations, and the robustness battery. Throws on unknown names.
ExperimentSpec named_experiment(const std::string& name, std::uint64_t master_seed);
std::vector<std::string> named_experiment_names();

}  // namespace oligo

#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "oligo/experiments.hpp"

namespace oligo {

// Reads a JSON config file. A file carrying any experiment-level key (name,
// config, sweep_parameter, sweep_values, runs_per_condition, total_cycles,
// warmup_cycles, master_seed) parses as an ExperimentSpec with the model
// parameters nested under "config"; otherwise every key must be a model
// parameter and the result is a ModelConfig. Unspecified keys keep their
// defaults. Throws std::invalid_argument naming the file and offending key
// on unknown keys, type mismatches, or invariant violations, and
// std::runtime_error when the file cannot be read.
std::variant<ModelConfig, ExperimentSpec> parse_config(const std::string& path);

// The same parsers on in-memory text; `origin` labels error messages.
ModelConfig parse_model_config_text(const std::string& text, const std::string& origin);
ExperimentSpec parse_experiment_text(const std::string& text, const std::string& origin);

// Trace CSV: one row per cycle, columns in CycleRecord declaration order,
// restricted to spec.recorded_fields when that is non-empty. Numbers are
// written with 6 fixed decimals, flags as 0/1, the incumbent as red/blue.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

// Experiment outputs: per-condition outcome means, sweep correlations (sweep
// experiments only), and pairwise Welch tests against the first condition.
void write_outcome_summary_csv(const OutcomeTable& table, std::ostream& out);
void write_correlations_csv(const OutcomeTable& table, std::ostream& out);
void write_tests_csv(const OutcomeTable& table, std::ostream& out);

// Validation outputs: per-run support metrics and the per-metric comparison
// against a poll series.
void write_validation_csv(const std::vector<ValidationMetrics>& runs, std::ostream& out);
void write_comparison_csv(const std::vector<MetricComparison>& rows, std::ostream& out);

// Warm-up estimate: cycle, cross-run mean, moving average.
void write_warmup_csv(const WarmupEstimate& estimate, std::ostream& out);

// Poll CSV with header `period,red_support,blue_support`. Ingestion rejects
// missing or malformed headers, rows without exactly three fields, support
// values outside [0, 100], and period labels that do not strictly increase,
// each with its line number. A series needs at least 2 records.
PollSeries ingest_polls(const std::string& path);
PollSeries parse_polls(std::istream& in, const std::string& origin);
void write_polls_csv(const PollSeries& polls, std::ostream& out);

// Whole-file helpers ("\n" line endings are preserved as-is). Throw
// std::runtime_error when the path cannot be opened.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace oligo

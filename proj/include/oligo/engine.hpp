#pragma once

#include "oligo/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace oligo {

struct RunSpec {
    ModelConfig config;
    long total_cycles = 1300;
    long warmup_cycles = 300;
    std::uint64_t seed = 0;
    // Fields exposed through summaries, trace CSVs and warm-up estimation;
    // empty means all. Records always keep every field internally.
    std::vector<std::string> recorded_fields;

    void validate() const;
};

struct RunTrace {
    RunSpec spec;
    std::vector<CycleRecord> records;  // one per cycle, warm-up included
    std::map<std::string, double> summary;  // per-field means, measurement cycles only

    bool is_warmup_cycle(long cycle) const { return cycle < spec.warmup_cycles; }
    long measurement_cycles() const { return spec.total_cycles - spec.warmup_cycles; }
};

enum class FieldKind { Index, Numeric, Flag, Party };

struct CycleFieldInfo {
    const char* name;
    FieldKind kind;
    double (*value)(const CycleRecord&);  // Flag: 0/1; Party: red 0, blue 1
};

// All CycleRecord fields in declaration (= CSV column) order.
const std::vector<CycleFieldInfo>& cycle_record_fields();
const CycleFieldInfo* find_cycle_field(std::string_view name);  // nullptr when unknown

// Seed for one run of a multi-run bundle; runs are reproducible in isolation.
std::uint64_t derive_run_seed(std::uint64_t master_seed, long run_index);

// Executes the five stages in order, returns the cycle's record, advances the
// cycle counter. The optional order permutes agent iteration within stages
// (for the order-independence property); results must not depend on it.
CycleRecord step(WorldState& world, const AgentOrder* order = nullptr);

RunTrace run(const RunSpec& spec);

// count runs seeded derive_run_seed(master_seed, 0..count-1). threads <= 0
// picks hardware concurrency; the result is identical for any thread count.
std::vector<RunTrace> run_many(const RunSpec& base, int count, std::uint64_t master_seed,
                               int threads = 0);

struct WarmupEstimate {
    long suggested_warmup = 0;
    std::vector<double> cross_run_mean;
    std::vector<double> moving_average;
};

// Cross-run mean of one field per cycle, a centered moving average of the
// given window (shrinking at the edges), and the first cycle after which the
// moving average stays within rel_band of the final-quarter mean.
WarmupEstimate estimate_warmup(const std::vector<RunTrace>& traces, std::string_view field,
                               int smoothing_window, double rel_band = 0.05);

}  // namespace oligo

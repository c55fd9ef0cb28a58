#include "oligo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oligo {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<double> measurement_values(const RunTrace& trace,
                                       double (*get)(const CycleRecord&)) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(trace.measurement_cycles()));
    for (const CycleRecord& rec : trace.records) {
        if (!trace.is_warmup_cycle(rec.cycle)) out.push_back(get(rec));
    }
    return out;
}

// Consecutive differences of the measurement-cycle red support series.
std::vector<double> vote_changes(const RunTrace& trace) {
    std::vector<double> support =
        measurement_values(trace, [](const CycleRecord& r) { return r.red_vote_pct; });
    std::vector<double> diffs;
    if (support.size() >= 2) {
        diffs.reserve(support.size() - 1);
        for (std::size_t i = 1; i < support.size(); ++i)
            diffs.push_back(support[i] - support[i - 1]);
    }
    return diffs;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (name.empty()) throw std::invalid_argument("experiment: name must be non-empty");
    if (runs_per_condition < 1)
        throw std::invalid_argument("runs_per_condition: must be at least 1");
    if (total_cycles <= 0) throw std::invalid_argument("total_cycles: must be positive");
    if (warmup_cycles < 0 || warmup_cycles >= total_cycles)
        throw std::invalid_argument("warmup_cycles: must be in [0, total_cycles)");
    if (sweep_parameter) {
        if (sweep_values.empty())
            throw std::invalid_argument("sweep_values: must be non-empty when sweep_parameter is set");
        if (!is_sweep_parameter(*sweep_parameter))
            throw std::invalid_argument("sweep_parameter: unknown parameter \"" +
                                        *sweep_parameter + "\"");
    } else if (!sweep_values.empty()) {
        throw std::invalid_argument("sweep_values: set without a sweep_parameter");
    }
    for (const ModelConfig& c : condition_configs()) c.validate();
}

std::vector<ModelConfig> ExperimentSpec::condition_configs() const {
    if (!sweep_parameter) return {config};
    std::vector<ModelConfig> out;
    out.reserve(sweep_values.size());
    for (double v : sweep_values) {
        ModelConfig c = config;
        apply_sweep_parameter(c, *sweep_parameter, v);
        out.push_back(c);
    }
    return out;
}

std::string ExperimentSpec::condition_label(std::size_t index) const {
    if (!sweep_parameter) return "base";
    if (index >= sweep_values.size())
        throw std::out_of_range("condition index out of range");
    return format_value(sweep_values[index]);
}

bool is_sweep_parameter(const std::string& name) {
    return numeric_config_fields().count(name) != 0;
}

void apply_sweep_parameter(ModelConfig& config, const std::string& name, double value) {
    const auto& fields = numeric_config_fields();
    auto it = fields.find(name);
    if (it == fields.end())
        throw std::invalid_argument("sweep_parameter: unknown parameter \"" + name + "\"");
    config.*(it->second) = value;
}

const std::vector<std::string>& outcome_names() {
    static const std::vector<std::string> names = {
        "mean_tax_rate",        "mean_party_olig",     "mean_abs_party_ideo",
        "olig_defeats_center",  "mean_oligarch_profit", "mean_donated_fraction",
        "mean_donation_size",   "mean_salience",       "mean_red_support",
        "max_red_support",      "mean_abs_vote_change", "sd_vote_change",
    };
    return names;
}

std::map<std::string, double> run_outcomes(const RunTrace& trace) {
    if (trace.measurement_cycles() <= 0 ||
        trace.records.size() != static_cast<std::size_t>(trace.spec.total_cycles))
        throw std::invalid_argument("trace: needs a complete run with measurement cycles");

    auto mean_of_field = [&](double (*get)(const CycleRecord&)) {
        return mean_of(measurement_values(trace, get));
    };

    std::map<std::string, double> out;
    out["mean_tax_rate"] = mean_of_field([](const CycleRecord& r) { return r.tax_rate; });
    out["mean_party_olig"] =
        mean_of_field([](const CycleRecord& r) { return r.mean_party_olig; });
    out["mean_abs_party_ideo"] =
        mean_of_field([](const CycleRecord& r) { return std::abs(r.mean_party_ideo); });
    out["olig_defeats_center"] = olig_defeats_center_fraction(trace);
    out["mean_oligarch_profit"] =
        mean_of_field([](const CycleRecord& r) { return r.mean_oligarch_profit; });
    out["mean_donated_fraction"] =
        mean_of_field([](const CycleRecord& r) { return r.mean_donated_fraction; });
    out["mean_donation_size"] =
        mean_of_field([](const CycleRecord& r) { return r.mean_donation_size; });
    out["mean_salience"] =
        mean_of_field([](const CycleRecord& r) { return r.mean_voter_salience; });

    std::vector<double> support =
        measurement_values(trace, [](const CycleRecord& r) { return r.red_vote_pct; });
    out["mean_red_support"] = mean_of(support);
    out["max_red_support"] = *std::max_element(support.begin(), support.end());

    std::vector<double> diffs = vote_changes(trace);
    double mean_abs = 0.0;
    for (double d : diffs) mean_abs += std::abs(d);
    out["mean_abs_vote_change"] = diffs.empty() ? 0.0 : mean_abs / diffs.size();
    out["sd_vote_change"] = diffs.size() >= 2 ? sample_sd(diffs) : 0.0;
    return out;
}

double olig_defeats_center_fraction(const RunTrace& trace) {
    long count = 0;
    long total = 0;
    for (const CycleRecord& rec : trace.records) {
        if (trace.is_warmup_cycle(rec.cycle)) continue;
        ++total;
        if (rec.olig_defeats_center) ++count;
    }
    if (total == 0) throw std::invalid_argument("trace: no measurement cycles");
    return static_cast<double>(count) / static_cast<double>(total);
}

std::uint64_t condition_master_seed(std::uint64_t master_seed, std::size_t condition_index) {
    return RandomStream(master_seed)
        .derive("condition")
        .derive(static_cast<std::uint64_t>(condition_index))
        .next_u64();
}

OutcomeTable run_experiment(const ExperimentSpec& spec, int threads) {
    spec.validate();
    std::vector<ModelConfig> configs = spec.condition_configs();

    // Outcomes correlated on per-cycle data points; the rest only exist per
    // run and contribute one point per run instead.
    static const std::vector<std::pair<const char*, double (*)(const CycleRecord&)>>
        per_cycle_outcomes = {
            {"mean_tax_rate", [](const CycleRecord& r) { return r.tax_rate; }},
            {"mean_party_olig", [](const CycleRecord& r) { return r.mean_party_olig; }},
            {"mean_abs_party_ideo",
             [](const CycleRecord& r) { return std::abs(r.mean_party_ideo); }},
            {"mean_oligarch_profit",
             [](const CycleRecord& r) { return r.mean_oligarch_profit; }},
            {"mean_donated_fraction",
             [](const CycleRecord& r) { return r.mean_donated_fraction; }},
            {"mean_donation_size",
             [](const CycleRecord& r) { return r.mean_donation_size; }},
            {"mean_salience", [](const CycleRecord& r) { return r.mean_voter_salience; }},
            {"mean_red_support", [](const CycleRecord& r) { return r.red_vote_pct; }},
        };
    static const std::vector<std::string> per_run_outcomes = {
        "olig_defeats_center", "max_red_support", "mean_abs_vote_change", "sd_vote_change"};

    const bool sweeping = spec.sweep_parameter.has_value();
    std::vector<double> cycle_x;
    std::map<std::string, std::vector<double>> cycle_y;
    std::vector<double> run_x;
    std::map<std::string, std::vector<double>> run_y;

    OutcomeTable table;
    table.spec = spec;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        RunSpec base;
        base.config = configs[ci];
        base.total_cycles = spec.total_cycles;
        base.warmup_cycles = spec.warmup_cycles;
        std::vector<RunTrace> traces = run_many(base, spec.runs_per_condition,
                                                condition_master_seed(spec.master_seed, ci),
                                                threads);

        ConditionOutcome cond;
        cond.label = spec.condition_label(ci);
        cond.sweep_value = sweeping ? spec.sweep_values[ci] : 0.0;
        cond.runs = spec.runs_per_condition;
        for (const RunTrace& trace : traces) {
            std::map<std::string, double> outcomes = run_outcomes(trace);
            for (const auto& [key, value] : outcomes) cond.per_run[key].push_back(value);
            if (sweeping) {
                run_x.push_back(cond.sweep_value);
                for (const std::string& key : per_run_outcomes)
                    run_y[key].push_back(outcomes.at(key));
                for (const CycleRecord& rec : trace.records) {
                    if (trace.is_warmup_cycle(rec.cycle)) continue;
                    cycle_x.push_back(cond.sweep_value);
                    for (const auto& [key, get] : per_cycle_outcomes)
                        cycle_y[key].push_back(get(rec));
                }
            }
        }
        for (const auto& [key, values] : cond.per_run) cond.means[key] = mean_of(values);
        table.conditions.push_back(std::move(cond));
    }

    if (sweeping) {
        for (const std::string& key : outcome_names()) {
            SweepCorrelation corr;
            corr.outcome = key;
            if (cycle_y.count(key)) {
                corr.spearman = spearman(cycle_x, cycle_y[key]);
                corr.points = cycle_x.size();
            } else {
                corr.spearman = spearman(run_x, run_y.at(key));
                corr.points = run_x.size();
            }
            table.correlations.push_back(corr);
        }
    }

    if (table.conditions.size() > 1) {
        const ConditionOutcome& baseline = table.conditions.front();
        for (std::size_t ci = 1; ci < table.conditions.size(); ++ci) {
            const ConditionOutcome& cond = table.conditions[ci];
            for (const std::string& key : outcome_names()) {
                PairwiseTest pt;
                pt.outcome = key;
                pt.baseline = baseline.label;
                pt.condition = cond.label;
                try {
                    pt.test = welch_t_test(cond.per_run.at(key), baseline.per_run.at(key),
                                           Tails::TwoSided);
                    pt.cohens_d = cohens_d(cond.per_run.at(key), baseline.per_run.at(key));
                } catch (const std::exception&) {
                    pt.degenerate = true;  // constant samples, nothing to test
                }
                table.tests.push_back(std::move(pt));
            }
        }
    }
    return table;
}

namespace {

ValidationMetrics metrics_from_series(const std::vector<double>& support) {
    if (support.size() < 2)
        throw std::invalid_argument("support series: needs at least 2 observations");
    ValidationMetrics m;
    m.mean_support = mean_of(support);
    m.min_support = *std::min_element(support.begin(), support.end());
    m.max_support = *std::max_element(support.begin(), support.end());
    std::vector<double> diffs;
    diffs.reserve(support.size() - 1);
    for (std::size_t i = 1; i < support.size(); ++i)
        diffs.push_back(support[i] - support[i - 1]);
    double mean_abs = 0.0;
    double max_abs = 0.0;
    for (double d : diffs) {
        mean_abs += std::abs(d);
        max_abs = std::max(max_abs, std::abs(d));
    }
    m.mean_abs_change = mean_abs / diffs.size();
    m.max_abs_change = max_abs;
    m.sd_change = diffs.size() >= 2 ? sample_sd(diffs) : 0.0;
    return m;
}

}  // namespace

ValidationMetrics validation_metrics(const RunTrace& trace, long window) {
    if (window < 2) throw std::invalid_argument("window: must be at least 2");
    if (trace.measurement_cycles() < window)
        throw std::invalid_argument("window: exceeds the trace's measurement cycles");
    std::vector<double> support;
    support.reserve(static_cast<std::size_t>(window));
    for (const CycleRecord& rec : trace.records) {
        if (trace.is_warmup_cycle(rec.cycle)) continue;
        support.push_back(rec.red_vote_pct);
        if (static_cast<long>(support.size()) == window) break;
    }
    return metrics_from_series(support);
}

const std::vector<std::string>& validation_metric_names() {
    static const std::vector<std::string> names = {
        "mean_support", "min_support",    "max_support",
        "mean_abs_change", "max_abs_change", "sd_change",
    };
    return names;
}

double validation_metric(const ValidationMetrics& m, const std::string& name) {
    if (name == "mean_support") return m.mean_support;
    if (name == "min_support") return m.min_support;
    if (name == "max_support") return m.max_support;
    if (name == "mean_abs_change") return m.mean_abs_change;
    if (name == "max_abs_change") return m.max_abs_change;
    if (name == "sd_change") return m.sd_change;
    throw std::invalid_argument("unknown validation metric \"" + name + "\"");
}

ValidationMetrics poll_metrics(const PollSeries& polls) {
    std::vector<double> support;
    support.reserve(polls.records.size());
    for (const PollRecord& rec : polls.records) support.push_back(rec.red_support);
    if (support.size() < 2)
        throw std::invalid_argument("poll series: needs at least 2 records");
    return metrics_from_series(support);
}

std::vector<MetricComparison> compare_to_polls(const std::vector<ValidationMetrics>& model_runs,
                                               const PollSeries& polls) {
    if (model_runs.size() < 2)
        throw std::invalid_argument("model metrics: needs at least 2 runs");
    ValidationMetrics reference = poll_metrics(polls);

    std::vector<MetricComparison> out;
    for (const std::string& name : validation_metric_names()) {
        std::vector<double> sample;
        sample.reserve(model_runs.size());
        for (const ValidationMetrics& m : model_runs)
            sample.push_back(validation_metric(m, name));
        MetricComparison cmp;
        cmp.metric = name;
        cmp.model_mean = mean_of(sample);
        cmp.model_sd = sample_sd(sample);
        cmp.reference = validation_metric(reference, name);
        cmp.cohens_d = cohens_d(sample, cmp.reference);
        out.push_back(cmp);
    }
    return out;
}

namespace {

ExperimentSpec make_base(const std::string& name, std::uint64_t master_seed, int runs) {
    ExperimentSpec spec;
    spec.name = name;
    spec.master_seed = master_seed;
    spec.runs_per_condition = runs;
    return spec;
}

}  // namespace

ExperimentSpec named_experiment(const std::string& name, std::uint64_t master_seed) {
    if (name == "base-iim") return make_base(name, master_seed, 100);
    if (name == "base-pimm") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.variant = Variant::PIMM;
        return spec;
    }
    if (name == "base-aimm") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.variant = Variant::AIMM;
        return spec;
    }
    if (name == "fixed-party-olig") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.fix_party_olig = true;
        return spec;
    }
    if (name == "donation-size-sweep") {
        ExperimentSpec spec = make_base(name, master_seed, 20);
        spec.config.fix_donation_size = true;
        spec.sweep_parameter = "oligarch_initial_donation";
        spec.sweep_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        return spec;
    }
    if (name == "ad-decay-sweep") {
        ExperimentSpec spec = make_base(name, master_seed, 20);
        spec.sweep_parameter = "voter_ad_decay_factor";
        spec.sweep_values = {-0.12, -0.10, -0.08, -0.06, -0.04, -0.02};
        return spec;
    }
    if (name == "salience-sweep" || name == "salience-sweep-low") {
        ExperimentSpec spec = make_base(name, master_seed, 20);
        spec.config.fix_voter_salience = true;
        spec.sweep_parameter = "voter_initial_salience";
        if (name == "salience-sweep-low")
            spec.sweep_values = {0.0, 0.2, 0.4, 0.6};
        else
            spec.sweep_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        return spec;
    }
    if (name == "memory-strength-sweep") {
        ExperimentSpec spec = make_base(name, master_seed, 20);
        spec.sweep_parameter = "voter_memory_strength";
        spec.sweep_values = {0.1, 0.3, 0.5, 0.7, 0.9};
        return spec;
    }
    if (name == "income-fraction-sweep") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.sweep_parameter = "oligarch_gdp_fraction";
        spec.sweep_values = {0.02, 0.05, 0.10};
        return spec;
    }
    if (name == "voters-50") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.voter_count = 50;
        spec.config.voter_gross_income = 19.0;  // holds total voter income
        return spec;
    }
    if (name == "oligarchs-10") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.oligarch_count = 10;
        return spec;
    }
    if (name == "oligarchs-50") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.oligarch_count = 50;
        return spec;
    }
    if (name == "bimodal-voters") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.voter_distribution = VoterDistribution::Bimodal;
        return spec;
    }
    if (name == "null-option") {
        ExperimentSpec spec = make_base(name, master_seed, 100);
        spec.config.allow_null_donation_action = true;
        return spec;
    }
    throw std::invalid_argument("unknown experiment \"" + name + "\"");
}

std::vector<std::string> named_experiment_names() {
    return {
        "base-iim",        "base-pimm",           "base-aimm",
        "fixed-party-olig", "donation-size-sweep", "ad-decay-sweep",
        "salience-sweep",  "salience-sweep-low",  "memory-strength-sweep",
        "income-fraction-sweep", "voters-50",     "oligarchs-10",
        "oligarchs-50",    "bimodal-voters",      "null-option",
    };
}

}  // namespace oligo

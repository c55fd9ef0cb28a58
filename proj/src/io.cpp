#include "oligo/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace oligo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw std::invalid_argument(origin + ": " + message);
}

double as_number(const json& value, const std::string& origin, const std::string& key) {
    if (!value.is_number()) fail(origin, key + ": expected a number");
    return value.get<double>();
}

long as_integer(const json& value, const std::string& origin, const std::string& key) {
    if (!value.is_number_integer()) fail(origin, key + ": expected an integer");
    return value.get<long>();
}

bool as_boolean(const json& value, const std::string& origin, const std::string& key) {
    if (!value.is_boolean()) fail(origin, key + ": expected a boolean");
    return value.get<bool>();
}

std::string as_string(const json& value, const std::string& origin, const std::string& key) {
    if (!value.is_string()) fail(origin, key + ": expected a string");
    return value.get<std::string>();
}

ModelConfig model_config_from_json(const json& j, const std::string& origin) {
    if (!j.is_object()) fail(origin, "config: expected an object");
    ModelConfig cfg;
    const auto& numeric = numeric_config_fields();
    for (const auto& [key, value] : j.items()) {
        if (auto it = numeric.find(key); it != numeric.end()) {
            cfg.*(it->second) = as_number(value, origin, key);
        } else if (key == "oligarch_count") {
            cfg.oligarch_count = static_cast<int>(as_integer(value, origin, key));
        } else if (key == "voter_count") {
            cfg.voter_count = static_cast<int>(as_integer(value, origin, key));
        } else if (key == "oligarch_latency") {
            cfg.oligarch_latency = static_cast<int>(as_integer(value, origin, key));
        } else if (key == "variant") {
            try {
                cfg.variant = variant_from_string(as_string(value, origin, key));
            } catch (const std::invalid_argument& e) {
                fail(origin, e.what());
            }
        } else if (key == "voter_distribution") {
            try {
                cfg.voter_distribution =
                    voter_distribution_from_string(as_string(value, origin, key));
            } catch (const std::invalid_argument& e) {
                fail(origin, e.what());
            }
        } else if (key == "bimodal_means") {
            if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
                !value[1].is_number())
                fail(origin, "bimodal_means: expected an array of 2 numbers");
            cfg.bimodal_means = {value[0].get<double>(), value[1].get<double>()};
        } else if (key == "aimm_ideo_norm_from_bliss") {
            cfg.aimm_ideo_norm_from_bliss = as_boolean(value, origin, key);
        } else if (key == "allow_null_donation_action") {
            cfg.allow_null_donation_action = as_boolean(value, origin, key);
        } else if (key == "fix_party_olig") {
            cfg.fix_party_olig = as_boolean(value, origin, key);
        } else if (key == "fix_voter_salience") {
            cfg.fix_voter_salience = as_boolean(value, origin, key);
        } else if (key == "fix_donation_size") {
            cfg.fix_donation_size = as_boolean(value, origin, key);
        } else {
            fail(origin, "unknown key \"" + key + "\"");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
    }
    return cfg;
}

const char* const kExperimentKeys[] = {
    "name",          "config",       "sweep_parameter",    "sweep_values",
    "runs_per_condition", "total_cycles", "warmup_cycles", "master_seed",
};

bool looks_like_experiment(const json& j) {
    for (const char* key : kExperimentKeys)
        if (j.contains(key)) return true;
    return false;
}

ExperimentSpec experiment_from_json(const json& j, const std::string& origin) {
    ExperimentSpec spec;
    spec.name = "experiment";
    for (const auto& [key, value] : j.items()) {
        if (key == "name") {
            spec.name = as_string(value, origin, key);
        } else if (key == "config") {
            spec.config = model_config_from_json(value, origin);
        } else if (key == "sweep_parameter") {
            spec.sweep_parameter = as_string(value, origin, key);
        } else if (key == "sweep_values") {
            if (!value.is_array()) fail(origin, "sweep_values: expected an array of numbers");
            for (const json& v : value)
                spec.sweep_values.push_back(as_number(v, origin, "sweep_values"));
        } else if (key == "runs_per_condition") {
            spec.runs_per_condition = static_cast<int>(as_integer(value, origin, key));
        } else if (key == "total_cycles") {
            spec.total_cycles = as_integer(value, origin, key);
        } else if (key == "warmup_cycles") {
            spec.warmup_cycles = as_integer(value, origin, key);
        } else if (key == "master_seed") {
            if (!value.is_number_integer())
                fail(origin, "master_seed: expected a non-negative integer");
            if (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)
                fail(origin, "master_seed: expected a non-negative integer");
            spec.master_seed = value.get<std::uint64_t>();
        } else {
            fail(origin, "unknown key \"" + key + "\"");
        }
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
    }
    return spec;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, e.what());
    }
}

// Stable fixed-point formatting; collapses negative zero.
std::string fixed6(double v) {
    v += 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string field_cell(const CycleFieldInfo& field, const CycleRecord& rec) {
    double v = field.value(rec);
    switch (field.kind) {
        case FieldKind::Index: return std::to_string(static_cast<long>(v));
        case FieldKind::Flag: return v != 0.0 ? "1" : "0";
        case FieldKind::Party: return v == 0.0 ? "red" : "blue";
        case FieldKind::Numeric: return fixed6(v);
    }
    throw std::logic_error("unreachable field kind");
}

}  // namespace

std::variant<ModelConfig, ExperimentSpec> parse_config(const std::string& path) {
    std::string text = read_file(path);
    json j = parse_json_text(text, path);
    if (!j.is_object()) fail(path, "expected a JSON object");
    if (looks_like_experiment(j)) return experiment_from_json(j, path);
    return model_config_from_json(j, path);
}

ModelConfig parse_model_config_text(const std::string& text, const std::string& origin) {
    return model_config_from_json(parse_json_text(text, origin), origin);
}

ExperimentSpec parse_experiment_text(const std::string& text, const std::string& origin) {
    return experiment_from_json(parse_json_text(text, origin), origin);
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    std::vector<const CycleFieldInfo*> fields;
    for (const CycleFieldInfo& info : cycle_record_fields()) {
        if (trace.spec.recorded_fields.empty() ||
            std::find(trace.spec.recorded_fields.begin(), trace.spec.recorded_fields.end(),
                      info.name) != trace.spec.recorded_fields.end())
            fields.push_back(&info);
    }
    for (std::size_t i = 0; i < fields.size(); ++i)
        out << (i ? "," : "") << fields[i]->name;
    out << "\n";
    for (const CycleRecord& rec : trace.records) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            out << (i ? "," : "") << field_cell(*fields[i], rec);
        out << "\n";
    }
}

void write_outcome_summary_csv(const OutcomeTable& table, std::ostream& out) {
    out << "condition,sweep_value,runs";
    for (const std::string& name : outcome_names()) out << "," << name;
    out << "\n";
    const bool sweeping = table.spec.sweep_parameter.has_value();
    for (const ConditionOutcome& cond : table.conditions) {
        out << cond.label << "," << (sweeping ? fixed6(cond.sweep_value) : std::string())
            << "," << cond.runs;
        for (const std::string& name : outcome_names())
            out << "," << fixed6(cond.means.at(name));
        out << "\n";
    }
}

void write_correlations_csv(const OutcomeTable& table, std::ostream& out) {
    out << "outcome,spearman,points\n";
    for (const SweepCorrelation& corr : table.correlations)
        out << corr.outcome << "," << fixed6(corr.spearman) << "," << corr.points << "\n";
}

void write_tests_csv(const OutcomeTable& table, std::ostream& out) {
    out << "outcome,baseline,condition,statistic,df,p_value,ci_lo,ci_hi,cohens_d,degenerate\n";
    for (const PairwiseTest& pt : table.tests) {
        out << pt.outcome << "," << pt.baseline << "," << pt.condition << ","
            << fixed6(pt.test.statistic) << "," << fixed6(pt.test.degrees_of_freedom) << ","
            << fixed6(pt.test.p_value) << "," << fixed6(pt.test.ci_lo) << ","
            << fixed6(pt.test.ci_hi) << "," << fixed6(pt.cohens_d) << ","
            << (pt.degenerate ? "1" : "0") << "\n";
    }
}

void write_validation_csv(const std::vector<ValidationMetrics>& runs, std::ostream& out) {
    out << "run";
    for (const std::string& name : validation_metric_names()) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out << i;
        for (const std::string& name : validation_metric_names())
            out << "," << fixed6(validation_metric(runs[i], name));
        out << "\n";
    }
}

void write_comparison_csv(const std::vector<MetricComparison>& rows, std::ostream& out) {
    out << "metric,model_mean,model_sd,reference,cohens_d\n";
    for (const MetricComparison& row : rows) {
        out << row.metric << "," << fixed6(row.model_mean) << "," << fixed6(row.model_sd)
            << "," << fixed6(row.reference) << "," << fixed6(row.cohens_d) << "\n";
    }
}

void write_warmup_csv(const WarmupEstimate& estimate, std::ostream& out) {
    out << "cycle,cross_run_mean,moving_average\n";
    for (std::size_t i = 0; i < estimate.cross_run_mean.size(); ++i) {
        out << i << "," << fixed6(estimate.cross_run_mean[i]) << ","
            << fixed6(estimate.moving_average[i]) << "\n";
    }
}

PollSeries ingest_polls(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    return parse_polls(in, path);
}

PollSeries parse_polls(std::istream& in, const std::string& origin) {
    auto fail_line = [&](long line, const std::string& message) {
        fail(origin, "line " + std::to_string(line) + ": " + message);
    };

    PollSeries series;
    std::string line;
    long line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!saw_header) {
            if (line != "period,red_support,blue_support")
                fail_line(line_no, "expected header period,red_support,blue_support");
            saw_header = true;
            continue;
        }
        if (line.empty()) continue;

        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos)
            fail_line(line_no, "expected 3 comma-separated fields");

        PollRecord rec;
        rec.period = line.substr(0, c1);
        if (rec.period.empty()) fail_line(line_no, "period must be non-empty");

        auto parse_pct = [&](const std::string& text, const char* what) {
            if (text.empty()) fail_line(line_no, std::string(what) + ": empty value");
            char* end = nullptr;
            double v = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size() || !std::isfinite(v))
                fail_line(line_no, std::string(what) + ": not a number: \"" + text + "\"");
            if (v < 0.0 || v > 100.0)
                fail_line(line_no, std::string(what) + ": must be in [0, 100]");
            return v;
        };
        rec.red_support = parse_pct(line.substr(c1 + 1, c2 - c1 - 1), "red_support");
        rec.blue_support = parse_pct(line.substr(c2 + 1), "blue_support");

        if (!series.records.empty() && !(series.records.back().period < rec.period))
            fail_line(line_no, "period \"" + rec.period + "\" is not after \"" +
                                   series.records.back().period + "\"");
        series.records.push_back(std::move(rec));
    }
    if (!saw_header) fail(origin, "line 1: expected header period,red_support,blue_support");
    if (series.records.size() < 2) fail(origin, "needs at least 2 poll records");
    return series;
}

void write_polls_csv(const PollSeries& polls, std::ostream& out) {
    out << "period,red_support,blue_support\n";
    for (const PollRecord& rec : polls.records)
        out << rec.period << "," << fixed6(rec.red_support) << ","
            << fixed6(rec.blue_support) << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << contents;
    if (!out) throw std::runtime_error(path + ": write failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace oligo

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "oligo/engine.hpp"
#include "oligo/experiments.hpp"
#include "oligo/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace oligo;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int runs = 0;  // 0 = subcommand default
    bool emit_traces = false;
    std::string experiment_name;
    std::string polls_path;
    long cycles = 1300;
    long warmup = 300;
    long window = 120;
    std::string field = "mean_voter_salience";
    int smoothing = 5;
    double band = 0.05;
    int threads = 0;
};

ModelConfig load_model_config(const std::string& path) {
    if (path.empty()) return ModelConfig{};
    auto parsed = parse_config(path);
    if (std::holds_alternative<ExperimentSpec>(parsed))
        throw std::invalid_argument(path + ": expected a model config, got an experiment spec");
    return std::get<ModelConfig>(parsed);
}

std::string save(const fs::path& path, const std::string& contents) {
    write_file(path.string(), contents);
    return path.string();
}

template <typename T>
std::string save_csv(const fs::path& path, const T& value,
                     void (*writer)(const T&, std::ostream&)) {
    std::ostringstream out;
    writer(value, out);
    return save(path, out.str());
}

int cmd_run(const Options& opt) {
    RunSpec spec;
    spec.config = load_model_config(opt.config_path);
    spec.total_cycles = opt.cycles;
    spec.warmup_cycles = opt.warmup;
    spec.seed = opt.seed;
    RunTrace trace = run(spec);

    fs::create_directories(opt.out_dir);
    std::cout << "wrote " << save_csv(fs::path(opt.out_dir) / "trace.csv", trace,
                                      &write_trace_csv)
              << "\n";
    return 0;
}

int cmd_experiment(const Options& opt) {
    if (opt.experiment_name.empty() == opt.config_path.empty())
        throw std::invalid_argument("experiment: pass exactly one of --name or --config");

    ExperimentSpec spec;
    if (!opt.experiment_name.empty()) {
        spec = named_experiment(opt.experiment_name, opt.seed);
    } else {
        auto parsed = parse_config(opt.config_path);
        if (std::holds_alternative<ExperimentSpec>(parsed)) {
            spec = std::get<ExperimentSpec>(parsed);
        } else {
            spec.name = fs::path(opt.config_path).stem().string();
            spec.config = std::get<ModelConfig>(parsed);
            spec.master_seed = opt.seed;
        }
    }
    if (opt.runs > 0) spec.runs_per_condition = opt.runs;

    OutcomeTable table = run_experiment(spec, opt.threads);

    fs::path out_dir = fs::path(opt.out_dir) / spec.name;
    fs::create_directories(out_dir);
    std::cout << "wrote "
              << save_csv(out_dir / "summary.csv", table, &write_outcome_summary_csv) << "\n";
    if (!table.correlations.empty())
        std::cout << "wrote "
                  << save_csv(out_dir / "correlations.csv", table, &write_correlations_csv)
                  << "\n";
    if (!table.tests.empty())
        std::cout << "wrote " << save_csv(out_dir / "tests.csv", table, &write_tests_csv)
                  << "\n";

    if (opt.emit_traces) {
        std::vector<ModelConfig> configs = spec.condition_configs();
        for (std::size_t ci = 0; ci < configs.size(); ++ci) {
            RunSpec base;
            base.config = configs[ci];
            base.total_cycles = spec.total_cycles;
            base.warmup_cycles = spec.warmup_cycles;
            std::vector<RunTrace> traces =
                run_many(base, spec.runs_per_condition,
                         condition_master_seed(spec.master_seed, ci), opt.threads);
            fs::path cond_dir = out_dir / "traces" / spec.condition_label(ci);
            fs::create_directories(cond_dir);
            for (std::size_t i = 0; i < traces.size(); ++i) {
                fs::path path = cond_dir / ("run" + std::to_string(i) + ".csv");
                save_csv(path, traces[i], &write_trace_csv);
            }
            std::cout << "wrote " << traces.size() << " traces under " << cond_dir.string()
                      << "\n";
        }
    }
    return 0;
}

int cmd_validate(const Options& opt) {
    RunSpec base;
    base.config = load_model_config(opt.config_path);
    base.total_cycles = opt.cycles;
    base.warmup_cycles = opt.warmup;
    int runs = opt.runs > 0 ? opt.runs : 100;
    std::vector<RunTrace> traces = run_many(base, runs, opt.seed, opt.threads);

    std::vector<ValidationMetrics> metrics;
    metrics.reserve(traces.size());
    for (const RunTrace& trace : traces) metrics.push_back(validation_metrics(trace, opt.window));

    fs::create_directories(opt.out_dir);
    std::cout << "wrote "
              << save_csv(fs::path(opt.out_dir) / "validation.csv", metrics,
                          &write_validation_csv)
              << "\n";
    if (!opt.polls_path.empty()) {
        PollSeries polls = ingest_polls(opt.polls_path);
        std::vector<MetricComparison> comparison = compare_to_polls(metrics, polls);
        std::cout << "wrote "
                  << save_csv(fs::path(opt.out_dir) / "cohen_d.csv", comparison,
                              &write_comparison_csv)
                  << "\n";
    }
    return 0;
}

int cmd_warmup(const Options& opt) {
    RunSpec base;
    base.config = load_model_config(opt.config_path);
    base.total_cycles = opt.cycles;
    base.warmup_cycles = 0;  // the whole series is the object of study
    int runs = opt.runs > 0 ? opt.runs : 10;
    std::vector<RunTrace> traces = run_many(base, runs, opt.seed, opt.threads);

    WarmupEstimate estimate = estimate_warmup(traces, opt.field, opt.smoothing, opt.band);
    fs::create_directories(opt.out_dir);
    std::cout << "wrote "
              << save_csv(fs::path(opt.out_dir) / "warmup.csv", estimate, &write_warmup_csv)
              << "\n";
    std::cout << "suggested_warmup=" << estimate.suggested_warmup << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based model of oligarchic influence on two-party spatial elections"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "JSON config file (defaults apply)");
        cmd->add_option("--seed", opt.seed, "master seed")->capture_default_str();
        cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        cmd->add_option("--threads", opt.threads, "worker threads, 0 = auto")
            ->capture_default_str();
    };

    CLI::App* run_cmd = app.add_subcommand("run", "single run, trace CSV out");
    add_common(run_cmd);
    run_cmd->add_option("--cycles", opt.cycles, "total cycles")->capture_default_str();
    run_cmd->add_option("--warmup", opt.warmup, "warm-up cycles to discard")
        ->capture_default_str();

    CLI::App* exp_cmd = app.add_subcommand("experiment", "multi-run experiment, outcome CSVs out");
    add_common(exp_cmd);
    exp_cmd->add_option("--name", opt.experiment_name, "preconfigured experiment name");
    exp_cmd->add_option("--runs", opt.runs, "runs per condition (override)");
    exp_cmd->add_flag("--trace", opt.emit_traces, "also write every run's trace CSV");

    CLI::App* val_cmd = app.add_subcommand("validate", "support-swing metrics vs polls");
    add_common(val_cmd);
    val_cmd->add_option("--runs", opt.runs, "number of runs (default 100)");
    val_cmd->add_option("--polls", opt.polls_path, "poll CSV (period,red_support,blue_support)");
    val_cmd->add_option("--window", opt.window, "measurement cycles per run to use")
        ->capture_default_str();
    val_cmd->add_option("--cycles", opt.cycles, "total cycles")->capture_default_str();
    val_cmd->add_option("--warmup", opt.warmup, "warm-up cycles to discard")
        ->capture_default_str();

    CLI::App* warm_cmd = app.add_subcommand("warmup", "warm-up length estimate for a field");
    add_common(warm_cmd);
    warm_cmd->add_option("--runs", opt.runs, "number of runs (default 10)");
    warm_cmd->add_option("--field", opt.field, "cycle field to track")->capture_default_str();
    warm_cmd->add_option("--cycles", opt.cycles, "cycles to simulate")->capture_default_str();
    warm_cmd->add_option("--window", opt.smoothing, "moving-average window")
        ->capture_default_str();
    warm_cmd->add_option("--band", opt.band, "relative settling band")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run_cmd->parsed()) return cmd_run(opt);
        if (exp_cmd->parsed()) return cmd_experiment(opt);
        if (val_cmd->parsed()) return cmd_validate(opt);
        if (warm_cmd->parsed()) return cmd_warmup(opt);
        throw std::logic_error("no subcommand dispatched");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

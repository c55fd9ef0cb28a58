// Python bindings for the simulation core. Containers cross the boundary by
// value (pybind11 stl conversions), which keeps the python side free of
// lifetime concerns at the cost of copying traces on attribute access.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "oligo/engine.hpp"
#include "oligo/experiments.hpp"
#include "oligo/io.hpp"
#include "oligo/model.hpp"
#include "oligo/stats.hpp"

namespace py = pybind11;
using namespace oligo;

namespace {

std::span<const double> as_span(const std::vector<double>& v) { return {v.data(), v.size()}; }

template <typename Fn>
std::string render_csv(Fn&& write) {
    std::ostringstream out;
    write(out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_oligo, m) {
    m.doc() = "Agent-based model of oligarch donations, party competition, and voter taxation";

    py::enum_<Variant>(m, "Variant")
        .value("IIM", Variant::IIM)
        .value("PIMM", Variant::PIMM)
        .value("AIMM", Variant::AIMM);

    py::enum_<VoterDistribution>(m, "VoterDistribution")
        .value("Unimodal", VoterDistribution::Unimodal)
        .value("Bimodal", VoterDistribution::Bimodal);

    py::enum_<PartyId>(m, "PartyId").value("Red", PartyId::Red).value("Blue", PartyId::Blue);

    py::enum_<Tails>(m, "Tails")
        .value("TwoSided", Tails::TwoSided)
        .value("OneLower", Tails::OneLower)
        .value("OneUpper", Tails::OneUpper);

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("gdp", &ModelConfig::gdp)
        .def_readwrite("max_pos", &ModelConfig::max_pos)
        .def_readwrite("min_pos", &ModelConfig::min_pos)
        .def_readwrite("oligarch_count", &ModelConfig::oligarch_count)
        .def_readwrite("voter_count", &ModelConfig::voter_count)
        .def_readwrite("oligarch_epsilon", &ModelConfig::oligarch_epsilon)
        .def_readwrite("oligarch_gdp_fraction", &ModelConfig::oligarch_gdp_fraction)
        .def_readwrite("oligarch_initial_donation", &ModelConfig::oligarch_initial_donation)
        .def_readwrite("oligarch_latency", &ModelConfig::oligarch_latency)
        .def_readwrite("oligarch_noise", &ModelConfig::oligarch_noise)
        .def_readwrite("party_difference_factor", &ModelConfig::party_difference_factor)
        .def_readwrite("party_epsilon", &ModelConfig::party_epsilon)
        .def_readwrite("voter_ad_decay_factor", &ModelConfig::voter_ad_decay_factor)
        .def_readwrite("voter_awareness", &ModelConfig::voter_awareness)
        .def_readwrite("voter_gross_income", &ModelConfig::voter_gross_income)
        .def_readwrite("voter_initial_salience", &ModelConfig::voter_initial_salience)
        .def_readwrite("voter_max_tax", &ModelConfig::voter_max_tax)
        .def_readwrite("voter_memory_strength", &ModelConfig::voter_memory_strength)
        .def_readwrite("voter_min_distance_scale", &ModelConfig::voter_min_distance_scale)
        .def_readwrite("voter_olig", &ModelConfig::voter_olig)
        .def_readwrite("variant", &ModelConfig::variant)
        .def_readwrite("swing_voter_fraction", &ModelConfig::swing_voter_fraction)
        .def_readwrite("party_bliss_red", &ModelConfig::party_bliss_red)
        .def_readwrite("party_bliss_blue", &ModelConfig::party_bliss_blue)
        .def_readwrite("oligarch_ideo", &ModelConfig::oligarch_ideo)
        .def_readwrite("oligarch_ideo_olig_ratio", &ModelConfig::oligarch_ideo_olig_ratio)
        .def_readwrite("aimm_ideo_norm_from_bliss", &ModelConfig::aimm_ideo_norm_from_bliss)
        .def_readwrite("voter_distribution", &ModelConfig::voter_distribution)
        .def_readwrite("bimodal_means", &ModelConfig::bimodal_means)
        .def_readwrite("bimodal_sd", &ModelConfig::bimodal_sd)
        .def_readwrite("bimodal_mix", &ModelConfig::bimodal_mix)
        .def_readwrite("allow_null_donation_action", &ModelConfig::allow_null_donation_action)
        .def_readwrite("null_action_threshold", &ModelConfig::null_action_threshold)
        .def_readwrite("fix_party_olig", &ModelConfig::fix_party_olig)
        .def_readwrite("fix_voter_salience", &ModelConfig::fix_voter_salience)
        .def_readwrite("fix_donation_size", &ModelConfig::fix_donation_size)
        .def("validate", &ModelConfig::validate);

    py::class_<RunSpec>(m, "RunSpec")
        .def(py::init<>())
        .def_readwrite("config", &RunSpec::config)
        .def_readwrite("total_cycles", &RunSpec::total_cycles)
        .def_readwrite("warmup_cycles", &RunSpec::warmup_cycles)
        .def_readwrite("seed", &RunSpec::seed)
        .def_readwrite("recorded_fields", &RunSpec::recorded_fields)
        .def("validate", &RunSpec::validate);

    py::class_<CycleRecord>(m, "CycleRecord")
        .def_readonly("cycle", &CycleRecord::cycle)
        .def_readonly("tax_rate", &CycleRecord::tax_rate)
        .def_readonly("tax_collected", &CycleRecord::tax_collected)
        .def_readonly("red_ideo", &CycleRecord::red_ideo)
        .def_readonly("blue_ideo", &CycleRecord::blue_ideo)
        .def_readonly("red_olig", &CycleRecord::red_olig)
        .def_readonly("blue_olig", &CycleRecord::blue_olig)
        .def_readonly("mean_party_ideo", &CycleRecord::mean_party_ideo)
        .def_readonly("mean_party_olig", &CycleRecord::mean_party_olig)
        .def_readonly("party_olig_gap", &CycleRecord::party_olig_gap)
        .def_readonly("mean_voter_salience", &CycleRecord::mean_voter_salience)
        .def_readonly("total_donations", &CycleRecord::total_donations)
        .def_readonly("mean_donated_fraction", &CycleRecord::mean_donated_fraction)
        .def_readonly("mean_donation_size", &CycleRecord::mean_donation_size)
        .def_readonly("mean_oligarch_profit", &CycleRecord::mean_oligarch_profit)
        .def_readonly("incumbent", &CycleRecord::incumbent)
        .def_readonly("red_vote_pct", &CycleRecord::red_vote_pct)
        .def_readonly("winner_closer_to_ideo_center", &CycleRecord::winner_closer_to_ideo_center)
        .def_readonly("winner_higher_olig", &CycleRecord::winner_higher_olig)
        .def_readonly("olig_defeats_center", &CycleRecord::olig_defeats_center);

    py::class_<RunTrace>(m, "RunTrace")
        .def_readonly("spec", &RunTrace::spec)
        .def_readonly("records", &RunTrace::records)
        .def_readonly("summary", &RunTrace::summary)
        .def("is_warmup_cycle", &RunTrace::is_warmup_cycle)
        .def("measurement_cycles", &RunTrace::measurement_cycles);

    m.def("cycle_field_names", [] {
        std::vector<std::string> names;
        for (const CycleFieldInfo& f : cycle_record_fields()) names.emplace_back(f.name);
        return names;
    });
    m.def("derive_run_seed", &derive_run_seed, py::arg("master_seed"), py::arg("run_index"));
    m.def("run", &run, py::arg("spec"));
    m.def("run_many", &run_many, py::arg("spec"), py::arg("count"), py::arg("master_seed"),
          py::arg("threads") = 0);

    py::class_<WarmupEstimate>(m, "WarmupEstimate")
        .def_readonly("suggested_warmup", &WarmupEstimate::suggested_warmup)
        .def_readonly("cross_run_mean", &WarmupEstimate::cross_run_mean)
        .def_readonly("moving_average", &WarmupEstimate::moving_average);

    m.def(
        "estimate_warmup",
        [](const std::vector<RunTrace>& traces, const std::string& field, int smoothing_window,
           double rel_band) { return estimate_warmup(traces, field, smoothing_window, rel_band); },
        py::arg("traces"), py::arg("field"), py::arg("smoothing_window"),
        py::arg("rel_band") = 0.05);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("name", &ExperimentSpec::name)
        .def_readwrite("config", &ExperimentSpec::config)
        .def_readwrite("sweep_parameter", &ExperimentSpec::sweep_parameter)
        .def_readwrite("sweep_values", &ExperimentSpec::sweep_values)
        .def_readwrite("runs_per_condition", &ExperimentSpec::runs_per_condition)
        .def_readwrite("total_cycles", &ExperimentSpec::total_cycles)
        .def_readwrite("warmup_cycles", &ExperimentSpec::warmup_cycles)
        .def_readwrite("master_seed", &ExperimentSpec::master_seed)
        .def("validate", &ExperimentSpec::validate)
        .def("condition_configs", &ExperimentSpec::condition_configs)
        .def("condition_label", &ExperimentSpec::condition_label);

    py::class_<TestResult>(m, "TestResult")
        .def_readonly("statistic", &TestResult::statistic)
        .def_readonly("degrees_of_freedom", &TestResult::degrees_of_freedom)
        .def_readonly("p_value", &TestResult::p_value)
        .def_readonly("ci_lo", &TestResult::ci_lo)
        .def_readonly("ci_hi", &TestResult::ci_hi)
        .def_readonly("tails", &TestResult::tails);

    py::class_<ConditionOutcome>(m, "ConditionOutcome")
        .def_readonly("label", &ConditionOutcome::label)
        .def_readonly("sweep_value", &ConditionOutcome::sweep_value)
        .def_readonly("runs", &ConditionOutcome::runs)
        .def_readonly("means", &ConditionOutcome::means)
        .def_readonly("per_run", &ConditionOutcome::per_run);

    py::class_<SweepCorrelation>(m, "SweepCorrelation")
        .def_readonly("outcome", &SweepCorrelation::outcome)
        .def_readonly("spearman", &SweepCorrelation::spearman)
        .def_readonly("points", &SweepCorrelation::points);

    py::class_<PairwiseTest>(m, "PairwiseTest")
        .def_readonly("outcome", &PairwiseTest::outcome)
        .def_readonly("baseline", &PairwiseTest::baseline)
        .def_readonly("condition", &PairwiseTest::condition)
        .def_readonly("test", &PairwiseTest::test)
        .def_readonly("cohens_d", &PairwiseTest::cohens_d)
        .def_readonly("degenerate", &PairwiseTest::degenerate);

    py::class_<OutcomeTable>(m, "OutcomeTable")
        .def_readonly("spec", &OutcomeTable::spec)
        .def_readonly("conditions", &OutcomeTable::conditions)
        .def_readonly("correlations", &OutcomeTable::correlations)
        .def_readonly("tests", &OutcomeTable::tests);

    m.def("outcome_names", &outcome_names);
    m.def("is_sweep_parameter", &is_sweep_parameter, py::arg("name"));
    m.def("apply_sweep_parameter", &apply_sweep_parameter, py::arg("config"), py::arg("name"),
          py::arg("value"));
    m.def("run_outcomes", &run_outcomes, py::arg("trace"));
    m.def("condition_master_seed", &condition_master_seed, py::arg("master_seed"),
          py::arg("condition_index"));
    m.def("olig_defeats_center_fraction", &olig_defeats_center_fraction, py::arg("trace"));
    m.def("run_experiment", &run_experiment, py::arg("spec"), py::arg("threads") = 0);
    m.def("named_experiment", &named_experiment, py::arg("name"), py::arg("master_seed"));
    m.def("named_experiment_names", &named_experiment_names);

    py::class_<ValidationMetrics>(m, "ValidationMetrics")
        .def_readonly("mean_support", &ValidationMetrics::mean_support)
        .def_readonly("min_support", &ValidationMetrics::min_support)
        .def_readonly("max_support", &ValidationMetrics::max_support)
        .def_readonly("mean_abs_change", &ValidationMetrics::mean_abs_change)
        .def_readonly("max_abs_change", &ValidationMetrics::max_abs_change)
        .def_readonly("sd_change", &ValidationMetrics::sd_change);

    py::class_<PollRecord>(m, "PollRecord")
        .def(py::init<>())
        .def_readwrite("period", &PollRecord::period)
        .def_readwrite("red_support", &PollRecord::red_support)
        .def_readwrite("blue_support", &PollRecord::blue_support);

    py::class_<PollSeries>(m, "PollSeries")
        .def(py::init<>())
        .def_readwrite("records", &PollSeries::records);

    py::class_<MetricComparison>(m, "MetricComparison")
        .def_readonly("metric", &MetricComparison::metric)
        .def_readonly("model_mean", &MetricComparison::model_mean)
        .def_readonly("model_sd", &MetricComparison::model_sd)
        .def_readonly("reference", &MetricComparison::reference)
        .def_readonly("cohens_d", &MetricComparison::cohens_d);

    m.def("validation_metrics", &validation_metrics, py::arg("trace"), py::arg("window") = 120);
    m.def("validation_metric_names", &validation_metric_names);
    m.def("poll_metrics", &poll_metrics, py::arg("polls"));
    m.def("compare_to_polls", &compare_to_polls, py::arg("model_runs"), py::arg("polls"));

    // File and text ingestion. parse_config returns whichever of the two
    // config types the file contains.
    m.def("parse_config", [](const std::string& path) { return parse_config(path); },
          py::arg("path"));
    m.def("parse_model_config_text", &parse_model_config_text, py::arg("text"),
          py::arg("origin") = "<string>");
    m.def("parse_experiment_text", &parse_experiment_text, py::arg("text"),
          py::arg("origin") = "<string>");
    m.def("ingest_polls", &ingest_polls, py::arg("path"));
    m.def(
        "parse_polls_text",
        [](const std::string& text, const std::string& origin) {
            std::istringstream in(text);
            return parse_polls(in, origin);
        },
        py::arg("text"), py::arg("origin") = "<string>");

    // CSV renderers, returned as strings.
    m.def("trace_csv", [](const RunTrace& t) {
        return render_csv([&](std::ostream& o) { write_trace_csv(t, o); });
    });
    m.def("outcome_summary_csv", [](const OutcomeTable& t) {
        return render_csv([&](std::ostream& o) { write_outcome_summary_csv(t, o); });
    });
    m.def("correlations_csv", [](const OutcomeTable& t) {
        return render_csv([&](std::ostream& o) { write_correlations_csv(t, o); });
    });
    m.def("tests_csv", [](const OutcomeTable& t) {
        return render_csv([&](std::ostream& o) { write_tests_csv(t, o); });
    });
    m.def("validation_csv", [](const std::vector<ValidationMetrics>& runs) {
        return render_csv([&](std::ostream& o) { write_validation_csv(runs, o); });
    });
    m.def("comparison_csv", [](const std::vector<MetricComparison>& rows) {
        return render_csv([&](std::ostream& o) { write_comparison_csv(rows, o); });
    });
    m.def("warmup_csv", [](const WarmupEstimate& e) {
        return render_csv([&](std::ostream& o) { write_warmup_csv(e, o); });
    });
    m.def("polls_csv", [](const PollSeries& p) {
        return render_csv([&](std::ostream& o) { write_polls_csv(p, o); });
    });

    // Statistics helpers on plain lists.
    m.def(
        "welch_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b, Tails tails) {
            return welch_t_test(as_span(a), as_span(b), tails);
        },
        py::arg("a"), py::arg("b"), py::arg("tails") = Tails::TwoSided);
    m.def(
        "welch_t_test",
        [](const std::vector<double>& a, double reference_mean, Tails tails) {
            return welch_t_test(as_span(a), reference_mean, tails);
        },
        py::arg("a"), py::arg("reference_mean"), py::arg("tails") = Tails::TwoSided);
    m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
        return spearman(as_span(x), as_span(y));
    });
    m.def(
        "cross_correlation",
        [](const std::vector<double>& x, const std::vector<double>& y, int max_lag) {
            return cross_correlation(as_span(x), as_span(y), max_lag);
        },
        py::arg("x"), py::arg("y"), py::arg("max_lag") = 5);

    py::class_<LagCorrelationSummary>(m, "LagCorrelationSummary")
        .def_readonly("lag", &LagCorrelationSummary::lag)
        .def_readonly("mean", &LagCorrelationSummary::mean)
        .def_readonly("ci_lo", &LagCorrelationSummary::ci_lo)
        .def_readonly("ci_hi", &LagCorrelationSummary::ci_hi);

    m.def("cross_correlation_summary", &cross_correlation_summary, py::arg("per_run"),
          py::arg("max_lag"));
    m.def("cohens_d", [](const std::vector<double>& a, const std::vector<double>& b) {
        return cohens_d(as_span(a), as_span(b));
    });
    m.def("cohens_d", [](const std::vector<double>& a, double reference) {
        return cohens_d(as_span(a), reference);
    });
    m.def("fisher_r_to_z_compare", &fisher_r_to_z_compare, py::arg("r1"), py::arg("n1"),
          py::arg("r2"), py::arg("n2"));

    py::class_<TukeySummary>(m, "TukeySummary")
        .def_readonly("lower_staple", &TukeySummary::lower_staple)
        .def_readonly("lower_quartile", &TukeySummary::lower_quartile)
        .def_readonly("median", &TukeySummary::median)
        .def_readonly("upper_quartile", &TukeySummary::upper_quartile)
        .def_readonly("upper_staple", &TukeySummary::upper_staple);

    m.def("tukey_summary",
          [](const std::vector<double>& sample) { return tukey_summary(as_span(sample)); });
    m.def("t_cdf", &t_cdf, py::arg("t"), py::arg("df"));
    m.def("t_quantile", &t_quantile, py::arg("p"), py::arg("df"));
}

#include "oligo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace oligo {

void RunSpec::validate() const {
    config.validate();
    if (total_cycles <= 0) throw std::invalid_argument("total_cycles: must be positive");
    if (warmup_cycles < 0) throw std::invalid_argument("warmup_cycles: must be non-negative");
    if (warmup_cycles >= total_cycles)
        throw std::invalid_argument("warmup_cycles: must be less than total_cycles");
    for (const std::string& f : recorded_fields) {
        if (find_cycle_field(f) == nullptr)
            throw std::invalid_argument("recorded_fields: unknown field \"" + f + "\"");
    }
}

const std::vector<CycleFieldInfo>& cycle_record_fields() {
    static const std::vector<CycleFieldInfo> fields = {
        {"cycle", FieldKind::Index,
         [](const CycleRecord& r) { return static_cast<double>(r.cycle); }},
        {"tax_rate", FieldKind::Numeric, [](const CycleRecord& r) { return r.tax_rate; }},
        {"tax_collected", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.tax_collected; }},
        {"red_ideo", FieldKind::Numeric, [](const CycleRecord& r) { return r.red_ideo; }},
        {"blue_ideo", FieldKind::Numeric, [](const CycleRecord& r) { return r.blue_ideo; }},
        {"red_olig", FieldKind::Numeric, [](const CycleRecord& r) { return r.red_olig; }},
        {"blue_olig", FieldKind::Numeric, [](const CycleRecord& r) { return r.blue_olig; }},
        {"mean_party_ideo", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.mean_party_ideo; }},
        {"mean_party_olig", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.mean_party_olig; }},
        {"party_olig_gap", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.party_olig_gap; }},
        {"mean_voter_salience", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.mean_voter_salience; }},
        {"total_donations", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.total_donations; }},
        {"mean_donated_fraction", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.mean_donated_fraction; }},
        {"mean_donation_size", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.mean_donation_size; }},
        {"mean_oligarch_profit", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.mean_oligarch_profit; }},
        {"incumbent", FieldKind::Party,
         [](const CycleRecord& r) { return r.incumbent == PartyId::Red ? 0.0 : 1.0; }},
        {"red_vote_pct", FieldKind::Numeric,
         [](const CycleRecord& r) { return r.red_vote_pct; }},
        {"winner_closer_to_ideo_center", FieldKind::Flag,
         [](const CycleRecord& r) { return r.winner_closer_to_ideo_center ? 1.0 : 0.0; }},
        {"winner_higher_olig", FieldKind::Flag,
         [](const CycleRecord& r) { return r.winner_higher_olig ? 1.0 : 0.0; }},
        {"olig_defeats_center", FieldKind::Flag,
         [](const CycleRecord& r) { return r.olig_defeats_center ? 1.0 : 0.0; }},
    };
    return fields;
}

const CycleFieldInfo* find_cycle_field(std::string_view name) {
    for (const CycleFieldInfo& f : cycle_record_fields())
        if (name == f.name) return &f;
    return nullptr;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, long run_index) {
    return RandomStream(master_seed).derive("run").derive(static_cast<std::uint64_t>(run_index))
        .next_u64();
}

CycleRecord step(WorldState& w, const AgentOrder* order) {
    update_oligarch_donations(w, order);
    vote(w, order);
    redistribute(w);
    update_voter_olig_salience(w, order);
    update_party_policies(w);

    CycleRecord r;
    r.cycle = w.cycle;
    r.tax_rate = w.tax_rate;
    r.tax_collected = w.tax_collected;
    r.red_ideo = w.red().ideo;
    r.blue_ideo = w.blue().ideo;
    r.red_olig = w.red().olig;
    r.blue_olig = w.blue().olig;
    r.mean_party_ideo = 0.5 * (w.red().ideo + w.blue().ideo);
    r.mean_party_olig = 0.5 * (w.red().olig + w.blue().olig);
    r.party_olig_gap = std::abs(w.red().olig - w.blue().olig);
    double salience_sum = 0.0;
    for (const Voter& v : w.voters) salience_sum += v.olig_salience;
    r.mean_voter_salience = salience_sum / static_cast<double>(w.voters.size());
    r.total_donations = w.total_donations;
    r.mean_donated_fraction = w.mean_donation_size * w.scaled_difference;
    r.mean_donation_size = w.mean_donation_size;
    r.mean_oligarch_profit =
        (w.tax_collected - w.total_donations) / static_cast<double>(w.oligarchs.size());
    r.incumbent = w.incumbent;
    r.red_vote_pct = w.red_vote_pct;
    r.winner_closer_to_ideo_center = w.winner_closer_to_ideo_center;
    r.winner_higher_olig = w.winner_higher_olig;
    r.olig_defeats_center = w.olig_defeats_center;

    ++w.cycle;
    return r;
}

namespace {

bool field_selected(const RunSpec& spec, const char* name) {
    if (spec.recorded_fields.empty()) return true;
    return std::find(spec.recorded_fields.begin(), spec.recorded_fields.end(), name) !=
           spec.recorded_fields.end();
}

}  // namespace

RunTrace run(const RunSpec& spec) {
    spec.validate();

    RunTrace trace;
    trace.spec = spec;
    trace.records.reserve(static_cast<size_t>(spec.total_cycles));

    WorldState world = init_world(spec.config, RandomStream(spec.seed));
    for (long c = 0; c < spec.total_cycles; ++c) trace.records.push_back(step(world));

    const double n = static_cast<double>(trace.measurement_cycles());
    for (const CycleFieldInfo& f : cycle_record_fields()) {
        if (f.kind == FieldKind::Index || f.kind == FieldKind::Party) continue;
        if (!field_selected(spec, f.name)) continue;
        double sum = 0.0;
        for (long c = spec.warmup_cycles; c < spec.total_cycles; ++c)
            sum += f.value(trace.records[static_cast<size_t>(c)]);
        trace.summary[f.name] = sum / n;
    }
    return trace;
}

std::vector<RunTrace> run_many(const RunSpec& base, int count, std::uint64_t master_seed,
                               int threads) {
    if (count < 0) throw std::invalid_argument("run count must be non-negative");
    if (threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    threads = std::min(threads, std::max(count, 1));

    std::vector<RunTrace> traces(static_cast<size_t>(count));
    auto worker = [&](int first) {
        for (int i = first; i < count; i += threads) {
            RunSpec spec = base;
            spec.seed = derive_run_seed(master_seed, i);
            traces[static_cast<size_t>(i)] = run(spec);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (std::thread& t : pool) t.join();
    }
    return traces;
}

WarmupEstimate estimate_warmup(const std::vector<RunTrace>& traces, std::string_view field,
                               int smoothing_window, double rel_band) {
    if (traces.size() < 2)
        throw std::invalid_argument("estimate_warmup needs at least 2 traces");
    if (smoothing_window < 1)
        throw std::invalid_argument("smoothing_window must be at least 1");
    const CycleFieldInfo* info = find_cycle_field(field);
    if (info == nullptr || info->kind == FieldKind::Index || info->kind == FieldKind::Party)
        throw std::invalid_argument("estimate_warmup: unknown field \"" + std::string(field) +
                                    "\"");
    const size_t n = traces.front().records.size();
    for (const RunTrace& t : traces) {
        if (t.records.size() != n)
            throw std::invalid_argument("estimate_warmup: traces have differing lengths");
        if (!field_selected(t.spec, info->name))
            throw std::invalid_argument("estimate_warmup: field \"" + std::string(field) +
                                        "\" was not recorded");
    }
    if (n == 0) throw std::invalid_argument("estimate_warmup: traces are empty");

    WarmupEstimate est;
    est.cross_run_mean.resize(n);
    for (size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        for (const RunTrace& t : traces) sum += info->value(t.records[c]);
        est.cross_run_mean[c] = sum / static_cast<double>(traces.size());
    }

    const long half = smoothing_window / 2;
    est.moving_average.resize(n);
    for (long i = 0; i < static_cast<long>(n); ++i) {
        long lo = std::max<long>(0, i - half);
        long hi = std::min<long>(static_cast<long>(n) - 1, i + half);
        double sum = 0.0;
        for (long j = lo; j <= hi; ++j) sum += est.cross_run_mean[static_cast<size_t>(j)];
        est.moving_average[static_cast<size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }

    const long quarter = std::max<long>(1, static_cast<long>(n) / 4);
    double ref = 0.0;
    for (long i = static_cast<long>(n) - quarter; i < static_cast<long>(n); ++i)
        ref += est.moving_average[static_cast<size_t>(i)];
    ref /= static_cast<double>(quarter);

    const double band = rel_band * std::max(std::abs(ref), 1e-12);
    long suggested = 0;
    for (long i = static_cast<long>(n) - 1; i >= 0; --i) {
        if (std::abs(est.moving_average[static_cast<size_t>(i)] - ref) > band) {
            suggested = i + 1;
            break;
        }
    }
    est.suggested_warmup = suggested;
    return est;
}

}  // namespace oligo

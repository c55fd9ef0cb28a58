#include "oligo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oligo {

namespace {

constexpr int kRedrawCap = 1000;

double clamp_pos(double v, const ModelConfig& cfg) {
    return std::clamp(v, cfg.min_pos, cfg.max_pos);
}

double position_range(const ModelConfig& cfg) { return cfg.max_pos - cfg.min_pos; }

double ideo_center(const ModelConfig& cfg) { return 0.5 * (cfg.min_pos + cfg.max_pos); }

// Normal draw rejected until it lands inside [min_pos, max_pos].
double bounded_normal(RandomStream& s, double mean, double sd, const ModelConfig& cfg) {
    for (int i = 0; i < kRedrawCap; ++i) {
        double v = s.normal(mean, sd);
        if (v >= cfg.min_pos && v <= cfg.max_pos) return v;
    }
    throw std::invalid_argument(
        "position draw failed " + std::to_string(kRedrawCap) +
        " redraws; distribution parameters do not fit [min_pos, max_pos]");
}

double draw_voter_ideo(RandomStream& s, const ModelConfig& cfg) {
    if (cfg.voter_distribution == VoterDistribution::Unimodal) {
        return bounded_normal(s, 0.0, position_range(cfg) / 6.0, cfg);
    }
    // Mixture of two normals; a draw outside the range rejects the component
    // coin as well.
    for (int i = 0; i < kRedrawCap; ++i) {
        double mean = s.bernoulli(cfg.bimodal_mix) ? cfg.bimodal_means[0] : cfg.bimodal_means[1];
        double v = s.normal(mean, cfg.bimodal_sd);
        if (v >= cfg.min_pos && v <= cfg.max_pos) return v;
    }
    throw std::invalid_argument("voter ideo draw failed 1000 redraws; check bimodal parameters");
}

std::vector<double> draw_oligarch_incomes(RandomStream& init_stream, const ModelConfig& cfg) {
    const int n = cfg.oligarch_count;
    const double target_mean = cfg.gdp * cfg.oligarch_gdp_fraction / n;
    const double target_var = (target_mean / 2.0) * (target_mean / 2.0);
    const double mu =
        std::log(target_mean * target_mean / std::sqrt(target_var + target_mean * target_mean));
    const double sigma = std::sqrt(std::log(1.0 + target_var / (target_mean * target_mean)));

    for (int attempt = 0; attempt < kRedrawCap; ++attempt) {
        RandomStream s = init_stream.derive("olig_income").derive(attempt);
        std::vector<double> incomes(n);
        for (int i = 0; i < n; ++i) incomes[i] = s.lognormal(mu, sigma);
        double mean = std::accumulate(incomes.begin(), incomes.end(), 0.0) / n;
        bool ok = true;
        for (double& v : incomes) {
            v -= mean - target_mean;  // first-moment matching
            if (v <= 0.0) ok = false;
        }
        if (ok) return incomes;
    }
    throw std::invalid_argument(
        "oligarch income draw failed 1000 redraws; oligarch_gdp_fraction/oligarch_count "
        "produce a distribution with frequent non-positive incomes");
}

double scaled_difference_from_gap(double normalized_gap, const ModelConfig& cfg) {
    return 1.0 - std::exp(cfg.party_difference_factor * normalized_gap);
}

double ad_scale(double donations, const ModelConfig& cfg) {
    if (donations <= 0.0) return 1.0;
    return cfg.voter_min_distance_scale +
           (1.0 - cfg.voter_min_distance_scale) * std::exp(cfg.voter_ad_decay_factor * donations);
}

double base_distance(const Voter& voter, const Party& party, const ModelConfig& cfg) {
    double sal = voter.olig_salience;
    return std::abs(voter.ideo - party.ideo) * (1.0 - sal) +
           std::abs(cfg.voter_olig - party.olig) * sal;
}

bool latency_fires(long cycle, int agent_index, const ModelConfig& cfg) {
    return (cycle + agent_index) % cfg.oligarch_latency == 0;
}

// Index sequence for a stage loop: the caller's permutation, or 0..n-1.
std::vector<int> stage_order(const std::vector<int>* requested, int n) {
    if (requested != nullptr && !requested->empty()) {
        if (static_cast<int>(requested->size()) != n)
            throw std::invalid_argument("agent order length does not match population");
        return *requested;
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

// Movement bias toward a bliss point when the party has wandered to its
// wrong side; ~0 at the bliss point, approaches party_epsilon at the far edge.
double bliss_bias(double distance_from_bliss, const ModelConfig& cfg) {
    return cfg.party_epsilon / (1.0 + std::exp((50.0 - distance_from_bliss) / 8.0));
}

}  // namespace

std::string to_string(PartyId id) { return id == PartyId::Red ? "red" : "blue"; }

WorldState init_world(const ModelConfig& config, RandomStream run_stream) {
    config.validate();

    WorldState w;
    w.config = config;
    w.donation_stream = run_stream.derive("donations");
    w.vote_stream = run_stream.derive("vote");
    w.salience_stream = run_stream.derive("salience");
    w.party_stream = run_stream.derive("parties");
    w.tie_stream = run_stream.derive("ties");

    RandomStream init = run_stream.derive("init");
    const bool positional_variant = config.variant != Variant::IIM;

    for (int p = 0; p < 2; ++p) {
        RandomStream s = init.derive("party").derive(p);
        Party party;
        party.id = p == 0 ? PartyId::Red : PartyId::Blue;
        party.ideo = bounded_normal(s, 0.0, position_range(config) / 6.0, config);
        party.olig = bounded_normal(s, 0.0, position_range(config) / 6.0, config);
        if (positional_variant)
            party.ideo = p == 0 ? config.party_bliss_red : config.party_bliss_blue;
        party.last_increase_ideo = s.coin();
        party.last_increase_olig = s.coin();
        w.parties[p] = party;
    }

    w.voters.resize(config.voter_count);
    for (int i = 0; i < config.voter_count; ++i) {
        RandomStream s = init.derive("voter").derive(i);
        Voter& v = w.voters[i];
        v.ideo = draw_voter_ideo(s, config);
        v.olig_salience = config.voter_initial_salience;
        v.is_loyalist = positional_variant && !s.bernoulli(config.swing_voter_fraction);
    }

    std::vector<double> incomes = draw_oligarch_incomes(init, config);
    w.oligarchs.resize(config.oligarch_count);
    for (int i = 0; i < config.oligarch_count; ++i) {
        RandomStream s = init.derive("oligarch").derive(i);
        Oligarch& o = w.oligarchs[i];
        o.agent_index = i;
        o.gross_income = incomes[i];
        o.donation_size = config.fix_donation_size
                              ? config.oligarch_initial_donation
                              : s.uniform(0.0, config.oligarch_initial_donation);
        o.last_donation_increased = s.coin();
    }

    return w;
}

double party_olig_difference_scaled(double red_olig, double blue_olig,
                                    const ModelConfig& config) {
    double gap = std::abs(red_olig - blue_olig) / position_range(config);
    return scaled_difference_from_gap(gap, config);
}

double voter_distance(const Voter& voter, const Party& party, double donations_to_party,
                      const ModelConfig& config) {
    return base_distance(voter, party, config) * ad_scale(donations_to_party, config);
}

AimmChoice aimm_party_choice(const Party& red, const Party& blue, const ModelConfig& config,
                             RandomStream& tie_stream) {
    if (config.variant != Variant::AIMM)
        throw std::logic_error("aimm_party_choice called under a non-AIMM variant");

    const double ratio = config.oligarch_ideo_olig_ratio;
    const double red_olig_dist = std::abs(red.olig - config.max_pos);
    const double blue_olig_dist = std::abs(blue.olig - config.max_pos);
    const double red_ideo_dist = std::abs(red.ideo - config.oligarch_ideo);
    const double blue_ideo_dist = std::abs(blue.ideo - config.oligarch_ideo);

    const double red_weighted = (1.0 - ratio) * red_olig_dist + ratio * red_ideo_dist;
    const double blue_weighted = (1.0 - ratio) * blue_olig_dist + ratio * blue_ideo_dist;

    AimmChoice choice;
    if (red_weighted < blue_weighted)
        choice.chosen = PartyId::Red;
    else if (blue_weighted < red_weighted)
        choice.chosen = PartyId::Blue;
    else
        choice.chosen = tie_stream.coin() ? PartyId::Red : PartyId::Blue;

    const double olig_norm = position_range(config);
    const double ideo_norm = config.aimm_ideo_norm_from_bliss
                                 ? config.oligarch_ideo - config.min_pos
                                 : position_range(config);
    choice.overall_difference = std::abs(((red_olig_dist - blue_olig_dist) / olig_norm +
                                          (red_ideo_dist - blue_ideo_dist) / ideo_norm) /
                                         2.0);
    return choice;
}

double update_oligarch_donations(WorldState& w, const AgentOrder* order) {
    const ModelConfig& cfg = w.config;

    double scaled = 0.0;
    std::optional<PartyId> beneficiary;
    if (cfg.variant == Variant::AIMM) {
        RandomStream tie = w.tie_stream.derive(static_cast<std::uint64_t>(w.cycle), 0);
        AimmChoice choice = aimm_party_choice(w.red(), w.blue(), cfg, tie);
        scaled = scaled_difference_from_gap(choice.overall_difference, cfg);
        beneficiary = choice.chosen;
    } else {
        scaled = party_olig_difference_scaled(w.red().olig, w.blue().olig, cfg);
        if (w.red().olig > w.blue().olig)
            beneficiary = PartyId::Red;
        else if (w.blue().olig > w.red().olig)
            beneficiary = PartyId::Blue;
    }

    std::vector<double> donated(w.oligarchs.size(), 0.0);
    for (int i : stage_order(order ? &order->oligarchs : nullptr,
                             static_cast<int>(w.oligarchs.size()))) {
        Oligarch& o = w.oligarchs[static_cast<size_t>(i)];
        if (!cfg.fix_donation_size && latency_fires(w.cycle, o.agent_index, cfg)) {
            double spend_now = o.gross_income * o.donation_size * scaled;
            double current_profit = o.last_subsidy - spend_now;
            bool null_action =
                cfg.allow_null_donation_action &&
                std::abs(current_profit - o.profit_at_last_update) <= cfg.null_action_threshold;
            if (null_action) {
                o.profit_at_last_update = current_profit;
            } else {
                bool profit_increased = current_profit > o.profit_at_last_update;
                bool will_increase = o.last_donation_increased == profit_increased;
                RandomStream s = w.donation_stream.derive(static_cast<std::uint64_t>(w.cycle),
                                                          static_cast<std::uint64_t>(o.agent_index));
                if (s.bernoulli(cfg.oligarch_noise)) will_increase = !will_increase;
                o.donation_size = std::clamp(
                    o.donation_size + (will_increase ? cfg.oligarch_epsilon : -cfg.oligarch_epsilon),
                    0.0, 1.0);
                o.last_donation_increased = will_increase;
                o.profit_at_last_update = current_profit;
            }
        }
        donated[static_cast<size_t>(o.agent_index)] = o.gross_income * o.donation_size * scaled;
    }

    // Canonical-order reduction keeps the total identical under permutations.
    double total = std::accumulate(donated.begin(), donated.end(), 0.0);
    double size_sum = 0.0;
    for (const Oligarch& o : w.oligarchs) size_sum += o.donation_size;

    w.red().donations_received_current_cycle = 0.0;
    w.blue().donations_received_current_cycle = 0.0;
    if (beneficiary)
        w.parties[static_cast<size_t>(*beneficiary)].donations_received_current_cycle = total;

    w.total_donations = total;
    w.scaled_difference = scaled;
    w.mean_donation_size = size_sum / static_cast<double>(w.oligarchs.size());
    w.donation_beneficiary = beneficiary;
    return total;
}

void vote(WorldState& w, const AgentOrder* order) {
    const ModelConfig& cfg = w.config;
    Party& red = w.red();
    Party& blue = w.blue();

    const double red_scale =
        ad_scale(red.donations_received_current_cycle, cfg);
    const double blue_scale =
        ad_scale(blue.donations_received_current_cycle, cfg);

    int red_votes = 0;
    for (int i :
         stage_order(order ? &order->voters : nullptr, static_cast<int>(w.voters.size()))) {
        Voter& v = w.voters[static_cast<size_t>(i)];
        double d_red, d_blue;
        if (v.is_loyalist) {
            d_red = std::abs(v.ideo - red.ideo);
            d_blue = std::abs(v.ideo - blue.ideo);
        } else {
            d_red = base_distance(v, red, cfg) * red_scale;
            d_blue = base_distance(v, blue, cfg) * blue_scale;
        }
        PartyId choice;
        if (d_red < d_blue) {
            choice = PartyId::Red;
        } else if (d_blue < d_red) {
            choice = PartyId::Blue;
        } else {
            RandomStream s =
                w.vote_stream.derive(static_cast<std::uint64_t>(w.cycle), static_cast<std::uint64_t>(i));
            choice = s.coin() ? PartyId::Red : PartyId::Blue;
        }
        v.last_vote = choice;
        if (choice == PartyId::Red) ++red_votes;
    }
    int blue_votes = static_cast<int>(w.voters.size()) - red_votes;

    red.votes_previous = red.votes_current;
    blue.votes_previous = blue.votes_current;
    red.votes_current = red_votes;
    blue.votes_current = blue_votes;

    PartyId incumbent;
    if (red_votes > blue_votes) {
        incumbent = PartyId::Red;
    } else if (blue_votes > red_votes) {
        incumbent = PartyId::Blue;
    } else {
        RandomStream s = w.tie_stream.derive(static_cast<std::uint64_t>(w.cycle), 1);
        incumbent = s.coin() ? PartyId::Red : PartyId::Blue;
    }
    red.is_incumbent = incumbent == PartyId::Red;
    blue.is_incumbent = !red.is_incumbent;

    const Party& winner = w.parties[static_cast<size_t>(incumbent)];
    const Party& loser = w.parties[static_cast<size_t>(opponent_of(incumbent))];
    const double center = ideo_center(cfg);
    w.incumbent = incumbent;
    w.red_vote_pct = 100.0 * red_votes / static_cast<double>(w.voters.size());
    w.winner_higher_olig = winner.olig > loser.olig;
    w.winner_closer_to_ideo_center = std::abs(winner.ideo - center) < std::abs(loser.ideo - center);
    w.olig_defeats_center =
        w.winner_higher_olig && std::abs(winner.ideo - center) > std::abs(loser.ideo - center);
}

void redistribute(WorldState& w) {
    const ModelConfig& cfg = w.config;
    const Party& incumbent = w.parties[static_cast<size_t>(w.incumbent)];

    double rate = (cfg.voter_max_tax / 2.0) * (1.0 + incumbent.olig / cfg.max_pos);
    rate = std::clamp(rate, 0.0, cfg.voter_max_tax);
    double collected = rate * cfg.voter_count * cfg.voter_gross_income;

    const double oligarch_income_total = cfg.gdp * cfg.oligarch_gdp_fraction;
    for (Oligarch& o : w.oligarchs) {
        if (latency_fires(w.cycle, o.agent_index, cfg))
            o.last_subsidy = collected * o.gross_income / oligarch_income_total;
    }

    w.tax_rate = rate;
    w.tax_collected = collected;
}

void update_voter_olig_salience(WorldState& w, const AgentOrder* order) {
    const ModelConfig& cfg = w.config;
    if (cfg.fix_voter_salience) return;

    const double notice_p = std::pow(w.tax_rate, cfg.voter_awareness);
    for (int i :
         stage_order(order ? &order->voters : nullptr, static_cast<int>(w.voters.size()))) {
        Voter& v = w.voters[static_cast<size_t>(i)];
        RandomStream s =
            w.salience_stream.derive(static_cast<std::uint64_t>(w.cycle), static_cast<std::uint64_t>(i));
        double decayed = v.olig_salience * cfg.voter_memory_strength;
        if (s.bernoulli(notice_p)) {
            double headroom = std::max(0.0, w.tax_rate - decayed);
            v.olig_salience = decayed + s.uniform(0.0, headroom);
        } else {
            v.olig_salience = decayed;
        }
    }
}

void update_party_policies(WorldState& w) {
    const ModelConfig& cfg = w.config;
    const bool positional_variant = cfg.variant != Variant::IIM;

    // Simultaneous moves: both parties read the opponent's pre-update
    // position, so nothing depends on which party is processed first. Two
    // individually legal inward moves can still cross each other; the pair
    // guard after the loop reverts both ideo moves in that corner, keeping
    // red.ideo > blue.ideo at every cycle.
    const std::array<Party, 2> before = w.parties;
    std::array<double, 2> new_ideo = {before[0].ideo, before[1].ideo};
    for (int p = 0; p < 2; ++p) {
        Party& party = w.parties[static_cast<size_t>(p)];
        const Party& opponent = before[static_cast<size_t>(1 - p)];

        bool increased = party.votes_current > party.votes_previous;
        bool inc_ideo = party.last_increase_ideo;
        bool inc_olig = party.last_increase_olig;
        if (!increased) {
            RandomStream s =
                w.party_stream.derive(static_cast<std::uint64_t>(w.cycle), static_cast<std::uint64_t>(p));
            double r = s.uniform01();
            if (r < 0.5) {
                inc_ideo = !inc_ideo;
                inc_olig = !inc_olig;
            } else if (r < 0.75) {
                inc_ideo = !inc_ideo;
            } else {
                inc_olig = !inc_olig;
            }
        }
        party.last_increase_ideo = inc_ideo;
        party.last_increase_olig = inc_olig;

        double cand_ideo =
            clamp_pos(party.ideo + (inc_ideo ? cfg.party_epsilon : -cfg.party_epsilon), cfg);
        if (positional_variant) {
            bool crosses = party.id == PartyId::Red ? cand_ideo <= opponent.ideo
                                                    : cand_ideo >= opponent.ideo;
            if (crosses) {
                // Refuse the move outright; the bias only shapes real moves.
                cand_ideo = party.ideo;
            } else if (party.id == PartyId::Red && party.ideo < cfg.party_bliss_red) {
                // Pull back toward the bliss point from its wrong side. The
                // bias points away from the opponent, so no recheck needed.
                cand_ideo =
                    clamp_pos(cand_ideo + bliss_bias(cfg.party_bliss_red - party.ideo, cfg), cfg);
            } else if (party.id == PartyId::Blue && party.ideo > cfg.party_bliss_blue) {
                cand_ideo =
                    clamp_pos(cand_ideo - bliss_bias(party.ideo - cfg.party_bliss_blue, cfg), cfg);
            }
        }
        new_ideo[static_cast<size_t>(p)] = cand_ideo;

        if (!cfg.fix_party_olig)
            party.olig =
                clamp_pos(party.olig + (inc_olig ? cfg.party_epsilon : -cfg.party_epsilon), cfg);
    }

    if (positional_variant && new_ideo[0] <= new_ideo[1]) {
        new_ideo[0] = before[0].ideo;
        new_ideo[1] = before[1].ideo;
    }
    w.parties[0].ideo = new_ideo[0];
    w.parties[1].ideo = new_ideo[1];
}

}  // namespace oligo

#pragma once

#include "oligo/config.hpp"
#include "oligo/rng.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace oligo {

enum class PartyId { Red = 0, Blue = 1 };

inline PartyId opponent_of(PartyId id) {
    return id == PartyId::Red ? PartyId::Blue : PartyId::Red;
}
std::string to_string(PartyId id);

struct Party {
    PartyId id = PartyId::Red;
    double ideo = 0.0;
    double olig = 0.0;
    bool last_increase_ideo = false;
    bool last_increase_olig = false;
    int votes_current = 0;
    int votes_previous = 0;
    double donations_received_current_cycle = 0.0;
    bool is_incumbent = false;

    bool operator==(const Party&) const = default;
};

struct Voter {
    double ideo = 0.0;
    double olig_salience = 0.0;
    bool is_loyalist = false;
    PartyId last_vote = PartyId::Red;  // meaningful once the first VOTE has run

    bool operator==(const Voter&) const = default;
};

struct Oligarch {
    double gross_income = 0.0;
    double donation_size = 0.0;
    double last_subsidy = 0.0;
    int agent_index = 0;
    bool last_donation_increased = false;
    double profit_at_last_update = 0.0;

    bool operator==(const Oligarch&) const = default;
};

// End-of-cycle observables. Party positions are post-update; the winner
// flags are evaluated at vote time, against the positions the election was
// fought on. Trace CSV columns mirror this declaration order.
struct CycleRecord {
    long cycle = 0;
    double tax_rate = 0.0;
    double tax_collected = 0.0;
    double red_ideo = 0.0;
    double blue_ideo = 0.0;
    double red_olig = 0.0;
    double blue_olig = 0.0;
    double mean_party_ideo = 0.0;
    double mean_party_olig = 0.0;
    double party_olig_gap = 0.0;
    double mean_voter_salience = 0.0;
    double total_donations = 0.0;
    double mean_donated_fraction = 0.0;
    double mean_donation_size = 0.0;
    double mean_oligarch_profit = 0.0;
    PartyId incumbent = PartyId::Red;
    double red_vote_pct = 0.0;
    bool winner_closer_to_ideo_center = false;
    bool winner_higher_olig = false;
    bool olig_defeats_center = false;

    bool operator==(const CycleRecord&) const = default;
};

struct WorldState {
    ModelConfig config;
    std::array<Party, 2> parties;  // [0] red, [1] blue
    std::vector<Voter> voters;
    std::vector<Oligarch> oligarchs;
    long cycle = 0;

    // Identity streams; per-(cycle, agent) substreams are derived on use,
    // so the stream objects themselves never advance during a run.
    RandomStream donation_stream;
    RandomStream vote_stream;
    RandomStream salience_stream;
    RandomStream party_stream;
    RandomStream tie_stream;

    // Scratch carried between the stages of the current cycle.
    double total_donations = 0.0;
    double scaled_difference = 0.0;
    double mean_donation_size = 0.0;
    std::optional<PartyId> donation_beneficiary;
    PartyId incumbent = PartyId::Red;
    double red_vote_pct = 0.0;
    bool winner_closer_to_ideo_center = false;
    bool winner_higher_olig = false;
    bool olig_defeats_center = false;
    double tax_rate = 0.0;
    double tax_collected = 0.0;

    Party& red() { return parties[0]; }
    Party& blue() { return parties[1]; }
    const Party& red() const { return parties[0]; }
    const Party& blue() const { return parties[1]; }
};

// Agent iteration orders, for the stage-order independence property. Null or
// empty vectors mean canonical (index) order; the end-of-stage state must be
// identical for any permutation.
struct AgentOrder {
    std::vector<int> voters;
    std::vector<int> oligarchs;
};

WorldState init_world(const ModelConfig& config, RandomStream run_stream);

// 1 - exp(party_difference_factor * gap / (max_pos - min_pos)).
double party_olig_difference_scaled(double red_olig, double blue_olig,
                                    const ModelConfig& config);

// Salience-weighted distance; donations_to_party is the amount credited to
// this party this cycle (pass 0 when the party received nothing), which
// shrinks the perceived distance toward voter_min_distance_scale * base.
double voter_distance(const Voter& voter, const Party& party,
                      double donations_to_party, const ModelConfig& config);

struct AimmChoice {
    PartyId chosen = PartyId::Red;
    double overall_difference = 0.0;  // in [0, 1]
};

// Weighted-Manhattan donation target; exact ties are broken by a fair coin
// from tie_stream. Rejects non-AIMM configs.
AimmChoice aimm_party_choice(const Party& red, const Party& blue,
                             const ModelConfig& config, RandomStream& tie_stream);

// The five GO-loop stages, in execution order. Each reads world.cycle.
double update_oligarch_donations(WorldState& world, const AgentOrder* order = nullptr);
void vote(WorldState& world, const AgentOrder* order = nullptr);
void redistribute(WorldState& world);
void update_voter_olig_salience(WorldState& world, const AgentOrder* order = nullptr);
void update_party_policies(WorldState& world);

}  // namespace oligo

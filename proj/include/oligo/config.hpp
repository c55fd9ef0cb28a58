#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

namespace oligo {

enum class Variant { IIM, PIMM, AIMM };
enum class VoterDistribution { Unimodal, Bimodal };

std::string to_string(Variant v);
std::string to_string(VoterDistribution d);
Variant variant_from_string(const std::string& s);
VoterDistribution voter_distribution_from_string(const std::string& s);

// All model parameters. Defaults are the base configuration; experiment
// overrides (sweeps, fixed-value variations) are plain field assignments.
struct ModelConfig {
    double gdp = 1000.0;
    double max_pos = 100.0;
    double min_pos = -100.0;
    int oligarch_count = 5;
    int voter_count = 100;
    double oligarch_epsilon = 0.1;
    double oligarch_gdp_fraction = 0.05;
    double oligarch_initial_donation = 0.3;
    int oligarch_latency = 10;
    double oligarch_noise = 0.1;
    double party_difference_factor = -2.0;
    double party_epsilon = 5.0;
    double voter_ad_decay_factor = -0.03;
    double voter_awareness = 0.5;
    double voter_gross_income = 9.5;
    double voter_initial_salience = 0.0;
    double voter_max_tax = 0.5;
    double voter_memory_strength = 0.9;
    double voter_min_distance_scale = 0.3;
    double voter_olig = -100.0;

    Variant variant = Variant::IIM;
    double swing_voter_fraction = 0.33;  // PIMM/AIMM
    double party_bliss_red = 33.0;       // PIMM/AIMM
    double party_bliss_blue = -33.0;     // PIMM/AIMM
    double oligarch_ideo = 33.0;         // AIMM
    double oligarch_ideo_olig_ratio = 0.5;  // AIMM
    bool aimm_ideo_norm_from_bliss = false; // AIMM: normalize ideo axis by
                                            // (oligarch_ideo - min_pos) instead
                                            // of the full range

    VoterDistribution voter_distribution = VoterDistribution::Unimodal;
    std::array<double, 2> bimodal_means = {28.9, -28.9};
    double bimodal_sd = 16.7;
    double bimodal_mix = 0.5;  // probability of the first component

    bool allow_null_donation_action = false;
    double null_action_threshold = 0.0;  // used only when the flag is on

    // Update-rule bypasses for the fixed-value experiments.
    bool fix_party_olig = false;      // freeze party olig at its initialized draw
    bool fix_voter_salience = false;  // salience pinned to voter_initial_salience
    bool fix_donation_size = false;   // donation_size pinned to oligarch_initial_donation

    // Throws std::invalid_argument naming the offending key.
    void validate() const;
};

// Scalar double parameters addressable by name, shared by the config parser
// and the sweep machinery. Integer, bool, and enum fields are not sweepable
// and are handled explicitly where needed.
const std::map<std::string, double ModelConfig::*, std::less<>>& numeric_config_fields();

}  // namespace oligo

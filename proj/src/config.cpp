#include "oligo/config.hpp"

#include <stdexcept>

namespace oligo {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::IIM: return "IIM";
        case Variant::PIMM: return "PIMM";
        case Variant::AIMM: return "AIMM";
    }
    throw std::logic_error("unreachable variant");
}

std::string to_string(VoterDistribution d) {
    return d == VoterDistribution::Unimodal ? "unimodal" : "bimodal";
}

Variant variant_from_string(const std::string& s) {
    if (s == "IIM") return Variant::IIM;
    if (s == "PIMM") return Variant::PIMM;
    if (s == "AIMM") return Variant::AIMM;
    throw std::invalid_argument("variant: expected one of IIM, PIMM, AIMM, got \"" + s + "\"");
}

VoterDistribution voter_distribution_from_string(const std::string& s) {
    if (s == "unimodal") return VoterDistribution::Unimodal;
    if (s == "bimodal") return VoterDistribution::Bimodal;
    throw std::invalid_argument(
        "voter_distribution: expected unimodal or bimodal, got \"" + s + "\"");
}

namespace {

void require(bool ok, const char* key, const char* what) {
    if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
}

void require_fraction(double v, const char* key) {
    require(v >= 0.0 && v <= 1.0, key, "must be in [0, 1]");
}

}  // namespace

void ModelConfig::validate() const {
    require(min_pos < max_pos, "min_pos", "must be less than max_pos");
    require(gdp > 0.0, "gdp", "must be positive");
    require(oligarch_count > 0, "oligarch_count", "must be positive");
    require(voter_count > 0, "voter_count", "must be positive");
    require(oligarch_latency >= 1, "oligarch_latency", "must be at least 1");
    require_fraction(oligarch_epsilon, "oligarch_epsilon");
    require_fraction(oligarch_gdp_fraction, "oligarch_gdp_fraction");
    require(oligarch_gdp_fraction > 0.0, "oligarch_gdp_fraction", "must be positive");
    require_fraction(oligarch_initial_donation, "oligarch_initial_donation");
    require_fraction(oligarch_noise, "oligarch_noise");
    require(party_difference_factor < 0.0, "party_difference_factor",
            "must be negative (decay rate)");
    require(party_epsilon > 0.0, "party_epsilon", "must be positive");
    require(voter_ad_decay_factor < 0.0, "voter_ad_decay_factor",
            "must be negative (decay rate)");
    require(voter_awareness >= 0.0, "voter_awareness", "must be non-negative");
    require(voter_gross_income > 0.0, "voter_gross_income", "must be positive");
    require_fraction(voter_initial_salience, "voter_initial_salience");
    require_fraction(voter_max_tax, "voter_max_tax");
    require_fraction(voter_memory_strength, "voter_memory_strength");
    require_fraction(voter_min_distance_scale, "voter_min_distance_scale");
    require(voter_olig >= min_pos && voter_olig <= max_pos, "voter_olig",
            "must lie in [min_pos, max_pos]");
    require_fraction(swing_voter_fraction, "swing_voter_fraction");
    require(party_bliss_red >= min_pos && party_bliss_red <= max_pos, "party_bliss_red",
            "must lie in [min_pos, max_pos]");
    require(party_bliss_blue >= min_pos && party_bliss_blue <= max_pos, "party_bliss_blue",
            "must lie in [min_pos, max_pos]");
    require(party_bliss_red > party_bliss_blue, "party_bliss_red",
            "must be greater than party_bliss_blue");
    require(oligarch_ideo >= min_pos && oligarch_ideo <= max_pos, "oligarch_ideo",
            "must lie in [min_pos, max_pos]");
    require_fraction(oligarch_ideo_olig_ratio, "oligarch_ideo_olig_ratio");
    require(bimodal_sd > 0.0, "bimodal_sd", "must be positive");
    require_fraction(bimodal_mix, "bimodal_mix");
    require(null_action_threshold >= 0.0, "null_action_threshold", "must be non-negative");
}

const std::map<std::string, double ModelConfig::*, std::less<>>& numeric_config_fields() {
    static const std::map<std::string, double ModelConfig::*, std::less<>> fields = {
        {"gdp", &ModelConfig::gdp},
        {"max_pos", &ModelConfig::max_pos},
        {"min_pos", &ModelConfig::min_pos},
        {"oligarch_epsilon", &ModelConfig::oligarch_epsilon},
        {"oligarch_gdp_fraction", &ModelConfig::oligarch_gdp_fraction},
        {"oligarch_initial_donation", &ModelConfig::oligarch_initial_donation},
        {"oligarch_noise", &ModelConfig::oligarch_noise},
        {"party_difference_factor", &ModelConfig::party_difference_factor},
        {"party_epsilon", &ModelConfig::party_epsilon},
        {"voter_ad_decay_factor", &ModelConfig::voter_ad_decay_factor},
        {"voter_awareness", &ModelConfig::voter_awareness},
        {"voter_gross_income", &ModelConfig::voter_gross_income},
        {"voter_initial_salience", &ModelConfig::voter_initial_salience},
        {"voter_max_tax", &ModelConfig::voter_max_tax},
        {"voter_memory_strength", &ModelConfig::voter_memory_strength},
        {"voter_min_distance_scale", &ModelConfig::voter_min_distance_scale},
        {"voter_olig", &ModelConfig::voter_olig},
        {"swing_voter_fraction", &ModelConfig::swing_voter_fraction},
        {"party_bliss_red", &ModelConfig::party_bliss_red},
        {"party_bliss_blue", &ModelConfig::party_bliss_blue},
        {"oligarch_ideo", &ModelConfig::oligarch_ideo},
        {"oligarch_ideo_olig_ratio", &ModelConfig::oligarch_ideo_olig_ratio},
        {"bimodal_sd", &ModelConfig::bimodal_sd},
        {"bimodal_mix", &ModelConfig::bimodal_mix},
        {"null_action_threshold", &ModelConfig::null_action_threshold},
    };
    return fields;
}

}  // namespace oligo

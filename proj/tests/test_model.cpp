#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oligo/engine.hpp"
#include "oligo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

using namespace oligo;

namespace {

doctest::Approx near(double v) { return doctest::Approx(v).epsilon(1e-9); }

// Minimal world for exercising a single stage by hand. Streams come from a
// fixed seed so stages that draw are still deterministic.
WorldState bare_world(const ModelConfig& cfg) {
    WorldState w;
    w.config = cfg;
    RandomStream root(77);
    w.donation_stream = root.derive("donations");
    w.vote_stream = root.derive("vote");
    w.salience_stream = root.derive("salience");
    w.party_stream = root.derive("parties");
    w.tie_stream = root.derive("ties");
    w.parties[0].id = PartyId::Red;
    w.parties[1].id = PartyId::Blue;
    return w;
}

Voter make_voter(double ideo, double salience, bool loyalist = false) {
    Voter v;
    v.ideo = ideo;
    v.olig_salience = salience;
    v.is_loyalist = loyalist;
    return v;
}

Oligarch make_oligarch(int index, double income, double donation_size) {
    Oligarch o;
    o.agent_index = index;
    o.gross_income = income;
    o.donation_size = donation_size;
    return o;
}

}  // namespace

TEST_CASE("init produces the configured populations with sane state") {
    ModelConfig cfg;
    WorldState w = init_world(cfg, RandomStream(7));

    CHECK(w.cycle == 0);
    CHECK(w.voters.size() == 100);
    CHECK(w.oligarchs.size() == 5);
    CHECK(w.red().id == PartyId::Red);
    CHECK(w.blue().id == PartyId::Blue);

    for (const Party& p : w.parties) {
        CHECK(p.ideo >= cfg.min_pos);
        CHECK(p.ideo <= cfg.max_pos);
        CHECK(p.olig >= cfg.min_pos);
        CHECK(p.olig <= cfg.max_pos);
        CHECK(p.votes_current == 0);
        CHECK(p.votes_previous == 0);
    }
    for (const Voter& v : w.voters) {
        CHECK(v.ideo >= cfg.min_pos);
        CHECK(v.ideo <= cfg.max_pos);
        CHECK(v.olig_salience == 0.0);
        CHECK_FALSE(v.is_loyalist);  // no loyalists outside positional variants
    }
    double income_sum = 0.0;
    for (const Oligarch& o : w.oligarchs) {
        CHECK(o.gross_income > 0.0);
        CHECK(o.donation_size >= 0.0);
        CHECK(o.donation_size <= cfg.oligarch_initial_donation);
        CHECK(o.last_subsidy == 0.0);
        income_sum += o.gross_income;
    }
    // Incomes are moment-matched to the oligarch share of gdp.
    CHECK(income_sum == near(cfg.gdp * cfg.oligarch_gdp_fraction));
}

TEST_CASE("init is deterministic in the run stream") {
    ModelConfig cfg;
    WorldState a = init_world(cfg, RandomStream(5));
    WorldState b = init_world(cfg, RandomStream(5));
    CHECK(a.parties == b.parties);
    CHECK(a.voters == b.voters);
    CHECK(a.oligarchs == b.oligarchs);

    WorldState c = init_world(cfg, RandomStream(6));
    CHECK(a.voters != c.voters);
}

TEST_CASE("positional init pins party platforms to the bliss points") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    WorldState w = init_world(cfg, RandomStream(9));
    CHECK(w.red().ideo == 33.0);
    CHECK(w.blue().ideo == -33.0);

    int loyalists = 0;
    for (const Voter& v : w.voters) loyalists += v.is_loyalist ? 1 : 0;
    // 67% expected; [50, 85] is far beyond binomial noise at n = 100.
    CHECK(loyalists >= 50);
    CHECK(loyalists <= 85);
}

TEST_CASE("fixed donation size pins every oligarch to the initial value") {
    ModelConfig cfg;
    cfg.fix_donation_size = true;
    WorldState w = init_world(cfg, RandomStream(3));
    for (const Oligarch& o : w.oligarchs) CHECK(o.donation_size == 0.3);
}

TEST_CASE("bimodal voters hollow out the ideological center") {
    ModelConfig uni;
    uni.voter_count = 1000;
    ModelConfig bi = uni;
    bi.voter_distribution = VoterDistribution::Bimodal;

    auto center_count = [](const WorldState& w) {
        int n = 0;
        for (const Voter& v : w.voters) n += std::abs(v.ideo) < 10.0 ? 1 : 0;
        return n;
    };
    // Expected ~236 unimodal vs ~119 bimodal out of 1000.
    CHECK(center_count(init_world(uni, RandomStream(21))) > 180);
    CHECK(center_count(init_world(bi, RandomStream(21))) < 180);
}

TEST_CASE("platform-difference scaling follows the saturating exponential") {
    ModelConfig cfg;
    CHECK(party_olig_difference_scaled(100, -100, cfg) == near(0.8646647167633873));
    CHECK(party_olig_difference_scaled(0, -100, cfg) == near(0.6321205588285577));
    CHECK(party_olig_difference_scaled(50, 50, cfg) == near(0.0));

    double prev = -1.0;
    for (double gap : {0.0, 10.0, 50.0, 100.0, 200.0}) {
        double s = party_olig_difference_scaled(gap / 2.0, -gap / 2.0, cfg);
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("voter distance blends ideology and platform by salience") {
    ModelConfig cfg;
    Party party;
    party.ideo = 40.0;
    party.olig = -20.0;

    // salience 0.5: 0.5*|0-40| + 0.5*|-100-(-20)| = 60 before ads.
    CHECK(voter_distance(make_voter(0, 0.5), party, 0.0, cfg) == near(60.0));
    CHECK(voter_distance(make_voter(0, 0.0), party, 0.0, cfg) == near(40.0));
    CHECK(voter_distance(make_voter(0, 1.0), party, 0.0, cfg) == near(80.0));
}

TEST_CASE("donations shrink perceived distance down to the floor") {
    ModelConfig cfg;
    Party party;
    party.ideo = 40.0;
    party.olig = -20.0;
    Voter v = make_voter(0, 0.5);

    CHECK(voter_distance(v, party, 10.0, cfg) == near(49.114365268632156));
    CHECK(voter_distance(v, party, 1e9, cfg) == near(18.0));  // 0.3 * 60

    double prev = voter_distance(v, party, 0.0, cfg);
    for (double d : {1.0, 10.0, 100.0, 1000.0}) {
        double now = voter_distance(v, party, d, cfg);
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("donation stage credits the friendlier platform") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().olig = 0.0;
    w.blue().olig = -100.0;
    w.oligarchs = {make_oligarch(0, 10.0, 0.3)};
    w.cycle = 1;  // latency guard off for agent 0

    double total = update_oligarch_donations(w);
    CHECK(total == near(1.896361676485673));  // 10 * 0.3 * (1 - e^-1)
    CHECK(w.total_donations == near(total));
    CHECK(w.scaled_difference == near(0.6321205588285577));
    CHECK(w.mean_donation_size == near(0.3));
    REQUIRE(w.donation_beneficiary.has_value());
    CHECK(*w.donation_beneficiary == PartyId::Red);
    CHECK(w.red().donations_received_current_cycle == near(total));
    CHECK(w.blue().donations_received_current_cycle == 0.0);
    CHECK(w.oligarchs[0].donation_size == 0.3);  // guard did not fire
}

TEST_CASE("equal platforms yield no donations and no beneficiary") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().olig = 25.0;
    w.blue().olig = 25.0;
    w.oligarchs = {make_oligarch(0, 10.0, 0.3), make_oligarch(1, 10.0, 0.5)};
    w.cycle = 3;

    double total = update_oligarch_donations(w);
    CHECK(total == near(0.0));
    CHECK_FALSE(w.donation_beneficiary.has_value());
    CHECK(w.red().donations_received_current_cycle == 0.0);
    CHECK(w.blue().donations_received_current_cycle == 0.0);
}

TEST_CASE("latency staggers donation-size updates to one agent per cycle") {
    ModelConfig cfg;
    WorldState w = init_world(cfg, RandomStream(17));
    w.red().olig = 40.0;
    w.blue().olig = -40.0;

    for (long c = 0; c < 30; ++c) {
        std::vector<double> before;
        for (const Oligarch& o : w.oligarchs) before.push_back(o.donation_size);
        w.cycle = c;
        update_oligarch_donations(w);
        int changed = 0;
        for (size_t i = 0; i < w.oligarchs.size(); ++i)
            changed += w.oligarchs[i].donation_size != before[i] ? 1 : 0;
        CHECK(changed <= 1);
        for (const Oligarch& o : w.oligarchs) {
            CHECK(o.donation_size >= 0.0);
            CHECK(o.donation_size <= 1.0);
        }
    }
}

TEST_CASE("donation-size moves are epsilon steps driven by profit history") {
    ModelConfig cfg;
    cfg.oligarch_noise = 0.0;  // make the update rule deterministic
    WorldState w = bare_world(cfg);
    w.red().olig = 100.0;
    w.blue().olig = -100.0;  // scaled = 1 - e^-2

    Oligarch o = make_oligarch(0, 10.0, 0.3);
    o.last_donation_increased = true;
    o.last_subsidy = 100.0;       // current profit well above the last mark
    o.profit_at_last_update = 0.0;
    w.oligarchs = {o};
    w.cycle = 0;  // (0 + 0) % 10 == 0, guard fires

    update_oligarch_donations(w);
    // Profit rose and the last move was an increase, so increase again.
    CHECK(w.oligarchs[0].donation_size == near(0.4));
    CHECK(w.oligarchs[0].last_donation_increased);
    // The mark moves to the profit measured this cycle, spend at the new size?
    // No: profit is measured against the pre-move spend.
    double spend_at_old_size = 10.0 * 0.3 * 0.8646647167633873;
    CHECK(w.oligarchs[0].profit_at_last_update == near(100.0 - spend_at_old_size));

    // Same setup but profit fell: reverse course.
    Oligarch o2 = make_oligarch(0, 10.0, 0.3);
    o2.last_donation_increased = true;
    o2.last_subsidy = 0.0;
    o2.profit_at_last_update = 50.0;
    w.oligarchs = {o2};
    w.cycle = 0;
    update_oligarch_donations(w);
    CHECK(w.oligarchs[0].donation_size == near(0.2));
    CHECK_FALSE(w.oligarchs[0].last_donation_increased);
}

TEST_CASE("null action freezes the donation size inside the threshold") {
    ModelConfig cfg;
    cfg.allow_null_donation_action = true;
    cfg.null_action_threshold = 5.0;
    WorldState w = bare_world(cfg);
    w.red().olig = 100.0;
    w.blue().olig = -100.0;

    Oligarch o = make_oligarch(0, 10.0, 0.3);
    o.last_subsidy = 10.0;
    o.profit_at_last_update = 10.0 - 10.0 * 0.3 * 0.8646647167633873 + 1.0;  // within 5
    w.oligarchs = {o};
    w.cycle = 0;

    update_oligarch_donations(w);
    CHECK(w.oligarchs[0].donation_size == 0.3);
}

TEST_CASE("aimm choice weighs platform and ideology distances") {
    ModelConfig cfg;
    cfg.variant = Variant::AIMM;
    Party red, blue;
    red.id = PartyId::Red;
    red.olig = -50.0;
    red.ideo = 33.0;
    blue.id = PartyId::Blue;
    blue.olig = -40.0;
    blue.ideo = -33.0;

    RandomStream tie(1);
    AimmChoice c = aimm_party_choice(red, blue, cfg, tie);
    CHECK(c.chosen == PartyId::Red);  // weighted 75 vs 103
    CHECK(c.overall_difference == near(0.14));

    cfg.aimm_ideo_norm_from_bliss = true;
    AimmChoice alt = aimm_party_choice(red, blue, cfg, tie);
    CHECK(alt.overall_difference == near(0.2231203007518797));

    ModelConfig iim;
    CHECK_THROWS_AS(aimm_party_choice(red, blue, iim, tie), std::logic_error);
}

TEST_CASE("aimm ties fall to a fair coin") {
    ModelConfig cfg;
    cfg.variant = Variant::AIMM;
    Party red, blue;
    red.id = PartyId::Red;
    red.olig = blue.olig = -50.0;
    blue.id = PartyId::Blue;
    red.ideo = 40.0;
    blue.ideo = 26.0;  // same |ideo - 33|

    std::set<PartyId> seen;
    RandomStream root(4);
    for (int i = 0; i < 64; ++i) {
        RandomStream tie = root.derive(static_cast<std::uint64_t>(i));
        seen.insert(aimm_party_choice(red, blue, cfg, tie).chosen);
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("aimm donations can back the lower-platform party") {
    ModelConfig cfg;
    cfg.variant = Variant::AIMM;
    WorldState w = bare_world(cfg);
    w.red().olig = -50.0;
    w.red().ideo = 33.0;
    w.blue().olig = -40.0;  // higher platform, but ideologically distant
    w.blue().ideo = -33.0;
    w.oligarchs = {make_oligarch(0, 10.0, 0.3)};
    w.cycle = 1;

    update_oligarch_donations(w);
    REQUIRE(w.donation_beneficiary.has_value());
    CHECK(*w.donation_beneficiary == PartyId::Red);
    CHECK(w.scaled_difference == near(0.24421625854427453));  // 1 - e^(-2*0.14)
}

TEST_CASE("votes go to the closer party and set the winner flags") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 50.0;
    w.red().olig = 0.0;
    w.blue().ideo = -50.0;
    w.blue().olig = 0.0;
    for (int i = 0; i < 10; ++i) w.voters.push_back(make_voter(40.0 + i, 0.0));

    vote(w);
    CHECK(w.red().votes_current == 10);
    CHECK(w.blue().votes_current == 0);
    CHECK(w.red_vote_pct == near(100.0));
    CHECK(w.incumbent == PartyId::Red);
    CHECK(w.red().is_incumbent);
    CHECK_FALSE(w.blue().is_incumbent);
    // Equal |ideo| and equal olig: neither comparative flag fires.
    CHECK_FALSE(w.winner_closer_to_ideo_center);
    CHECK_FALSE(w.winner_higher_olig);
    CHECK_FALSE(w.olig_defeats_center);
    for (const Voter& v : w.voters) CHECK(v.last_vote == PartyId::Red);
}

TEST_CASE("an extreme winner with the higher platform defeats the centrist") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 50.0;
    w.red().olig = 50.0;
    w.blue().ideo = 0.0;
    w.blue().olig = -50.0;
    w.voters = {make_voter(49.0, 0.0)};

    vote(w);
    CHECK(w.incumbent == PartyId::Red);
    CHECK(w.winner_higher_olig);
    CHECK_FALSE(w.winner_closer_to_ideo_center);
    CHECK(w.olig_defeats_center);
}

TEST_CASE("vote bookkeeping shifts current tallies into previous") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 50.0;
    w.blue().ideo = -50.0;
    w.red().votes_current = 7;
    w.blue().votes_current = 3;
    for (int i = 0; i < 4; ++i) w.voters.push_back(make_voter(30.0, 0.0));

    vote(w);
    CHECK(w.red().votes_previous == 7);
    CHECK(w.blue().votes_previous == 3);
    CHECK(w.red().votes_current == 4);
    CHECK(w.blue().votes_current == 0);
}

TEST_CASE("loyalists vote on ideology alone") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    WorldState w = bare_world(cfg);
    w.red().ideo = 33.0;
    w.blue().ideo = -33.0;
    w.red().olig = 100.0;
    w.blue().olig = -100.0;
    w.red().donations_received_current_cycle = 1e6;  // ads galore

    Voter loyal = make_voter(-10.0, 1.0, true);  // salience maxed, still ignored
    w.voters = {loyal};
    vote(w);
    CHECK(w.voters[0].last_vote == PartyId::Blue);  // |−10−33| > |−10+33|
}

TEST_CASE("loyalist choices are immune to platforms, ads, and salience") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    WorldState w = init_world(cfg, RandomStream(31));

    vote(w);
    std::vector<PartyId> first_votes;
    for (const Voter& v : w.voters) first_votes.push_back(v.last_vote);

    // Shake everything a loyalist is supposed to ignore.
    w.red().olig = 90.0;
    w.blue().olig = -90.0;
    w.blue().donations_received_current_cycle = 500.0;
    for (Voter& v : w.voters) v.olig_salience = 0.8;
    w.cycle = 1;
    vote(w);

    for (size_t i = 0; i < w.voters.size(); ++i) {
        if (w.voters[i].is_loyalist) CHECK(w.voters[i].last_vote == first_votes[i]);
    }
}

TEST_CASE("an exactly torn voter flips a coin") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 20.0;
    w.blue().ideo = -20.0;
    w.red().olig = 0.0;
    w.blue().olig = 0.0;
    w.voters = {make_voter(0.0, 0.0)};

    std::set<PartyId> seen;
    for (long c = 0; c < 64; ++c) {
        w.cycle = c;
        vote(w);
        seen.insert(w.voters[0].last_vote);
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("redistribution taxes by the incumbent platform") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.oligarchs = {make_oligarch(0, 2.0, 0.3), make_oligarch(1, 8.0, 0.3)};
    for (Oligarch& o : w.oligarchs) o.last_subsidy = 5.0;
    w.incumbent = PartyId::Red;
    w.cycle = 10;  // guard fires for agent 0 only

    w.red().olig = 0.0;
    redistribute(w);
    CHECK(w.tax_rate == near(0.25));
    CHECK(w.tax_collected == near(237.5));  // 0.25 * 100 voters * 9.5
    CHECK(w.oligarchs[0].last_subsidy == near(237.5 * 2.0 / 50.0));
    CHECK(w.oligarchs[1].last_subsidy == 5.0);  // untouched between updates

    w.red().olig = 100.0;
    redistribute(w);
    CHECK(w.tax_rate == near(0.5));
    w.red().olig = -100.0;
    redistribute(w);
    CHECK(w.tax_rate == near(0.0));
}

TEST_CASE("subsidies conserve the collected tax when every agent updates") {
    ModelConfig cfg;
    cfg.oligarch_latency = 1;
    WorldState w = init_world(cfg, RandomStream(23));
    w.incumbent = PartyId::Blue;
    w.blue().olig = 30.0;
    redistribute(w);
    double sum = 0.0;
    for (const Oligarch& o : w.oligarchs) sum += o.last_subsidy;
    CHECK(sum == near(w.tax_collected));
}

TEST_CASE("salience decays multiplicatively when taxes go unnoticed") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.voters = {make_voter(0, 0.5), make_voter(10, 0.2)};
    w.tax_rate = 0.0;  // notice probability 0

    update_voter_olig_salience(w);
    CHECK(w.voters[0].olig_salience == 0.45);
    CHECK(w.voters[1].olig_salience == doctest::Approx(0.18).epsilon(1e-12));
}

TEST_CASE("a noticed tax below the decayed salience adds nothing") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    for (int i = 0; i < 50; ++i) w.voters.push_back(make_voter(0, 0.5));
    w.tax_rate = 0.2;  // decayed salience 0.45 already exceeds it

    update_voter_olig_salience(w);
    for (const Voter& v : w.voters) CHECK(v.olig_salience == 0.45);
}

TEST_CASE("noticed taxes lift salience at most to the tax rate") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    for (int i = 0; i < 100; ++i) w.voters.push_back(make_voter(0, 0.0));
    w.tax_rate = 0.2;

    update_voter_olig_salience(w);
    int raised = 0;
    for (const Voter& v : w.voters) {
        CHECK(v.olig_salience >= 0.0);
        CHECK(v.olig_salience <= 0.2);
        raised += v.olig_salience > 0.0 ? 1 : 0;
    }
    CHECK(raised > 0);  // ~45% notice at tax 0.2
    CHECK(raised < 100);
}

TEST_CASE("fixed salience disables the update entirely") {
    ModelConfig cfg;
    cfg.fix_voter_salience = true;
    WorldState w = bare_world(cfg);
    w.voters = {make_voter(0, 0.123)};
    w.tax_rate = 0.4;
    update_voter_olig_salience(w);
    CHECK(w.voters[0].olig_salience == 0.123);
}

TEST_CASE("winning parties repeat their last moves exactly") {
    ModelConfig cfg;  // IIM: no veto, no bias
    WorldState w = bare_world(cfg);
    w.red().ideo = 10.0;
    w.red().olig = 20.0;
    w.red().last_increase_ideo = true;
    w.red().last_increase_olig = false;
    w.red().votes_current = 60;
    w.red().votes_previous = 40;
    w.blue().ideo = -10.0;
    w.blue().olig = 0.0;
    w.blue().last_increase_ideo = true;
    w.blue().last_increase_olig = true;
    w.blue().votes_current = 40;
    w.blue().votes_previous = 30;

    update_party_policies(w);
    CHECK(w.red().ideo == near(15.0));
    CHECK(w.red().olig == near(15.0));
    CHECK(w.red().last_increase_ideo);
    CHECK_FALSE(w.red().last_increase_olig);
    CHECK(w.blue().ideo == near(-5.0));
    CHECK(w.blue().olig == near(5.0));
}

TEST_CASE("a flat vote count is a loss, and losers change course") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 10.0;
    w.red().olig = 20.0;
    w.red().last_increase_ideo = true;
    w.red().last_increase_olig = true;
    w.red().votes_current = 50;
    w.red().votes_previous = 50;  // equal counts do not count as an increase
    w.blue().votes_current = 50;
    w.blue().votes_previous = 60;

    bool red_ideo_before = w.red().last_increase_ideo;
    bool red_olig_before = w.red().last_increase_olig;
    update_party_policies(w);

    bool ideo_flipped = w.red().last_increase_ideo != red_ideo_before;
    bool olig_flipped = w.red().last_increase_olig != red_olig_before;
    CHECK((ideo_flipped || olig_flipped));  // losing always flips something
    // Moves follow the stored flags, epsilon per axis.
    CHECK(std::abs(w.red().ideo - 10.0) == near(cfg.party_epsilon));
    CHECK(std::abs(w.red().olig - 20.0) == near(cfg.party_epsilon));
    CHECK(w.red().ideo - 10.0 == near(w.red().last_increase_ideo ? 5.0 : -5.0));
    CHECK(w.red().olig - 20.0 == near(w.red().last_increase_olig ? 5.0 : -5.0));
}

TEST_CASE("loser flips cover all three patterns over many cycles") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 0.0;
    w.red().olig = 0.0;
    w.red().votes_current = 40;
    w.red().votes_previous = 50;
    w.blue().votes_current = 40;
    w.blue().votes_previous = 50;

    std::set<std::pair<bool, bool>> patterns;
    for (long c = 0; c < 64; ++c) {
        w.cycle = c;
        bool i0 = w.red().last_increase_ideo, o0 = w.red().last_increase_olig;
        w.red().ideo = 0.0;  // keep away from the clamps
        w.red().olig = 0.0;
        update_party_policies(w);
        patterns.insert({w.red().last_increase_ideo != i0, w.red().last_increase_olig != o0});
    }
    // Flip both / flip ideo only / flip olig only, and never neither.
    CHECK(patterns.size() == 3);
    CHECK(patterns.count({false, false}) == 0);
}

TEST_CASE("positions clamp at the edges of the space") {
    ModelConfig cfg;
    WorldState w = bare_world(cfg);
    w.red().ideo = 98.0;
    w.red().olig = 98.0;
    w.red().last_increase_ideo = true;
    w.red().last_increase_olig = true;
    w.red().votes_current = 2;
    w.red().votes_previous = 1;
    w.blue().ideo = -98.0;
    w.blue().olig = -98.0;
    w.blue().last_increase_ideo = false;
    w.blue().last_increase_olig = false;
    w.blue().votes_current = 2;
    w.blue().votes_previous = 1;

    update_party_policies(w);
    CHECK(w.red().ideo == 100.0);
    CHECK(w.red().olig == 100.0);
    CHECK(w.blue().ideo == -100.0);
    CHECK(w.blue().olig == -100.0);
}

TEST_CASE("fixed party platform freezes olig while ideo keeps moving") {
    ModelConfig cfg;
    cfg.fix_party_olig = true;
    WorldState w = bare_world(cfg);
    w.red().ideo = 10.0;
    w.red().olig = 37.0;
    w.red().last_increase_ideo = true;
    w.red().last_increase_olig = true;
    w.red().votes_current = 2;
    w.red().votes_previous = 1;
    w.blue().votes_current = 2;
    w.blue().votes_previous = 1;

    update_party_policies(w);
    CHECK(w.red().ideo == near(15.0));
    CHECK(w.red().olig == 37.0);
}

TEST_CASE("positional parties refuse moves across the opponent") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    WorldState w = bare_world(cfg);
    w.red().ideo = 5.0;
    w.red().last_increase_ideo = false;  // wants to move to 0, across blue
    w.red().last_increase_olig = true;
    w.red().olig = 0.0;
    w.red().votes_current = 2;
    w.red().votes_previous = 1;
    w.blue().ideo = 3.0;
    w.blue().last_increase_ideo = true;  // wants to move to 8, across red
    w.blue().last_increase_olig = false;
    w.blue().olig = 0.0;
    w.blue().votes_current = 2;
    w.blue().votes_previous = 1;

    update_party_policies(w);
    // Both candidate moves cross the opponent's pre-update position, so both
    // are refused, and the refusal also suppresses the bliss pull.
    CHECK(w.red().ideo == 5.0);
    CHECK(w.blue().ideo == 3.0);
    // Platform moves are not subject to the veto.
    CHECK(w.red().olig == near(5.0));
    CHECK(w.blue().olig == near(-5.0));
}

TEST_CASE("the bliss pull corrects a party stranded on the wrong side") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    cfg.fix_party_olig = true;
    WorldState w = bare_world(cfg);
    w.red().ideo = -100.0;  // maximally far below its bliss point of 33
    w.red().last_increase_ideo = true;
    w.red().votes_current = 2;
    w.red().votes_previous = 1;
    w.blue().ideo = -100.0;
    w.blue().last_increase_ideo = false;  // clamps to -100, then vetoed
    w.blue().votes_current = 2;
    w.blue().votes_previous = 1;

    update_party_policies(w);
    CHECK(w.red().ideo == near(-90.00015600955697));  // -95 plus a pull of ~5
    CHECK(w.blue().ideo == -100.0);

    // Moderate displacement, moderate pull: 5 -> 10 + 0.3004...
    WorldState w2 = bare_world(cfg);
    w2.red().ideo = 5.0;
    w2.red().last_increase_ideo = true;
    w2.red().votes_current = 2;
    w2.red().votes_previous = 1;
    w2.blue().ideo = -33.0;
    w2.blue().last_increase_ideo = false;
    w2.blue().votes_current = 2;
    w2.blue().votes_previous = 1;
    update_party_policies(w2);
    CHECK(w2.red().ideo == near(10.300433250870038));
}

TEST_CASE("no pull at or beyond the bliss point") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    cfg.fix_party_olig = true;
    WorldState w = bare_world(cfg);
    w.red().ideo = 33.0;  // exactly at bliss
    w.red().last_increase_ideo = true;
    w.red().votes_current = 2;
    w.red().votes_previous = 1;
    w.blue().ideo = -33.0;
    w.blue().last_increase_ideo = false;
    w.blue().votes_current = 2;
    w.blue().votes_previous = 1;

    update_party_policies(w);
    CHECK(w.red().ideo == 38.0);  // plain epsilon step, no correction term
}

TEST_CASE("simultaneous crossing moves are both rolled back") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    cfg.fix_party_olig = true;
    WorldState w = bare_world(cfg);
    // Red at 6 stepping to 1 (legal against blue's pre-update -1), blue at -1
    // stepping to 4 (legal against red's pre-update 6); the moves cross only
    // in combination.
    w.red().ideo = 6.0;
    w.red().last_increase_ideo = false;
    w.red().votes_current = 2;
    w.red().votes_previous = 1;
    w.blue().ideo = -1.0;
    w.blue().last_increase_ideo = true;
    w.blue().votes_current = 2;
    w.blue().votes_previous = 1;

    update_party_policies(w);
    CHECK(w.red().ideo == 6.0);
    CHECK(w.blue().ideo == -1.0);
}

TEST_CASE("every stage is independent of agent iteration order") {
    for (Variant variant : {Variant::IIM, Variant::PIMM, Variant::AIMM}) {
        CAPTURE(static_cast<int>(variant));
        ModelConfig cfg;
        cfg.variant = variant;
        WorldState canonical = init_world(cfg, RandomStream(11));
        WorldState permuted = canonical;

        AgentOrder order;
        order.voters.resize(cfg.voter_count);
        std::iota(order.voters.begin(), order.voters.end(), 0);
        std::reverse(order.voters.begin(), order.voters.end());
        order.oligarchs = {2, 4, 1, 3, 0};

        for (long c = 0; c < 50; ++c) {
            CycleRecord a = step(canonical, nullptr);
            CycleRecord b = step(permuted, &order);
            CHECK(a == b);
        }
        CHECK(canonical.parties == permuted.parties);
        CHECK(canonical.voters == permuted.voters);
        CHECK(canonical.oligarchs == permuted.oligarchs);
    }
}

TEST_CASE("a mismatched agent order is rejected") {
    ModelConfig cfg;
    WorldState w = init_world(cfg, RandomStream(2));
    AgentOrder order;
    order.voters = {0, 1, 2};  // wrong length
    CHECK_THROWS_AS(vote(w, &order), std::invalid_argument);
}

TEST_CASE("long-run state stays inside its invariant bounds") {
    ModelConfig cfg;
    WorldState w = init_world(cfg, RandomStream(3));
    for (long c = 0; c < 200; ++c) {
        CycleRecord r = step(w);
        CHECK(r.red_olig >= -100.0);
        CHECK(r.red_olig <= 100.0);
        CHECK(r.blue_olig >= -100.0);
        CHECK(r.blue_olig <= 100.0);
        CHECK(r.red_ideo >= -100.0);
        CHECK(r.red_ideo <= 100.0);
        CHECK(r.tax_rate >= 0.0);
        CHECK(r.tax_rate <= cfg.voter_max_tax);
        CHECK(r.tax_collected ==
              doctest::Approx(r.tax_rate * 100 * 9.5).epsilon(1e-12));
        CHECK(r.total_donations >= 0.0);
        CHECK(r.mean_oligarch_profit ==
              doctest::Approx((r.tax_collected - r.total_donations) / 5.0).epsilon(1e-12));
        CHECK(w.red().votes_current + w.blue().votes_current == 100);
        for (const Voter& v : w.voters) {
            CHECK(v.olig_salience >= 0.0);
            CHECK(v.olig_salience <= cfg.voter_max_tax);
        }
        for (const Oligarch& o : w.oligarchs) {
            CHECK(o.donation_size >= 0.0);
            CHECK(o.donation_size <= 1.0);
        }
    }
}

TEST_CASE("positional runs never let the parties switch sides") {
    ModelConfig cfg;
    cfg.variant = Variant::PIMM;
    WorldState w = init_world(cfg, RandomStream(19));
    for (long c = 0; c < 1300; ++c) {
        step(w);
        CHECK(w.red().ideo > w.blue().ideo);
    }
}

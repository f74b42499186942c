#include "doctest.h"

#include <algorithm>
#include <random>

#include "indivec/error.hpp"
#include "indivec/labels.hpp"

using namespace indivec;

namespace {

Vote vote(Leaning l, double sim) { return Vote{l, sim, "", 0}; }

std::vector<Vote> votes_with_counts(int left, int center, int right) {
    std::vector<Vote> votes;
    for (int i = 0; i < left; ++i) votes.push_back(vote(Leaning::Left, 0.5));
    for (int i = 0; i < center; ++i) votes.push_back(vote(Leaning::Center, 0.5));
    for (int i = 0; i < right; ++i) votes.push_back(vote(Leaning::Right, 0.5));
    return votes;
}

// Independent vote oracle: map to the space, count, apply the documented
// tie rules.
std::string oracle_winner(const std::vector<Vote>& votes, LabelSpace space) {
    std::map<std::string, int> counts;
    std::map<std::string, double> sums;
    for (const Vote& v : votes) {
        std::string label(space == LabelSpace::Binary
                              ? to_string(map_leaning_to_binary(v.label))
                              : to_string(v.label));
        counts[label] += 1;
    }
    for (auto& [label, _] : counts) {
        std::vector<double> sims;
        for (const Vote& v : votes) {
            std::string l(space == LabelSpace::Binary ? to_string(map_leaning_to_binary(v.label))
                                                      : to_string(v.label));
            if (l == label) sims.push_back(v.similarity);
        }
        std::sort(sims.begin(), sims.end());
        double s = 0;
        for (double x : sims) s += x;
        sums[label] = s;
    }
    std::string best;
    for (const auto& [label, count] : counts) {
        if (best.empty() || count > counts[best] ||
            (count == counts[best] && sums[label] > sums[best])) {
            best = label;
        }
    }
    return best;
}

}  // namespace

TEST_SUITE("labels") {

TEST_CASE("serialized forms") {
    CHECK(to_string(Leaning::Left) == "left");
    CHECK(to_string(Leaning::Center) == "center");
    CHECK(to_string(Leaning::Right) == "right");
    CHECK(to_string(BinaryBias::Biased) == "biased");
    CHECK(to_string(BinaryBias::NonBiased) == "non-biased");
    CHECK(leaning_from_string("right") == Leaning::Right);
    CHECK(binary_from_string("non-biased") == BinaryBias::NonBiased);
    CHECK_THROWS_AS(leaning_from_string("Left"), Error);
    CHECK_THROWS_AS(binary_from_string("unbiased"), Error);
}

TEST_CASE("leaning tag aliases") {
    CHECK(parse_leaning_tag("Left Leaning") == Leaning::Left);
    CHECK(parse_leaning_tag("left-leaning") == Leaning::Left);
    CHECK(parse_leaning_tag("RIGHT LEANING") == Leaning::Right);
    CHECK(parse_leaning_tag("Neutral") == Leaning::Center);
    CHECK(parse_leaning_tag(" center ") == Leaning::Center);
    CHECK(!parse_leaning_tag("both").has_value());
}

TEST_CASE("category names") {
    CHECK(parse_category_name("Tone and Language") == BiasCategory::ToneAndLanguage);
    CHECK(parse_category_name("sources and citations") == BiasCategory::SourcesAndCitations);
    CHECK(parse_category_name("EXAMPLES AND ANALOGIES") == BiasCategory::ExamplesAndAnalogies);
    CHECK(!parse_category_name("Vibes") .has_value());
}

TEST_CASE("binary mapping") {
    CHECK(map_leaning_to_binary(Leaning::Left) == BinaryBias::Biased);
    CHECK(map_leaning_to_binary(Leaning::Center) == BinaryBias::NonBiased);
    CHECK(map_leaning_to_binary(Leaning::Right) == BinaryBias::Biased);
    // NonBiased iff Center.
    for (Leaning l : {Leaning::Left, Leaning::Center, Leaning::Right}) {
        CHECK((map_leaning_to_binary(l) == BinaryBias::NonBiased) == (l == Leaning::Center));
    }
}

TEST_CASE("label spaces") {
    auto binary = labels_in_space(LabelSpace::Binary);
    REQUIRE(binary.size() == 2);
    CHECK(binary[0] == "biased");
    CHECK(binary[1] == "non-biased");
    auto three = labels_in_space(LabelSpace::ThreeWay);
    REQUIRE(three.size() == 3);
    CHECK(three[0] == "left");
}

TEST_CASE("majority vote: unanimous binary") {
    auto votes = votes_with_counts(2, 0, 1);  // all map to biased
    auto outcome = majority_vote(votes, LabelSpace::Binary);
    CHECK(outcome.winner == "biased");
    REQUIRE(outcome.tally.size() == 1);
    CHECK(outcome.tally.at("biased") == 3);
}

TEST_CASE("majority vote: 3-way plurality 12/18/10") {
    auto votes = votes_with_counts(12, 18, 10);
    auto outcome = majority_vote(votes, LabelSpace::ThreeWay);
    CHECK(outcome.winner == "center");
    CHECK(outcome.tally.at("left") == 12);
    CHECK(outcome.tally.at("center") == 18);
    CHECK(outcome.tally.at("right") == 10);
    CHECK(outcome.winner == oracle_winner(votes, LabelSpace::ThreeWay));
}

TEST_CASE("majority vote: count tie broken by summed similarity") {
    // biased 0.9+0.8=1.7 beats non-biased 0.99+0.5=1.49
    std::vector<Vote> votes = {
        vote(Leaning::Left, 0.9),
        vote(Leaning::Right, 0.8),
        vote(Leaning::Center, 0.99),
        vote(Leaning::Center, 0.5),
    };
    auto outcome = majority_vote(votes, LabelSpace::Binary);
    CHECK(outcome.winner == "biased");
    CHECK(outcome.tally.at("biased") == 2);
    CHECK(outcome.tally.at("non-biased") == 2);
}

TEST_CASE("majority vote: full tie falls back to lexicographic order") {
    std::vector<Vote> votes = {vote(Leaning::Left, 0.5), vote(Leaning::Center, 0.5)};
    auto outcome = majority_vote(votes, LabelSpace::Binary);
    CHECK(outcome.winner == "biased");  // "biased" < "non-biased"
}

TEST_CASE("majority vote: map-then-vote differs from vote-then-map") {
    // 4 left, 5 center, 4 right: center wins 3-way, biased wins binary.
    auto votes = votes_with_counts(4, 5, 4);
    CHECK(majority_vote(votes, LabelSpace::ThreeWay).winner == "center");
    CHECK(majority_vote(votes, LabelSpace::Binary).winner == "biased");
}

TEST_CASE("majority vote: errors") {
    CHECK_THROWS_AS(majority_vote({}, LabelSpace::Binary), Error);
    std::vector<Vote> nan_vote = {vote(Leaning::Left, std::nan(""))};
    CHECK_THROWS_AS(majority_vote(nan_vote, LabelSpace::Binary), Error);
}

TEST_CASE("majority vote: permutation invariance") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> sim(-1.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        std::vector<Vote> votes;
        const int n = 1 + static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) {
            votes.push_back(vote(static_cast<Leaning>(pick(rng)), sim(rng)));
        }
        const auto space = (round % 2 == 0) ? LabelSpace::Binary : LabelSpace::ThreeWay;
        const auto base = majority_vote(votes, space);
        auto shuffled = votes;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto again = majority_vote(shuffled, space);
        CHECK(base.winner == again.winner);
        CHECK(base.tally == again.tally);
        CHECK(base.winner == oracle_winner(votes, space));
    }
}

TEST_CASE("majority vote: duplicating the winner keeps the winner") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> sim(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        std::vector<Vote> votes;
        const int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) {
            votes.push_back(vote(static_cast<Leaning>(pick(rng)), sim(rng)));
        }
        const auto space = (round % 2 == 0) ? LabelSpace::Binary : LabelSpace::ThreeWay;
        const auto base = majority_vote(votes, space);
        // Re-add one of the votes that carried the winning label.
        for (const Vote& v : votes) {
            if (std::string(leaning_label_in_space(v.label, space)) == base.winner) {
                votes.push_back(v);
                break;
            }
        }
        CHECK(majority_vote(votes, space).winner == base.winner);
    }
}

}  // TEST_SUITE

#include <doctest.h>

#include <map>
#include <set>

#include "gendetect/errors.hpp"
#include "gendetect/imbalance.hpp"
#include "gendetect/rng.hpp"
#include "helpers.hpp"

using namespace gendetect;

TEST_CASE("strategy names round trip and unknowns are rejected") {
    for (auto s : {ImbalanceStrategy::None, ImbalanceStrategy::Oversample,
                   ImbalanceStrategy::Undersample, ImbalanceStrategy::ClassWeights})
        CHECK(parse_strategy(strategy_name(s)) == s);
    CHECK(parse_strategy("oversample") == ImbalanceStrategy::Oversample);
    CHECK_THROWS_AS(parse_strategy("downsample"), ConfigError);
}

TEST_CASE("oversample equalizes counts by duplicating minority draws") {
    Corpus c = testutil::label_corpus(2, 5);
    Corpus out = oversample(c, 3);
    CHECK(out.count(ClassLabel::Human) == 5);
    CHECK(out.count(ClassLabel::Generated) == 5);
    CHECK(out.size() == 10);

    // Originals first, in input order.
    for (size_t i = 0; i < c.size(); ++i) CHECK(out.at(i).id == c.at(i).id);

    // Duplicates copy a minority item verbatim under a derived id.
    std::map<std::string, const Excerpt*> originals;
    for (const auto& e : c.items()) originals[e.id] = &e;
    for (size_t i = c.size(); i < out.size(); ++i) {
        const Excerpt& dup = out.at(i);
        CHECK(dup.label == ClassLabel::Human);
        auto tilde = dup.id.find("~dup");
        REQUIRE(tilde != std::string::npos);
        std::string src_id = dup.id.substr(0, tilde);
        REQUIRE(originals.count(src_id) == 1);
        CHECK(dup.text == originals[src_id]->text);
    }

    SUBCASE("derived ids match the draw sequence") {
        // Replay the generator: draws come from rand_below over the two
        // minority positions, and the Nth draw gets suffix "~dupN".
        RngEngine rng(3);
        std::vector<std::string> minority_ids;
        for (const auto& e : c.items())
            if (e.label == ClassLabel::Human) minority_ids.push_back(e.id);
        for (size_t i = 0; i < 3; ++i) {
            size_t pick = static_cast<size_t>(rand_below(rng, minority_ids.size()));
            std::string expect = minority_ids[pick] + "~dup" + std::to_string(i + 1);
            CHECK(out.at(c.size() + i).id == expect);
        }
    }

    SUBCASE("deterministic in the seed") { CHECK(oversample(c, 3) == out); }

    SUBCASE("balanced input passes through unchanged") {
        Corpus even = testutil::label_corpus(3, 3);
        CHECK(oversample(even, 1) == even);
    }

    SUBCASE("single-class input is rejected") {
        Corpus lone = testutil::label_corpus(3, 0);
        CHECK_THROWS_AS(oversample(lone, 1), std::invalid_argument);
        CHECK_THROWS_AS(undersample(lone, 1), std::invalid_argument);
        CHECK_THROWS_AS(class_weights(lone), std::invalid_argument);
    }
}

TEST_CASE("undersample keeps all minority items and a majority subset in order") {
    Corpus c = testutil::label_corpus(2, 5);
    Corpus out = undersample(c, 11);
    CHECK(out.count(ClassLabel::Human) == 2);
    CHECK(out.count(ClassLabel::Generated) == 2);
    CHECK(out.size() == 4);

    std::set<std::string> input_ids;
    for (const auto& e : c.items()) input_ids.insert(e.id);
    size_t cursor = 0;
    for (const auto& kept : out.items()) {
        CHECK(input_ids.count(kept.id) == 1);
        // order preserved: every kept item appears later in the input
        while (cursor < c.size() && c.at(cursor).id != kept.id) ++cursor;
        REQUIRE(cursor < c.size());
    }

    CHECK(undersample(c, 11) == out);
}

TEST_CASE("class_weights satisfies the exact balancing identity") {
    SUBCASE("2 vs 5") {
        Corpus c = testutil::label_corpus(2, 5);
        ClassWeights w = class_weights(c);
        CHECK(w.exact(ClassLabel::Human) == Ratio::of(7, 4));
        CHECK(w.exact(ClassLabel::Generated) == Ratio::of(7, 10));
    }
    SUBCASE("1 vs 9") {
        Corpus c = testutil::label_corpus(1, 9);
        ClassWeights w = class_weights(c);
        CHECK(w.exact(ClassLabel::Human) == Ratio{5, 1});
        CHECK(w.exact(ClassLabel::Generated) == Ratio{5, 9});
        // n_c * w_c = N / 2 exactly for both classes
        CHECK(Ratio::of(1, 1) * w.exact(ClassLabel::Human) == Ratio{5, 1});
        CHECK(Ratio::of(9, 1) * w.exact(ClassLabel::Generated) == Ratio{5, 1});
    }
    SUBCASE("balanced corpus gets unit weights") {
        Corpus c = testutil::label_corpus(4, 4);
        ClassWeights w = class_weights(c);
        CHECK(w.exact(ClassLabel::Human) == Ratio{1, 1});
        CHECK(w.exact(ClassLabel::Generated) == Ratio{1, 1});
    }
}

TEST_CASE("apply_imbalance dispatches on strategy") {
    Corpus c = testutil::label_corpus(2, 5);
    CHECK(apply_imbalance(c, {ImbalanceStrategy::None, 9}) == c);
    CHECK(apply_imbalance(c, {ImbalanceStrategy::ClassWeights, 9}) == c);
    CHECK(apply_imbalance(c, {ImbalanceStrategy::Oversample, 9}) == oversample(c, 9));
    CHECK(apply_imbalance(c, {ImbalanceStrategy::Undersample, 9}) == undersample(c, 9));
}

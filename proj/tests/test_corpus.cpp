#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "gendetect/corpus.hpp"
#include "gendetect/errors.hpp"
#include "gendetect/text.hpp"
#include "helpers.hpp"

using namespace gendetect;

TEST_CASE("parse_label accepts all spellings and rejects the rest") {
    CHECK(parse_label("0") == ClassLabel::Human);
    CHECK(parse_label("human") == ClassLabel::Human);
    CHECK(parse_label(" Human-Written ") == ClassLabel::Human);
    CHECK(parse_label("HUMAN_WRITTEN") == ClassLabel::Human);
    CHECK(parse_label("1") == ClassLabel::Generated);
    CHECK(parse_label("Generated") == ClassLabel::Generated);
    CHECK(parse_label("machine-generated") == ClassLabel::Generated);
    CHECK(parse_label("MACHINE_GENERATED") == ClassLabel::Generated);
    CHECK(parse_label("") == std::nullopt);
    CHECK(parse_label("   ") == std::nullopt);
    CHECK_THROWS_AS(parse_label("maybe"), DataError);
    CHECK_THROWS_AS(parse_label("2"), DataError);
}

TEST_CASE("label helpers") {
    CHECK(label_value(ClassLabel::Human) == 0);
    CHECK(label_value(ClassLabel::Generated) == 1);
    CHECK(label_from_value(1) == ClassLabel::Generated);
    CHECK_THROWS_AS(label_from_value(3), std::invalid_argument);
    CHECK(label_name(ClassLabel::Human) == "human");
    CHECK(label_name(ClassLabel::Generated) == "generated");
}

TEST_CASE("Corpus construction validates ids and texts") {
    CHECK_THROWS_AS(Corpus({{"a", "ok", ClassLabel::Human, {}},
                            {"a", "dup id", ClassLabel::Human, {}}}),
                    DataError);
    CHECK_THROWS_AS(Corpus({{"", "no id", ClassLabel::Human, {}}}), DataError);
    CHECK_THROWS_AS(Corpus({{"a", "   ", ClassLabel::Human, {}}}), DataError);

    Corpus c({{"a", "one", ClassLabel::Human, {}},
              {"b", "two", ClassLabel::Generated, {}},
              {"c", "three", std::nullopt, {}}});
    CHECK(c.size() == 3);
    CHECK(c.count(ClassLabel::Human) == 1);
    CHECK(c.count(ClassLabel::Generated) == 1);
    CHECK(c.unlabeled_count() == 1);
    CHECK_FALSE(c.fully_labeled());
}

TEST_CASE("corpus_from_table maps columns per schema") {
    ColumnSchema schema;
    CsvTable t = parse_delimited("id,text,label\nx1,alpha beta,0\nx2,gamma,1\nx3,delta,\n",
                                 ',', "mem");
    Corpus c = corpus_from_table(t, schema, "mem");
    CHECK(c.size() == 3);
    CHECK(c.at(0).label == ClassLabel::Human);
    CHECK(c.at(1).label == ClassLabel::Generated);
    CHECK(c.at(2).label == std::nullopt);

    SUBCASE("missing required column") {
        CsvTable bad = parse_delimited("id,body\nx,t\n", ',', "mem");
        CHECK_THROWS_WITH_AS(corpus_from_table(bad, schema, "mem"),
                             doctest::Contains("text"), DataError);
    }

    SUBCASE("empty label column name means unlabeled file") {
        ColumnSchema unlabeled = schema;
        unlabeled.label_column.clear();
        CsvTable t2 = parse_delimited("id,text\nx,t\n", ',', "mem");
        Corpus c2 = corpus_from_table(t2, unlabeled, "mem");
        CHECK(c2.at(0).label == std::nullopt);
    }

    SUBCASE("row diagnostics carry the data row number") {
        CsvTable bad = parse_delimited("id,text,label\nx,good,0\ny,   ,1\n", ',', "mem");
        CHECK_THROWS_WITH_AS(corpus_from_table(bad, schema, "mem"),
                             doctest::Contains("row 2"), DataError);
    }

    SUBCASE("provenance columns round trip when present") {
        CsvTable t3 = parse_delimited(
            "id,text,label,method,source_id\nb1,rewritten text,1,bt:fr,x1\nx1,source text,0,,\n",
            ',', "mem");
        Corpus c3 = corpus_from_table(t3, schema, "mem");
        REQUIRE(c3.at(0).provenance.has_value());
        CHECK(c3.at(0).provenance->method == "bt:fr");
        CHECK(c3.at(0).provenance->source_id == "x1");
        CHECK_FALSE(c3.at(1).provenance.has_value());

        CsvTable out = corpus_to_table(c3, schema);
        CHECK(out.column("method") >= 0);
        Corpus back = corpus_from_table(out, schema, "roundtrip");
        CHECK(back == c3);
    }

    SUBCASE("provenance columns omitted when nothing carries provenance") {
        CsvTable out = corpus_to_table(c, schema);
        CHECK(out.column("method") == -1);
        CHECK(out.column("source_id") == -1);
    }
}

TEST_CASE("load and write corpus round trip through a file") {
    auto dir = testutil::make_temp_dir("corpus");
    ColumnSchema schema;
    Corpus c = testutil::label_corpus(3, 2);
    write_corpus(dir / "c.csv", c, schema);
    Corpus back = load_corpus(dir / "c.csv", schema);
    CHECK(back == c);
    std::filesystem::remove_all(dir);
}

TEST_CASE("corpus_stats computes exact means and extremes") {
    Corpus c({{"a", "One two three. Four five.", ClassLabel::Human, {}},
              {"b", "Six seven.", ClassLabel::Generated, {}}});
    CorpusStats s = corpus_stats(c);
    // word_count treats detached punctuation as tokens: 7 and 3 here.
    CHECK(s.min_words == 3);
    CHECK(s.max_words == 7);
    CHECK(s.avg_words == doctest::Approx(5.0));
    CHECK(s.min_sents == 1);
    CHECK(s.max_sents == 2);
    CHECK(s.avg_sents == doctest::Approx(1.5));
}

TEST_CASE("stats_text lists the advertised keys") {
    Corpus c = testutil::label_corpus(2, 1);
    std::string text = stats_text(c, corpus_stats(c));
    for (const char* key : {"items", "human", "generated", "unlabeled", "avg_words",
                            "min_words", "max_words", "avg_sents", "min_sents", "max_sents"})
        CHECK_MESSAGE(text.find(key) != std::string::npos, "missing key: " << key);
}

TEST_CASE("stratified_kfold balances classes within one item per fold") {
    Corpus c = testutil::label_corpus(10, 5);
    FoldPlan plan = stratified_kfold(c, 3, 42);
    CHECK(plan.k == 3);
    CHECK(plan.assignments.size() == c.size());

    std::array<std::array<int, 2>, 3> counts{};
    for (const auto& item : c.items()) {
        int fold = plan.assignments.at(item.id);
        REQUIRE(fold >= 0);
        REQUIRE(fold < 3);
        counts[fold][label_value(*item.label)]++;
    }
    for (int f = 0; f < 3; ++f) {
        CHECK(counts[f][0] >= 3);  // 10 humans over 3 folds
        CHECK(counts[f][0] <= 4);
        CHECK(counts[f][1] >= 1);  // 5 generated over 3 folds
        CHECK(counts[f][1] <= 2);
    }

    SUBCASE("deterministic in the seed") {
        CHECK(stratified_kfold(c, 3, 42) == plan);
        CHECK(stratified_kfold(c, 3, 43) != plan);
    }

    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(stratified_kfold(c, 1, 42), std::invalid_argument);
        Corpus tiny = testutil::label_corpus(2, 1);
        CHECK_THROWS_AS(stratified_kfold(tiny, 2, 42), std::invalid_argument);
        Corpus part({{"a", "x", ClassLabel::Human, {}}, {"b", "y", std::nullopt, {}}});
        CHECK_THROWS_AS(stratified_kfold(part, 2, 42), std::invalid_argument);
    }
}

TEST_CASE("fold_items and fold_complement partition the corpus in order") {
    Corpus c = testutil::label_corpus(8, 4);
    FoldPlan plan = stratified_kfold(c, 3, 7);
    for (int f = 0; f < 3; ++f) {
        Corpus eval = fold_items(c, plan, f);
        Corpus train = fold_complement(c, plan, f);
        CHECK(eval.size() + train.size() == c.size());
        std::set<std::string> seen;
        for (const auto& e : eval.items()) seen.insert(e.id);
        for (const auto& e : train.items()) CHECK(seen.count(e.id) == 0);

        // corpus order is preserved inside each split
        auto ordered = [&](const Corpus& part) {
            std::vector<size_t> pos;
            for (const auto& e : part.items())
                for (size_t i = 0; i < c.size(); ++i)
                    if (c.at(i).id == e.id) pos.push_back(i);
            return std::is_sorted(pos.begin(), pos.end());
        };
        CHECK(ordered(eval));
        CHECK(ordered(train));
    }

    SUBCASE("plan must cover the corpus") {
        FoldPlan partial = plan;
        partial.assignments.erase(partial.assignments.begin());
        CHECK_THROWS_AS(fold_items(c, partial, 0), std::invalid_argument);
    }
}

TEST_CASE("fold plan file round trip") {
    auto dir = testutil::make_temp_dir("folds");
    Corpus c = testutil::label_corpus(6, 6);
    FoldPlan plan = stratified_kfold(c, 3, 99);
    write_fold_plan(dir / "folds.json", plan, 99);
    FoldPlan back = read_fold_plan(dir / "folds.json");
    CHECK(back == plan);
    std::filesystem::remove_all(dir);
}

TEST_CASE("make_synthetic_corpus is deterministic and separable by design") {
    Corpus a = make_synthetic_corpus(20, 30, 1);
    Corpus b = make_synthetic_corpus(20, 30, 1);
    CHECK(a == b);
    CHECK(a.count(ClassLabel::Human) == 20);
    CHECK(a.count(ClassLabel::Generated) == 30);
    CHECK(a.fully_labeled());

    Corpus other = make_synthetic_corpus(20, 30, 2);
    CHECK(a != other);

    // Generated items open with a duplicated lead: the first sentence reads
    // "<lead> <lead>." because the first copy drops its period.
    size_t dup_leads = 0;
    for (const auto& item : a.items()) {
        if (item.label != ClassLabel::Generated) continue;
        auto sents = split_sentences(item.text);
        REQUIRE(sents.size() >= 3);
        auto toks = word_tokens(sents[0]);
        if (!toks.empty() && toks.back() == ".") toks.pop_back();
        if (toks.size() % 2 == 0 &&
            std::equal(toks.begin(), toks.begin() + toks.size() / 2,
                       toks.begin() + toks.size() / 2))
            ++dup_leads;
    }
    CHECK(dup_leads == 30);
}

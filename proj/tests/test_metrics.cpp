#include <doctest.h>

#include <vector>

#include "gendetect/baseline.hpp"
#include "gendetect/errors.hpp"
#include "gendetect/metrics.hpp"
#include "gendetect/rng.hpp"
#include "helpers.hpp"

using namespace gendetect;

namespace {

// Independent scorer: per-class precision/recall/F1 straight from label
// vectors, no confusion matrix, doubles only. Zero denominators score 0.
struct BruteScores {
    double precision[2];
    double recall[2];
    double f1[2];
    double macro_p, macro_r, macro_f1;
};

BruteScores brute_force(const std::vector<ClassLabel>& y_true,
                        const std::vector<ClassLabel>& y_pred) {
    BruteScores out{};
    for (int c = 0; c < 2; ++c) {
        double tp = 0, fp = 0, fn = 0;
        for (size_t i = 0; i < y_true.size(); ++i) {
            bool t = label_value(y_true[i]) == c;
            bool p = label_value(y_pred[i]) == c;
            if (t && p) tp++;
            if (!t && p) fp++;
            if (t && !p) fn++;
        }
        out.precision[c] = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        out.recall[c] = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        double denom = out.precision[c] + out.recall[c];
        out.f1[c] = denom > 0 ? 2 * out.precision[c] * out.recall[c] / denom : 0.0;
    }
    out.macro_p = (out.precision[0] + out.precision[1]) / 2;
    out.macro_r = (out.recall[0] + out.recall[1]) / 2;
    out.macro_f1 = (out.f1[0] + out.f1[1]) / 2;
    return out;
}

}  // namespace

TEST_CASE("confusion counts and rejects mismatched lengths") {
    std::vector<ClassLabel> t{ClassLabel::Human, ClassLabel::Human, ClassLabel::Generated,
                              ClassLabel::Generated};
    std::vector<ClassLabel> p{ClassLabel::Human, ClassLabel::Generated, ClassLabel::Generated,
                              ClassLabel::Generated};
    ConfusionMatrix m = confusion(t, p);
    CHECK(m.at(ClassLabel::Human, ClassLabel::Human) == 1);
    CHECK(m.at(ClassLabel::Human, ClassLabel::Generated) == 1);
    CHECK(m.at(ClassLabel::Generated, ClassLabel::Human) == 0);
    CHECK(m.at(ClassLabel::Generated, ClassLabel::Generated) == 2);
    CHECK(m.total() == 4);

    std::vector<ClassLabel> shorter{ClassLabel::Human};
    CHECK_THROWS_AS(confusion(t, shorter), std::invalid_argument);
}

TEST_CASE("macro_scores_exact pinned example") {
    // counts [[3,1],[0,1]]: human P=1, R=3/4, F1=6/7; generated P=1/2, R=1, F1=2/3
    ConfusionMatrix m;
    m.counts = {{{3, 1}, {0, 1}}};
    ExactReport r = macro_scores_exact(m);
    CHECK(r.per_class[0].precision == Ratio{1, 1});
    CHECK(r.per_class[0].recall == Ratio{3, 4});
    CHECK(r.per_class[0].f1 == Ratio{6, 7});
    CHECK(r.per_class[1].precision == Ratio{1, 2});
    CHECK(r.per_class[1].recall == Ratio{1, 1});
    CHECK(r.per_class[1].f1 == Ratio{2, 3});
    CHECK(r.macro.f1 == Ratio{16, 21});
    CHECK(r.macro.precision == Ratio{3, 4});
    CHECK(r.macro.recall == Ratio{7, 8});
}

TEST_CASE("zero denominators score zero instead of dividing") {
    // Everything predicted generated while everything is generated: the
    // human row is empty, so human P and R are 0 by convention.
    ConfusionMatrix m;
    m.counts = {{{0, 0}, {0, 5}}};
    ExactReport r = macro_scores_exact(m);
    CHECK(r.per_class[0].precision == Ratio{0, 1});
    CHECK(r.per_class[0].recall == Ratio{0, 1});
    CHECK(r.per_class[0].f1 == Ratio{0, 1});
    CHECK(r.per_class[1].f1 == Ratio{1, 1});
    CHECK(r.macro.f1 == Ratio{1, 2});
}

TEST_CASE("always-generated degenerate predictor on an imbalanced corpus") {
    // 1686 human, 3664 generated, everything predicted generated.
    ConfusionMatrix m;
    m.counts = {{{0, 1686}, {0, 3664}}};
    ExactReport r = macro_scores_exact(m);
    CHECK(r.per_class[1].precision == Ratio::of(3664, 5350));
    CHECK(r.per_class[1].recall == Ratio{1, 1});
    CHECK(r.macro.f1 == Ratio::of(1832, 4507));
    CHECK(r.macro.f1.value() == doctest::Approx(0.40647).epsilon(1e-4));
}

TEST_CASE("macro_scores agrees with an independent brute-force scorer") {
    SUBCASE("exhaustive over every label pair sequence of length <= 5") {
        for (size_t len = 1; len <= 5; ++len) {
            size_t combos = 1;
            for (size_t i = 0; i < len; ++i) combos *= 4;
            for (size_t code = 0; code < combos; ++code) {
                std::vector<ClassLabel> t, p;
                size_t rest = code;
                for (size_t i = 0; i < len; ++i) {
                    t.push_back(label_from_value(static_cast<int>(rest & 1)));
                    p.push_back(label_from_value(static_cast<int>((rest >> 1) & 1)));
                    rest >>= 2;
                }
                MetricsReport ours = macro_scores(confusion(t, p));
                BruteScores ref = brute_force(t, p);
                for (int c = 0; c < 2; ++c) {
                    REQUIRE(ours.per_class[c].precision ==
                            doctest::Approx(ref.precision[c]).epsilon(1e-12));
                    REQUIRE(ours.per_class[c].recall ==
                            doctest::Approx(ref.recall[c]).epsilon(1e-12));
                    REQUIRE(ours.per_class[c].f1 == doctest::Approx(ref.f1[c]).epsilon(1e-12));
                }
                REQUIRE(ours.macro.f1 == doctest::Approx(ref.macro_f1).epsilon(1e-12));
            }
        }
    }

    SUBCASE("randomized longer sequences") {
        RngEngine rng(404);
        for (int trial = 0; trial < 200; ++trial) {
            size_t len = 6 + static_cast<size_t>(rand_below(rng, 200));
            std::vector<ClassLabel> t, p;
            for (size_t i = 0; i < len; ++i) {
                t.push_back(label_from_value(static_cast<int>(rand_below(rng, 2))));
                p.push_back(label_from_value(static_cast<int>(rand_below(rng, 2))));
            }
            MetricsReport ours = macro_scores(confusion(t, p));
            BruteScores ref = brute_force(t, p);
            REQUIRE(ours.macro.precision == doctest::Approx(ref.macro_p).epsilon(1e-12));
            REQUIRE(ours.macro.recall == doctest::Approx(ref.macro_r).epsilon(1e-12));
            REQUIRE(ours.macro.f1 == doctest::Approx(ref.macro_f1).epsilon(1e-12));
        }
    }
}

TEST_CASE("report_json exposes the advertised structure") {
    ConfusionMatrix m;
    m.counts = {{{3, 1}, {0, 1}}};
    MetricsReport r = macro_scores(m);
    std::string json = report_json(r);
    for (const char* key : {"schema_version", "macro", "per_class", "confusion", "f1"})
        CHECK_MESSAGE(json.find(key) != std::string::npos, "missing key: " << key);
    std::string table = report_table(r);
    CHECK(table.find("macro") != std::string::npos);
}

TEST_CASE("cross_validate pools folds and averages their scores") {
    Corpus corpus = make_synthetic_corpus(24, 24, 5);
    FoldPlan plan = stratified_kfold(corpus, 3, 5);
    BaselineBackend backend;
    TrainRecipe recipe;
    recipe.train.seed = 5;

    MetricsReport report = cross_validate(corpus, plan, backend, recipe);
    REQUIRE(report.n_folds == 3);
    REQUIRE(report.folds.size() == 3);
    CHECK(report.matrix.total() == static_cast<long long>(corpus.size()));

    // pooled matrix is the sum of the fold matrices
    ConfusionMatrix pooled;
    for (const auto& fold : report.folds) pooled += fold.matrix;
    CHECK(pooled == report.matrix);

    // top-level macro F1 is the unweighted mean of the fold values
    double mean = 0;
    for (const auto& fold : report.folds) mean += fold.macro.f1;
    mean /= 3;
    CHECK(report.macro.f1 == doctest::Approx(mean).epsilon(1e-12));

    // the separable fixture should be learned nearly perfectly
    CHECK(report.macro.f1 > 0.9);

    SUBCASE("rerun is identical") {
        MetricsReport again = cross_validate(corpus, plan, backend, recipe);
        CHECK(again.matrix == report.matrix);
        CHECK(again.macro.f1 == report.macro.f1);
    }

    SUBCASE("resampling strategies run per fold") {
        Corpus skewed = make_synthetic_corpus(12, 36, 6);
        FoldPlan skew_plan = stratified_kfold(skewed, 3, 6);
        for (auto strategy : {ImbalanceStrategy::Oversample, ImbalanceStrategy::Undersample,
                              ImbalanceStrategy::ClassWeights}) {
            TrainRecipe r2;
            r2.imbalance.strategy = strategy;
            r2.imbalance.seed = 6;
            r2.train.seed = 6;
            MetricsReport rep = cross_validate(skewed, skew_plan, backend, r2);
            CHECK(rep.matrix.total() == static_cast<long long>(skewed.size()));
            CHECK(rep.macro.f1 > 0.8);
        }
    }

    SUBCASE("unlabeled corpora are rejected") {
        Corpus part({{"a", "x y", ClassLabel::Human, {}},
                     {"b", "y z", ClassLabel::Generated, {}},
                     {"c", "z w", std::nullopt, {}}});
        CHECK_THROWS_AS(cross_validate(part, plan, backend, recipe), std::invalid_argument);
    }

    SUBCASE("fold errors carry the fold index") {
        TrainRecipe broken = recipe;
        broken.train.max_seq_len = 77;
        CHECK_THROWS_WITH_AS(cross_validate(corpus, plan, backend, broken),
                             doctest::Contains("fold 0"), ConfigError);
    }
}

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gendetect/classify.hpp"
#include "gendetect/corpus.hpp"
#include "gendetect/imbalance.hpp"
#include "gendetect/ratio.hpp"

namespace gendetect {

// counts[true class][predicted class], label-value order (human, generated).
struct ConfusionMatrix {
    std::array<std::array<long long, 2>, 2> counts{{{0, 0}, {0, 0}}};

    long long at(ClassLabel t, ClassLabel p) const {
        return counts[label_value(t)][label_value(p)];
    }
    long long total() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& o);
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred);

struct ExactScores {
    Ratio precision;
    Ratio recall;
    Ratio f1;
    bool operator==(const ExactScores&) const = default;
};

// Per class: P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2TP/(2TP+FP+FN); a zero
// denominator yields 0. Macro values are unweighted two-class means. All in
// exact rational arithmetic.
struct ExactReport {
    std::array<ExactScores, 2> per_class;
    ExactScores macro;
};
ExactReport macro_scores_exact(const ConfusionMatrix& matrix);

struct ClassScores {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    bool operator==(const ClassScores&) const = default;
};

struct MetricsReport {
    std::array<ClassScores, 2> per_class;
    ClassScores macro;
    ConfusionMatrix matrix;
    std::optional<int> n_folds;
    std::vector<MetricsReport> folds;  // per-fold detail when cross-validated
};

MetricsReport macro_scores(const ConfusionMatrix& matrix);

std::string report_json(const MetricsReport& report);
std::string report_table(const MetricsReport& report);

struct TrainRecipe {
    ImbalancePlan imbalance;
    TrainConfig train;
};

// For each fold: resample (or weight) the training folds only, fit, predict
// the held-out fold. Top-level macro/per-class values are unweighted means of
// the per-fold values; the top-level matrix pools the fold matrices; per-fold
// reports are attached. Fold seeds derive from the recipe seeds and the fold
// index, so a rerun is byte-identical. Errors are annotated with the fold.
MetricsReport cross_validate(const Corpus& corpus, const FoldPlan& plan,
                             ClassifierBackend& backend, const TrainRecipe& recipe);

}  // namespace gendetect

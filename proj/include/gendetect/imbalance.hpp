#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "gendetect/corpus.hpp"
#include "gendetect/ratio.hpp"

namespace gendetect {

enum class ImbalanceStrategy { None, Oversample, Undersample, ClassWeights };

std::string_view strategy_name(ImbalanceStrategy s);
ImbalanceStrategy parse_strategy(std::string_view name);

struct ImbalancePlan {
    ImbalanceStrategy strategy = ImbalanceStrategy::None;
    uint64_t seed = 0;
    bool operator==(const ImbalancePlan&) const = default;
};

// Inverse-frequency weights w_c = N / (2 * n_c), kept as exact rationals so
// the balancing identity n_c * w_c = N / 2 holds without rounding.
struct ClassWeights {
    std::array<Ratio, 2> weights{Ratio{1, 1}, Ratio{1, 1}};

    const Ratio& exact(ClassLabel l) const { return weights[static_cast<size_t>(label_value(l))]; }
    double value(ClassLabel l) const { return exact(l).value(); }
    bool operator==(const ClassWeights&) const = default;
};

// Duplicates seeded draws (with replacement) of minority items until both
// classes match the majority count. Originals keep their ids and order;
// duplicates follow in draw order under derived ids ("<id>~dupN") so id
// uniqueness survives. Texts and labels are never altered.
Corpus oversample(const Corpus& corpus, uint64_t seed);

// Keeps a seeded subset of the majority class sized to the minority count;
// minority items are all retained. Output preserves input order.
Corpus undersample(const Corpus& corpus, uint64_t seed);

ClassWeights class_weights(const Corpus& corpus);

// Applies Oversample/Undersample; None and ClassWeights leave the corpus
// untouched (weights are consumed by the trainer instead).
Corpus apply_imbalance(const Corpus& corpus, const ImbalancePlan& plan);

}  // namespace gendetect

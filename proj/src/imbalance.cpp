#include "gendetect/imbalance.hpp"

#include <algorithm>
#include <stdexcept>

#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"

namespace gendetect {

std::string_view strategy_name(ImbalanceStrategy s) {
    switch (s) {
        case ImbalanceStrategy::None: return "none";
        case ImbalanceStrategy::Oversample: return "oversample";
        case ImbalanceStrategy::Undersample: return "undersample";
        case ImbalanceStrategy::ClassWeights: return "class_weights";
    }
    throw std::invalid_argument("unknown imbalance strategy");
}

ImbalanceStrategy parse_strategy(std::string_view name) {
    if (name == "none") return ImbalanceStrategy::None;
    if (name == "oversample") return ImbalanceStrategy::Oversample;
    if (name == "undersample") return ImbalanceStrategy::Undersample;
    if (name == "class_weights") return ImbalanceStrategy::ClassWeights;
    throw ConfigError("unknown imbalance strategy: \"" + std::string(name) + "\"");
}

namespace {

void require_both_classes(const Corpus& corpus, const char* op) {
    if (corpus.unlabeled_count() > 0)
        throw std::invalid_argument(std::string(op) + ": corpus has unlabeled items");
    if (corpus.count(ClassLabel::Human) == 0 || corpus.count(ClassLabel::Generated) == 0)
        throw std::invalid_argument(std::string(op) + ": corpus must contain both classes");
}

}  // namespace

Corpus oversample(const Corpus& corpus, uint64_t seed) {
    require_both_classes(corpus, "oversample");
    size_t n_human = corpus.count(ClassLabel::Human);
    size_t n_generated = corpus.count(ClassLabel::Generated);
    if (n_human == n_generated) return corpus;

    ClassLabel minority = n_human < n_generated ? ClassLabel::Human : ClassLabel::Generated;
    size_t deficit = std::max(n_human, n_generated) - std::min(n_human, n_generated);

    std::vector<const Excerpt*> pool;
    for (const auto& e : corpus.items())
        if (*e.label == minority) pool.push_back(&e);

    std::vector<Excerpt> items(corpus.items().begin(), corpus.items().end());
    items.reserve(corpus.size() + deficit);
    RngEngine rng(seed);
    for (size_t draw = 0; draw < deficit; ++draw) {
        const Excerpt& src = *pool[static_cast<size_t>(rand_below(rng, pool.size()))];
        Excerpt dup = src;
        dup.id = src.id + "~dup" + std::to_string(draw + 1);
        items.push_back(std::move(dup));
    }
    return Corpus(std::move(items));
}

Corpus undersample(const Corpus& corpus, uint64_t seed) {
    require_both_classes(corpus, "undersample");
    size_t n_human = corpus.count(ClassLabel::Human);
    size_t n_generated = corpus.count(ClassLabel::Generated);
    if (n_human == n_generated) return corpus;

    ClassLabel majority = n_human > n_generated ? ClassLabel::Human : ClassLabel::Generated;
    size_t keep = std::min(n_human, n_generated);

    std::vector<size_t> majority_positions;
    for (size_t i = 0; i < corpus.size(); ++i)
        if (*corpus.at(i).label == majority) majority_positions.push_back(i);

    RngEngine rng(seed);
    std::vector<size_t> kept = sample_indices(majority_positions.size(), keep, rng);
    std::vector<bool> keep_mask(corpus.size(), true);
    for (size_t pos : majority_positions) keep_mask[pos] = false;
    for (size_t j : kept) keep_mask[majority_positions[j]] = true;

    std::vector<Excerpt> items;
    items.reserve(2 * keep);
    for (size_t i = 0; i < corpus.size(); ++i)
        if (keep_mask[i]) items.push_back(corpus.at(i));
    return Corpus(std::move(items));
}

ClassWeights class_weights(const Corpus& corpus) {
    require_both_classes(corpus, "class_weights");
    long long total = static_cast<long long>(corpus.size());
    ClassWeights w;
    for (int c = 0; c < 2; ++c) {
        long long n_c = static_cast<long long>(corpus.count(label_from_value(c)));
        w.weights[static_cast<size_t>(c)] = Ratio::of(total, 2 * n_c);
    }
    return w;
}

Corpus apply_imbalance(const Corpus& corpus, const ImbalancePlan& plan) {
    switch (plan.strategy) {
        case ImbalanceStrategy::None:
        case ImbalanceStrategy::ClassWeights:
            return corpus;
        case ImbalanceStrategy::Oversample:
            return oversample(corpus, plan.seed);
        case ImbalanceStrategy::Undersample:
            return undersample(corpus, plan.seed);
    }
    throw std::invalid_argument("unknown imbalance strategy");
}

}  // namespace gendetect

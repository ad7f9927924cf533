#pragma once

#include <unordered_map>

#include "gendetect/classify.hpp"

namespace gendetect {

// Lexical baseline: tf-idf features over lowercased uni- and bigrams
// (document-frequency floor 2, smoothed idf, L2-normalized rows) feeding an
// L2-regularized logistic separator trained by full-batch gradient descent.
// Deterministic for a fixed (corpus, config): seeded initialization, fixed
// iteration count, fixed accumulation order.
class TfidfLogregModel final : public Model {
  public:
    TfidfLogregModel(std::vector<std::string> terms, std::vector<double> idf,
                     std::vector<double> weights, double bias, TrainConfig cfg);

    std::string backend_id() const override { return "baseline"; }
    const TrainConfig& config() const override { return cfg_; }
    void save(const std::filesystem::path& dir) const override;
    static std::unique_ptr<TfidfLogregModel> load(const std::filesystem::path& dir);

    std::vector<std::string> tokenize(const std::string& text) const override;
    std::array<double, 2> score_tokens(std::span<const std::string> tokens) const override;

    size_t feature_count() const { return terms_.size(); }
    std::string vocabulary_hash() const;

  private:
    std::vector<std::string> terms_;  // index order
    std::vector<double> idf_;
    std::vector<double> weights_;
    double bias_;
    TrainConfig cfg_;
    std::unordered_map<std::string, size_t> index_;
};

class BaselineBackend final : public ClassifierBackend {
  public:
    std::string id() const override { return "baseline"; }
    std::unique_ptr<Model> fit(const Corpus& corpus, const TrainConfig& cfg) override;
};

}  // namespace gendetect

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gendetect/corpus.hpp"
#include "gendetect/imbalance.hpp"

namespace gendetect {

// Training regimen. The defaults are the fine-tuning recipe transformer
// adapters are expected to apply verbatim (three epochs, lr 2e-5 under AdamW,
// batch 16, sliding window). The built-in lexical baseline consumes
// max_seq_len, sliding_window, window_stride_fraction, seed and class_weights
// and has its own internal solver; learning_rate/epochs/batch_size are
// pass-through fields for adapters.
struct TrainConfig {
    std::string backend_id = "baseline";
    int max_seq_len = 512;  // one of 128, 256, 512
    double learning_rate = 2e-5;
    int epochs = 3;
    int batch_size = 16;
    bool sliding_window = true;
    double window_stride_fraction = 0.8;  // in (0, 1]
    uint64_t seed = 0;
    std::optional<ClassWeights> class_weights;

    // Collects every violation instead of stopping at the first.
    std::vector<std::string> problems() const;
    void validate() const;  // throws ConfigError listing all problems

    bool operator==(const TrainConfig&) const = default;
};

struct Prediction {
    std::string id;
    std::array<double, 2> probs{0.5, 0.5};  // indexed by label value, sums to 1
    ClassLabel label = ClassLabel::Human;
    bool operator==(const Prediction&) const = default;
};

// Argmax with the documented tie rule: an exact tie resolves to Human.
ClassLabel decide_label(const std::array<double, 2>& probs);
Prediction make_prediction(std::string id, double p_generated);

struct Window {
    size_t start = 0;
    size_t length = 0;
    bool operator==(const Window&) const = default;
};

// Overlapping windows over a token sequence: starts at 0, stride, 2*stride...
// with stride = floor(stride_fraction * max_len), until the final token is
// covered. A sequence of length <= max_len yields exactly one window.
std::vector<Window> split_windows(size_t token_count, int max_len, double stride_fraction);

// Element-wise arithmetic mean of per-window probability vectors.
std::array<double, 2> aggregate_window_probs(std::span<const std::array<double, 2>> window_probs);

// A trained, immutable classifier. Token-limited models implement tokenize()
// and score_tokens(); predict_texts() then applies the sliding-window
// protocol from the model's config. Backends that manage their own input
// length (external adapters) override predict_texts() directly.
class Model {
  public:
    virtual ~Model() = default;

    virtual std::string backend_id() const = 0;
    virtual const TrainConfig& config() const = 0;

    // Writes the model under `dir`: a versioned binary blob plus a
    // "model.json" sidecar carrying backend id, config and vocabulary hash.
    virtual void save(const std::filesystem::path& dir) const = 0;

    virtual bool token_limited() const { return true; }
    virtual std::vector<std::string> tokenize(const std::string& text) const;
    virtual std::array<double, 2> score_tokens(std::span<const std::string> tokens) const;

    virtual std::vector<std::array<double, 2>> predict_texts(
        std::span<const std::string> texts, const TrainConfig& cfg) const;
};

class ClassifierBackend {
  public:
    virtual ~ClassifierBackend() = default;
    virtual std::string id() const = 0;
    virtual std::unique_ptr<Model> fit(const Corpus& corpus, const TrainConfig& cfg) = 0;
};

// Order-preserving prediction over excerpts, windowing per cfg.
std::vector<Prediction> predict(const Model& model, std::span<const Excerpt> excerpts,
                                const TrainConfig& cfg);
std::vector<Prediction> predict(const Model& model, std::span<const Excerpt> excerpts);

// backend_id "baseline", or "external:<command>" for the subprocess adapter.
std::unique_ptr<ClassifierBackend> make_backend(const std::string& backend_id);

// Reads the sidecar under `dir` and reconstructs the right model type.
std::unique_ptr<Model> load_model(const std::filesystem::path& dir);

// Probability file: header "id,p_human,p_generated,label", one row per
// excerpt in prediction order. Shared by ensemble inputs and the adapter
// contract; the label column is optional on read (argmax of the
// probabilities otherwise) because an ensemble hard vote can disagree with
// its diagnostic probabilities.
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

}  // namespace gendetect

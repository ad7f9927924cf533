#pragma once

#include "gendetect/classify.hpp"

namespace gendetect {

// Subprocess adapter for backends that cannot run in-process (transformer
// fine-tuning toolkits). File contract, all paths absolute:
//
//   <command> train <manifest.json> <model_dir>
//       manifest: {"schema_version": 1, "train_file": "<csv id,text,label>",
//                  "config": { TrainConfig fields }}
//       The adapter trains with the given regimen and stores its artifacts
//       under model_dir. Exit 0 on success.
//
//   <command> predict <model_dir> <input.csv> <output.csv>
//       input:  header "id,text", one row per excerpt.
//       output: header "id,p_human,p_generated", same ids, same order.
//
// Nonzero adapter exits surface as BackendError. The adapter owns its own
// input-length handling (windowing happens inside the toolkit), so the
// returned model is not token-limited.
class ExternalBackend final : public ClassifierBackend {
  public:
    ExternalBackend(std::string command, std::filesystem::path work_dir);

    std::string id() const override { return "external:" + command_; }
    std::unique_ptr<Model> fit(const Corpus& corpus, const TrainConfig& cfg) override;

  private:
    std::string command_;
    std::filesystem::path work_dir_;
};

class ExternalModel final : public Model {
  public:
    ExternalModel(std::string command, std::filesystem::path model_dir, TrainConfig cfg);

    std::string backend_id() const override { return "external:" + command_; }
    const TrainConfig& config() const override { return cfg_; }
    void save(const std::filesystem::path& dir) const override;
    static std::unique_ptr<ExternalModel> load(const std::filesystem::path& dir);

    bool token_limited() const override { return false; }
    std::vector<std::array<double, 2>> predict_texts(std::span<const std::string> texts,
                                                     const TrainConfig& cfg) const override;

  private:
    std::string command_;
    std::filesystem::path model_dir_;
    TrainConfig cfg_;
};

}  // namespace gendetect

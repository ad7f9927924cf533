#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gendetect/augment.hpp"
#include "gendetect/classify.hpp"
#include "gendetect/corpus.hpp"
#include "gendetect/imbalance.hpp"

namespace gendetect {

// One augmentation pass in the pipeline config. Client names: "identity" /
// "cassette" for translators, "echo" / "cassette" for generators. Relative
// cassette paths resolve against $GENDETECT_CASSETTE_DIR when it is set.
struct AugmentStage {
    AugmentMethod method = AugmentMethod::BackTranslation;
    SourcePool source_pool = SourcePool::OriginalCorpus;
    size_t count = 0;
    std::string pivot_lang = "fr";
    int prompt_token_count = 20;
    std::optional<uint64_t> seed;
    std::string translator;
    std::string generator;
    std::string cassette;
    std::string pool_path;  // abstracts file for the external pool; empty = training corpus
    bool operator==(const AugmentStage&) const = default;
};

// Full description of a run. A run is reproducible from (config, data files)
// alone: every stage seed is either given explicitly or derived from the
// global seed via the documented splitting rule (see rng.hpp).
struct PipelineConfig {
    uint64_t seed = 0;

    std::string train_path;
    std::string test_path;
    ColumnSchema schema;

    ImbalanceStrategy imbalance = ImbalanceStrategy::None;
    std::optional<uint64_t> imbalance_seed;

    std::vector<AugmentStage> augmentations;

    std::string backend_id = "baseline";
    int max_seq_len = 512;
    double learning_rate = 2e-5;
    int epochs = 3;
    int batch_size = 16;
    bool sliding_window = true;
    double window_stride_fraction = 0.8;
    std::optional<uint64_t> train_seed;

    int cv_folds = 3;
    std::string ensemble_spec;
    std::string output_dir = "out";

    // Every problem at once, empty when the config is usable.
    std::vector<std::string> problems() const;

    bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig parse_pipeline_config(const std::string& json_text);
std::string serialize_pipeline_config(const PipelineConfig& config);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config);

// Stage resolution: explicit seeds win, otherwise stage_seed(global, name)
// with names "imbalance", "train", "folds", "augment:<index>".
ImbalancePlan make_imbalance_plan(const PipelineConfig& config);
TrainConfig make_train_config(const PipelineConfig& config);
AugmentationSpec make_augment_spec(const PipelineConfig& config, size_t index);
uint64_t folds_seed(const PipelineConfig& config);

}  // namespace gendetect

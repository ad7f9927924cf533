#include "gendetect/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"
#include "json_util.hpp"

namespace gendetect {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw ConfigError(where + ": unknown key \"" + key + "\"");
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + ": bad value for \"" + key + "\"");
    }
}

void read_optional_seed(const nlohmann::json& j, const char* key, std::optional<uint64_t>& out,
                        const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<uint64_t>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + ": bad value for \"" + key + "\"");
    }
}

AugmentStage parse_stage(const nlohmann::json& j, size_t index) {
    std::string where = "augmentations[" + std::to_string(index) + "]";
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown_keys(j,
                        {"method", "source_pool", "count", "pivot_lang", "prompt_token_count",
                         "seed", "translator", "generator", "cassette", "pool_path"},
                        where);
    AugmentStage stage;
    std::string method = std::string(augment_method_name(stage.method));
    std::string pool = std::string(source_pool_name(stage.source_pool));
    read_field(j, "method", method, where);
    read_field(j, "source_pool", pool, where);
    stage.method = parse_augment_method(method);
    stage.source_pool = parse_source_pool(pool);
    read_field(j, "count", stage.count, where);
    read_field(j, "pivot_lang", stage.pivot_lang, where);
    read_field(j, "prompt_token_count", stage.prompt_token_count, where);
    read_optional_seed(j, "seed", stage.seed, where);
    read_field(j, "translator", stage.translator, where);
    read_field(j, "generator", stage.generator, where);
    read_field(j, "cassette", stage.cassette, where);
    read_field(j, "pool_path", stage.pool_path, where);
    return stage;
}

nlohmann::json stage_to_json(const AugmentStage& stage) {
    nlohmann::json j;
    j["method"] = std::string(augment_method_name(stage.method));
    j["source_pool"] = std::string(source_pool_name(stage.source_pool));
    j["count"] = stage.count;
    j["pivot_lang"] = stage.pivot_lang;
    j["prompt_token_count"] = stage.prompt_token_count;
    j["seed"] = stage.seed ? nlohmann::json(*stage.seed) : nlohmann::json();
    j["translator"] = stage.translator;
    j["generator"] = stage.generator;
    j["cassette"] = stage.cassette;
    j["pool_path"] = stage.pool_path;
    return j;
}

}  // namespace

std::vector<std::string> PipelineConfig::problems() const {
    std::vector<std::string> out;
    if (cv_folds < 2) out.push_back("cv_folds must be at least 2");
    if (output_dir.empty()) out.push_back("output_dir must not be empty");
    if (schema.id_column.empty()) out.push_back("id column name must not be empty");
    if (schema.text_column.empty()) out.push_back("text column name must not be empty");

    TrainConfig train = make_train_config(*this);
    for (auto& p : train.problems()) out.push_back(std::move(p));

    for (size_t i = 0; i < augmentations.size(); ++i) {
        const AugmentStage& stage = augmentations[i];
        std::string where = "augmentations[" + std::to_string(i) + "]: ";
        if (stage.prompt_token_count < 1)
            out.push_back(where + "prompt_token_count must be at least 1");
        if (stage.method == AugmentMethod::BackTranslation) {
            if (stage.pivot_lang.empty()) out.push_back(where + "pivot_lang must not be empty");
            if (stage.translator != "identity" && stage.translator != "cassette")
                out.push_back(where + "translator must be \"identity\" or \"cassette\"");
            if (stage.translator == "cassette" && stage.cassette.empty())
                out.push_back(where + "cassette translator needs a cassette path");
        } else {
            if (stage.generator != "echo" && stage.generator != "cassette")
                out.push_back(where + "generator must be \"echo\" or \"cassette\"");
            if (stage.generator == "cassette" && stage.cassette.empty())
                out.push_back(where + "cassette generator needs a cassette path");
        }
        if (stage.source_pool == SourcePool::ExternalAbstracts && stage.pool_path.empty())
            out.push_back(where + "external_abstracts pool needs a pool_path");
    }
    return out;
}

PipelineConfig parse_pipeline_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown_keys(
        j,
        {"schema_version", "seed", "train_path", "test_path", "columns", "delimiter",
         "imbalance", "imbalance_seed", "augmentations", "backend_id", "max_seq_len",
         "learning_rate", "epochs", "batch_size", "sliding_window", "window_stride_fraction",
         "train_seed", "cv_folds", "ensemble_spec", "output_dir"},
        "config");
    if (j.contains("schema_version") && j.at("schema_version") != 1)
        throw ConfigError("config: unsupported schema_version " + j.at("schema_version").dump());

    PipelineConfig config;
    read_field(j, "seed", config.seed, "config");
    read_field(j, "train_path", config.train_path, "config");
    read_field(j, "test_path", config.test_path, "config");
    if (j.contains("columns")) {
        const auto& c = j.at("columns");
        if (!c.is_object()) throw ConfigError("config: \"columns\" must be an object");
        reject_unknown_keys(c, {"id", "text", "label", "method", "source_id"}, "columns");
        read_field(c, "id", config.schema.id_column, "columns");
        read_field(c, "text", config.schema.text_column, "columns");
        read_field(c, "label", config.schema.label_column, "columns");
        read_field(c, "method", config.schema.method_column, "columns");
        read_field(c, "source_id", config.schema.source_column, "columns");
    }
    if (j.contains("delimiter")) {
        std::string d = j.at("delimiter").is_string() ? j.at("delimiter").get<std::string>() : "";
        if (d.size() != 1) throw ConfigError("config: delimiter must be a single character");
        config.schema.delimiter = d[0];
    }
    if (j.contains("imbalance")) {
        std::string name;
        read_field(j, "imbalance", name, "config");
        config.imbalance = parse_strategy(name);
    }
    read_optional_seed(j, "imbalance_seed", config.imbalance_seed, "config");
    if (j.contains("augmentations")) {
        const auto& stages = j.at("augmentations");
        if (!stages.is_array()) throw ConfigError("config: \"augmentations\" must be an array");
        for (size_t i = 0; i < stages.size(); ++i)
            config.augmentations.push_back(parse_stage(stages[i], i));
    }
    read_field(j, "backend_id", config.backend_id, "config");
    read_field(j, "max_seq_len", config.max_seq_len, "config");
    read_field(j, "learning_rate", config.learning_rate, "config");
    read_field(j, "epochs", config.epochs, "config");
    read_field(j, "batch_size", config.batch_size, "config");
    read_field(j, "sliding_window", config.sliding_window, "config");
    read_field(j, "window_stride_fraction", config.window_stride_fraction, "config");
    read_optional_seed(j, "train_seed", config.train_seed, "config");
    read_field(j, "cv_folds", config.cv_folds, "config");
    read_field(j, "ensemble_spec", config.ensemble_spec, "config");
    read_field(j, "output_dir", config.output_dir, "config");
    return config;
}

std::string serialize_pipeline_config(const PipelineConfig& config) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["seed"] = config.seed;
    j["train_path"] = config.train_path;
    j["test_path"] = config.test_path;
    j["columns"] = {{"id", config.schema.id_column},
                    {"text", config.schema.text_column},
                    {"label", config.schema.label_column},
                    {"method", config.schema.method_column},
                    {"source_id", config.schema.source_column}};
    j["delimiter"] = std::string(1, config.schema.delimiter);
    j["imbalance"] = std::string(strategy_name(config.imbalance));
    j["imbalance_seed"] =
        config.imbalance_seed ? nlohmann::json(*config.imbalance_seed) : nlohmann::json();
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& stage : config.augmentations) stages.push_back(stage_to_json(stage));
    j["augmentations"] = stages;
    j["backend_id"] = config.backend_id;
    j["max_seq_len"] = config.max_seq_len;
    j["learning_rate"] = config.learning_rate;
    j["epochs"] = config.epochs;
    j["batch_size"] = config.batch_size;
    j["sliding_window"] = config.sliding_window;
    j["window_stride_fraction"] = config.window_stride_fraction;
    j["train_seed"] = config.train_seed ? nlohmann::json(*config.train_seed) : nlohmann::json();
    j["cv_folds"] = config.cv_folds;
    j["ensemble_spec"] = config.ensemble_spec;
    j["output_dir"] = config.output_dir;
    return j.dump(2) + "\n";
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_pipeline_config(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write config file: " + path.string());
    out << serialize_pipeline_config(config);
}

ImbalancePlan make_imbalance_plan(const PipelineConfig& config) {
    ImbalancePlan plan;
    plan.strategy = config.imbalance;
    plan.seed = config.imbalance_seed ? *config.imbalance_seed
                                      : stage_seed(config.seed, "imbalance");
    return plan;
}

TrainConfig make_train_config(const PipelineConfig& config) {
    TrainConfig cfg;
    cfg.backend_id = config.backend_id;
    cfg.max_seq_len = config.max_seq_len;
    cfg.learning_rate = config.learning_rate;
    cfg.epochs = config.epochs;
    cfg.batch_size = config.batch_size;
    cfg.sliding_window = config.sliding_window;
    cfg.window_stride_fraction = config.window_stride_fraction;
    cfg.seed = config.train_seed ? *config.train_seed : stage_seed(config.seed, "train");
    return cfg;
}

AugmentationSpec make_augment_spec(const PipelineConfig& config, size_t index) {
    const AugmentStage& stage = config.augmentations.at(index);
    AugmentationSpec spec;
    spec.method = stage.method;
    spec.source_pool = stage.source_pool;
    spec.count = stage.count;
    spec.pivot_lang = stage.pivot_lang;
    spec.prompt_token_count = stage.prompt_token_count;
    spec.seed = stage.seed ? *stage.seed
                           : stage_seed(config.seed, "augment:" + std::to_string(index));
    return spec;
}

uint64_t folds_seed(const PipelineConfig& config) { return stage_seed(config.seed, "folds"); }

}  // namespace gendetect

#include "gendetect/external_backend.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "gendetect/csv.hpp"
#include "gendetect/errors.hpp"
#include "json_util.hpp"

namespace gendetect {

namespace {

std::filesystem::path scratch_dir(const char* tag) {
    static std::atomic<uint64_t> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("gendetect-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1) + 1));
    std::filesystem::create_directories(dir);
    return dir;
}

int run_command(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    if (status == -1) throw BackendError("failed to launch adapter: " + cmd);
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    throw BackendError("adapter terminated abnormally: " + cmd);
}

std::string quoted(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

ExternalBackend::ExternalBackend(std::string command, std::filesystem::path work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {
    if (command_.empty()) throw ConfigError("external backend needs a command");
}

std::unique_ptr<Model> ExternalBackend::fit(const Corpus& corpus, const TrainConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw std::invalid_argument("external fit: empty corpus");
    if (!corpus.fully_labeled())
        throw std::invalid_argument("external fit: corpus has unlabeled items");
    std::filesystem::create_directories(work_dir_);

    auto train_path = std::filesystem::absolute(work_dir_ / "train.csv");
    {
        CsvTable table;
        table.header = {"id", "text", "label"};
        for (const auto& e : corpus.items())
            table.rows.push_back({e.id, e.text, std::to_string(label_value(*e.label))});
        write_delimited(train_path, table, ',');
    }

    auto manifest_path = std::filesystem::absolute(work_dir_ / "manifest.json");
    nlohmann::json manifest;
    manifest["schema_version"] = 1;
    manifest["train_file"] = train_path.string();
    manifest["config"] = train_config_to_json(cfg);
    write_json_file(manifest_path, manifest);

    auto model_dir = std::filesystem::absolute(work_dir_ / "model");
    std::filesystem::create_directories(model_dir);

    std::string cmd = command_ + " train " + quoted(manifest_path) + " " + quoted(model_dir);
    int code = run_command(cmd);
    if (code != 0)
        throw BackendError("adapter train exited with status " + std::to_string(code) + ": " +
                           cmd);
    return std::make_unique<ExternalModel>(command_, model_dir, cfg);
}

ExternalModel::ExternalModel(std::string command, std::filesystem::path model_dir,
                             TrainConfig cfg)
    : command_(std::move(command)), model_dir_(std::move(model_dir)), cfg_(std::move(cfg)) {
    if (command_.empty()) throw ConfigError("external model needs a command");
}

std::vector<std::array<double, 2>> ExternalModel::predict_texts(
    std::span<const std::string> texts, const TrainConfig&) const {
    auto dir = scratch_dir("predict");
    auto input_path = std::filesystem::absolute(dir / "input.csv");
    auto output_path = std::filesystem::absolute(dir / "output.csv");
    {
        CsvTable table;
        table.header = {"id", "text"};
        for (size_t i = 0; i < texts.size(); ++i)
            table.rows.push_back({"r" + std::to_string(i), texts[i]});
        write_delimited(input_path, table, ',');
    }
    std::string cmd = command_ + " predict " + quoted(std::filesystem::absolute(model_dir_)) +
                      " " + quoted(input_path) + " " + quoted(output_path);
    int code = run_command(cmd);
    if (code != 0)
        throw BackendError("adapter predict exited with status " + std::to_string(code) + ": " +
                           cmd);

    std::vector<Prediction> preds = read_predictions(output_path);
    if (preds.size() != texts.size())
        throw BackendError("adapter returned " + std::to_string(preds.size()) +
                           " predictions for " + std::to_string(texts.size()) + " inputs");
    std::vector<std::array<double, 2>> out;
    out.reserve(preds.size());
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].id != "r" + std::to_string(i))
            throw BackendError("adapter output ids out of order at row " + std::to_string(i + 1));
        out.push_back(preds[i].probs);
    }
    std::filesystem::remove_all(dir);
    return out;
}

void ExternalModel::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    if (!std::filesystem::equivalent(dir, model_dir_)) {
        for (const auto& entry : std::filesystem::directory_iterator(model_dir_)) {
            if (entry.path().filename() == "model.json") continue;
            std::filesystem::copy(entry.path(), dir / entry.path().filename(),
                                  std::filesystem::copy_options::recursive |
                                      std::filesystem::copy_options::overwrite_existing);
        }
    }
    nlohmann::json sidecar;
    sidecar["schema_version"] = 1;
    sidecar["backend_id"] = backend_id();
    sidecar["config"] = train_config_to_json(cfg_);
    write_json_file(dir / "model.json", sidecar);
}

std::unique_ptr<ExternalModel> ExternalModel::load(const std::filesystem::path& dir) {
    nlohmann::json sidecar = read_json_file(dir / "model.json");
    std::string backend_id;
    TrainConfig cfg;
    try {
        backend_id = sidecar.at("backend_id").get<std::string>();
        cfg = train_config_from_json(sidecar.at("config"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid model sidecar " + (dir / "model.json").string() + ": " +
                        e.what());
    }
    constexpr std::string_view prefix = "external:";
    if (!backend_id.starts_with(prefix))
        throw DataError("model sidecar names backend \"" + backend_id +
                        "\", expected external:<command>");
    std::string command = backend_id.substr(prefix.size());
    return std::make_unique<ExternalModel>(std::move(command), dir, std::move(cfg));
}

}  // namespace gendetect

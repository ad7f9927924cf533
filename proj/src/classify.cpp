#include "gendetect/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <unistd.h>

#include <json.hpp>

#include "gendetect/baseline.hpp"
#include "gendetect/csv.hpp"
#include "gendetect/errors.hpp"
#include "gendetect/external_backend.hpp"
#include "json_util.hpp"
#include "gendetect/text.hpp"

namespace gendetect {

std::vector<std::string> TrainConfig::problems() const {
    std::vector<std::string> out;
    if (backend_id.empty()) out.push_back("backend_id must not be empty");
    if (max_seq_len != 128 && max_seq_len != 256 && max_seq_len != 512)
        out.push_back("max_seq_len must be one of 128, 256, 512");
    if (!(learning_rate > 0)) out.push_back("learning_rate must be positive");
    if (epochs < 1) out.push_back("epochs must be at least 1");
    if (batch_size < 1) out.push_back("batch_size must be at least 1");
    if (!(window_stride_fraction > 0) || window_stride_fraction > 1)
        out.push_back("window_stride_fraction must be in (0, 1]");
    return out;
}

void TrainConfig::validate() const {
    auto found = problems();
    if (found.empty()) return;
    std::string msg = "invalid training config: ";
    for (size_t i = 0; i < found.size(); ++i) {
        if (i > 0) msg += "; ";
        msg += found[i];
    }
    throw ConfigError(msg);
}

ClassLabel decide_label(const std::array<double, 2>& probs) {
    return probs[1] > probs[0] ? ClassLabel::Generated : ClassLabel::Human;
}

Prediction make_prediction(std::string id, double p_generated) {
    if (!(p_generated >= 0.0 && p_generated <= 1.0))
        throw std::invalid_argument("make_prediction: probability out of [0, 1]");
    Prediction p;
    p.id = std::move(id);
    p.probs = {1.0 - p_generated, p_generated};
    p.label = decide_label(p.probs);
    return p;
}

std::vector<Window> split_windows(size_t token_count, int max_len, double stride_fraction) {
    if (max_len <= 0) throw std::invalid_argument("split_windows: max_len must be positive");
    if (!(stride_fraction > 0) || stride_fraction > 1)
        throw std::invalid_argument("split_windows: stride_fraction must be in (0, 1]");
    if (token_count == 0) throw std::invalid_argument("split_windows: empty token sequence");
    size_t cap = static_cast<size_t>(max_len);
    if (token_count <= cap) return {Window{0, token_count}};
    size_t stride = static_cast<size_t>(stride_fraction * max_len);
    if (stride == 0)
        throw std::invalid_argument("split_windows: stride rounds down to zero");
    std::vector<Window> out;
    size_t start = 0;
    while (true) {
        size_t length = std::min(cap, token_count - start);
        out.push_back(Window{start, length});
        if (start + length >= token_count) break;
        start += stride;
    }
    return out;
}

std::array<double, 2> aggregate_window_probs(
    std::span<const std::array<double, 2>> window_probs) {
    if (window_probs.empty())
        throw std::invalid_argument("aggregate_window_probs: no windows");
    std::array<double, 2> sum{0.0, 0.0};
    for (const auto& p : window_probs) {
        sum[0] += p[0];
        sum[1] += p[1];
    }
    double n = static_cast<double>(window_probs.size());
    return {sum[0] / n, sum[1] / n};
}

std::vector<std::string> Model::tokenize(const std::string& text) const {
    return word_tokens(text);
}

std::array<double, 2> Model::score_tokens(std::span<const std::string>) const {
    throw std::logic_error("score_tokens is not implemented for this backend");
}

std::vector<std::array<double, 2>> Model::predict_texts(std::span<const std::string> texts,
                                                        const TrainConfig& cfg) const {
    cfg.validate();
    std::vector<std::array<double, 2>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<std::string> tokens = tokenize(text);
        if (tokens.empty()) throw std::invalid_argument("predict: text has no tokens");
        if (!cfg.sliding_window) {
            size_t limit = std::min(tokens.size(), static_cast<size_t>(cfg.max_seq_len));
            out.push_back(score_tokens(std::span<const std::string>(tokens.data(), limit)));
            continue;
        }
        auto windows = split_windows(tokens.size(), cfg.max_seq_len, cfg.window_stride_fraction);
        std::vector<std::array<double, 2>> probs;
        probs.reserve(windows.size());
        for (const Window& w : windows)
            probs.push_back(
                score_tokens(std::span<const std::string>(tokens.data() + w.start, w.length)));
        out.push_back(aggregate_window_probs(probs));
    }
    return out;
}

std::vector<Prediction> predict(const Model& model, std::span<const Excerpt> excerpts,
                                const TrainConfig& cfg) {
    std::vector<std::string> texts;
    texts.reserve(excerpts.size());
    for (const auto& e : excerpts) texts.push_back(e.text);
    auto probs = model.predict_texts(texts, cfg);
    std::vector<Prediction> preds;
    preds.reserve(excerpts.size());
    for (size_t i = 0; i < excerpts.size(); ++i)
        preds.push_back(Prediction{excerpts[i].id, probs[i], decide_label(probs[i])});
    return preds;
}

std::vector<Prediction> predict(const Model& model, std::span<const Excerpt> excerpts) {
    return predict(model, excerpts, model.config());
}

namespace {

std::filesystem::path fresh_work_dir() {
    static std::atomic<uint64_t> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("gendetect-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1) + 1));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

std::unique_ptr<ClassifierBackend> make_backend(const std::string& backend_id) {
    if (backend_id == "baseline") return std::make_unique<BaselineBackend>();
    constexpr std::string_view prefix = "external:";
    if (backend_id.starts_with(prefix)) {
        std::string command = backend_id.substr(prefix.size());
        if (trim_copy(command).empty())
            throw ConfigError("external backend needs a command after \"external:\"");
        return std::make_unique<ExternalBackend>(std::move(command), fresh_work_dir());
    }
    throw ConfigError("unknown backend: \"" + backend_id + "\"");
}

std::unique_ptr<Model> load_model(const std::filesystem::path& dir) {
    nlohmann::json sidecar = read_json_file(dir / "model.json");
    std::string backend_id;
    try {
        backend_id = sidecar.at("backend_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid model sidecar " + (dir / "model.json").string() + ": " +
                        e.what());
    }
    if (backend_id == "baseline") return TfidfLogregModel::load(dir);
    if (backend_id.starts_with("external:")) return ExternalModel::load(dir);
    throw DataError("model sidecar names unknown backend \"" + backend_id + "\"");
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds) {
    CsvTable table;
    table.header = {"id", "p_human", "p_generated", "label"};
    for (const auto& p : preds)
        table.rows.push_back({p.id, format_double(p.probs[0]), format_double(p.probs[1]),
                              std::to_string(label_value(p.label))});
    write_delimited(path, table, ',');
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
    CsvTable table = read_delimited(path, ',');
    int id_col = table.column("id");
    int ph_col = table.column("p_human");
    int pg_col = table.column("p_generated");
    int label_col = table.column("label");  // optional: argmax can lose an ensemble hard vote
    if (id_col < 0 || ph_col < 0 || pg_col < 0)
        throw DataError(path.string() + ": expected columns id, p_human, p_generated");
    std::vector<Prediction> preds;
    preds.reserve(table.rows.size());
    std::unordered_set<std::string> seen;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto where = [&] {
            std::ostringstream msg;
            msg << path.string() << ": row " << (r + 1) << ": ";
            return msg.str();
        };
        Prediction p;
        p.id = row[static_cast<size_t>(id_col)];
        if (p.id.empty()) throw DataError(where() + "empty id");
        if (!seen.insert(p.id).second) throw DataError(where() + "duplicate id \"" + p.id + "\"");
        p.probs[0] = parse_double(row[static_cast<size_t>(ph_col)], where() + "p_human");
        p.probs[1] = parse_double(row[static_cast<size_t>(pg_col)], where() + "p_generated");
        for (double v : p.probs)
            if (!(v >= 0.0 && v <= 1.0))
                throw DataError(where() + "probability out of [0, 1]");
        if (std::abs(p.probs[0] + p.probs[1] - 1.0) > 1e-6)
            throw DataError(where() + "probabilities do not sum to 1");
        if (label_col >= 0) {
            auto label = parse_label(row[static_cast<size_t>(label_col)]);
            if (!label) throw DataError(where() + "missing label");
            p.label = *label;
        } else {
            p.label = decide_label(p.probs);
        }
        preds.push_back(std::move(p));
    }
    return preds;
}

}  // namespace gendetect

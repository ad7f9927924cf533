#include "gendetect/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"
#include "gendetect/text.hpp"
#include "json_util.hpp"

namespace gendetect {

namespace {

// Internal solver constants. Fixed here, not configurable: the public
// learning_rate/epochs/batch_size fields belong to the adapter regimen and
// this solver does not pretend to honor them.
constexpr size_t kDfFloor = 2;
constexpr int kIterations = 600;
constexpr double kLearningRate = 2.0;
constexpr double kL2Penalty = 1e-4;
constexpr double kInitScale = 1e-3;

double u01(RngEngine& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<std::string> lowercase_tokens(const std::string& text) {
    std::vector<std::string> tokens = word_tokens(text);
    for (auto& t : tokens) t = ascii_lower(t);
    return tokens;
}

// Unigrams plus space-joined bigrams; tokens carry no whitespace so the two
// families cannot collide.
template <typename Fn>
void for_each_term(std::span<const std::string> tokens, Fn&& fn) {
    for (const auto& t : tokens) fn(t);
    for (size_t i = 0; i + 1 < tokens.size(); ++i) fn(tokens[i] + ' ' + tokens[i + 1]);
}

// Sparse tf-idf row over the fixed vocabulary, L2-normalized, index-sorted.
std::vector<std::pair<size_t, double>> featurize(
    std::span<const std::string> tokens, const std::unordered_map<std::string, size_t>& index,
    const std::vector<double>& idf) {
    std::map<size_t, double> tf;
    for_each_term(tokens, [&](const std::string& term) {
        auto it = index.find(term);
        if (it != index.end()) tf[it->second] += 1.0;
    });
    std::vector<std::pair<size_t, double>> row;
    row.reserve(tf.size());
    double norm_sq = 0;
    for (const auto& [j, count] : tf) {
        double v = count * idf[j];
        row.emplace_back(j, v);
        norm_sq += v * v;
    }
    if (norm_sq > 0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [j, v] : row) v *= inv;
    }
    return row;
}

}  // namespace

TfidfLogregModel::TfidfLogregModel(std::vector<std::string> terms, std::vector<double> idf,
                                   std::vector<double> weights, double bias, TrainConfig cfg)
    : terms_(std::move(terms)),
      idf_(std::move(idf)),
      weights_(std::move(weights)),
      bias_(bias),
      cfg_(std::move(cfg)) {
    if (idf_.size() != terms_.size() || weights_.size() != terms_.size())
        throw std::invalid_argument("baseline model: vector sizes disagree");
    index_.reserve(terms_.size());
    for (size_t j = 0; j < terms_.size(); ++j) index_[terms_[j]] = j;
    if (index_.size() != terms_.size())
        throw std::invalid_argument("baseline model: duplicate vocabulary term");
}

std::vector<std::string> TfidfLogregModel::tokenize(const std::string& text) const {
    return lowercase_tokens(text);
}

std::array<double, 2> TfidfLogregModel::score_tokens(std::span<const std::string> tokens) const {
    double z = bias_;
    for (const auto& [j, v] : featurize(tokens, index_, idf_)) z += weights_[j] * v;
    double p = sigmoid(z);
    return {1.0 - p, p};
}

std::string TfidfLogregModel::vocabulary_hash() const {
    std::string buf;
    for (const auto& t : terms_) {
        buf += t;
        buf += '\n';
    }
    return hex64(fnv1a64(buf));
}

namespace {

constexpr char kMagic[4] = {'G', 'D', 'T', 'B'};
constexpr uint32_t kBlobVersion = 1;

template <typename T>
void write_raw(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const std::filesystem::path& path) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("truncated model file: " + path.string());
    return v;
}

}  // namespace

void TfidfLogregModel::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    auto blob_path = dir / "model.bin";
    {
        std::ofstream out(blob_path, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + blob_path.string());
        out.write(kMagic, sizeof(kMagic));
        write_raw(out, kBlobVersion);
        write_raw(out, static_cast<uint64_t>(terms_.size()));
        for (const auto& t : terms_) {
            write_raw(out, static_cast<uint32_t>(t.size()));
            out.write(t.data(), static_cast<std::streamsize>(t.size()));
        }
        for (double v : idf_) write_raw(out, v);
        for (double v : weights_) write_raw(out, v);
        write_raw(out, bias_);
        if (!out) throw DataError("write failed: " + blob_path.string());
    }
    nlohmann::json sidecar;
    sidecar["schema_version"] = 1;
    sidecar["backend_id"] = backend_id();
    sidecar["config"] = train_config_to_json(cfg_);
    sidecar["vocabulary_hash"] = vocabulary_hash();
    write_json_file(dir / "model.json", sidecar);
}

std::unique_ptr<TfidfLogregModel> TfidfLogregModel::load(const std::filesystem::path& dir) {
    nlohmann::json sidecar = read_json_file(dir / "model.json");
    std::string backend_id;
    std::string recorded_hash;
    TrainConfig cfg;
    try {
        backend_id = sidecar.at("backend_id").get<std::string>();
        recorded_hash = sidecar.at("vocabulary_hash").get<std::string>();
        cfg = train_config_from_json(sidecar.at("config"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid model sidecar " + (dir / "model.json").string() + ": " +
                        e.what());
    }
    if (backend_id != "baseline")
        throw DataError("model sidecar names backend \"" + backend_id + "\", expected baseline");

    auto blob_path = dir / "model.bin";
    std::ifstream in(blob_path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + blob_path.string());
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(magic, magic + 4, kMagic))
        throw DataError("not a baseline model blob: " + blob_path.string());
    auto version = read_raw<uint32_t>(in, blob_path);
    if (version != kBlobVersion)
        throw DataError("unsupported model blob version " + std::to_string(version) + ": " +
                        blob_path.string());
    auto n = read_raw<uint64_t>(in, blob_path);
    std::vector<std::string> terms;
    terms.reserve(n);
    for (uint64_t j = 0; j < n; ++j) {
        auto len = read_raw<uint32_t>(in, blob_path);
        std::string t(len, '\0');
        in.read(t.data(), static_cast<std::streamsize>(len));
        if (!in) throw DataError("truncated model file: " + blob_path.string());
        terms.push_back(std::move(t));
    }
    std::vector<double> idf(n);
    std::vector<double> weights(n);
    for (auto& v : idf) v = read_raw<double>(in, blob_path);
    for (auto& v : weights) v = read_raw<double>(in, blob_path);
    double bias = read_raw<double>(in, blob_path);

    auto model = std::make_unique<TfidfLogregModel>(std::move(terms), std::move(idf),
                                                    std::move(weights), bias, std::move(cfg));
    if (model->vocabulary_hash() != recorded_hash)
        throw DataError("vocabulary hash mismatch in " + dir.string());
    return model;
}

std::unique_ptr<Model> BaselineBackend::fit(const Corpus& corpus, const TrainConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw std::invalid_argument("baseline fit: empty corpus");
    if (!corpus.fully_labeled())
        throw std::invalid_argument("baseline fit: corpus has unlabeled items");
    if (corpus.count(ClassLabel::Human) == 0 || corpus.count(ClassLabel::Generated) == 0)
        throw std::invalid_argument("baseline fit: corpus must contain both classes");

    // Training rows follow the same length protocol as prediction: windows
    // when sliding is on, truncation otherwise. Every row inherits the label
    // of its excerpt.
    std::vector<std::vector<std::string>> rows;
    std::vector<int> labels;
    for (const auto& e : corpus.items()) {
        std::vector<std::string> tokens = lowercase_tokens(e.text);
        int y = label_value(*e.label);
        if (cfg.sliding_window) {
            for (const Window& w :
                 split_windows(tokens.size(), cfg.max_seq_len, cfg.window_stride_fraction)) {
                rows.emplace_back(tokens.begin() + static_cast<ptrdiff_t>(w.start),
                                  tokens.begin() + static_cast<ptrdiff_t>(w.start + w.length));
                labels.push_back(y);
            }
        } else {
            size_t limit = std::min(tokens.size(), static_cast<size_t>(cfg.max_seq_len));
            rows.emplace_back(tokens.begin(), tokens.begin() + static_cast<ptrdiff_t>(limit));
            labels.push_back(y);
        }
    }

    std::map<std::string, size_t> df;
    {
        std::set<std::string> in_row;
        for (const auto& row : rows) {
            in_row.clear();
            for_each_term(row, [&](const std::string& term) { in_row.insert(term); });
            for (const auto& term : in_row) ++df[term];
        }
    }
    std::vector<std::string> terms;
    std::vector<double> idf;
    double n_rows = static_cast<double>(rows.size());
    for (const auto& [term, count] : df) {
        if (count < kDfFloor) continue;
        terms.push_back(term);  // std::map iterates sorted, so index order is sorted
        idf.push_back(std::log((1.0 + n_rows) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    std::unordered_map<std::string, size_t> index;
    index.reserve(terms.size());
    for (size_t j = 0; j < terms.size(); ++j) index[terms[j]] = j;

    std::vector<std::vector<std::pair<size_t, double>>> features;
    features.reserve(rows.size());
    for (const auto& row : rows) features.push_back(featurize(row, index, idf));

    std::array<double, 2> row_weight{1.0, 1.0};
    if (cfg.class_weights)
        for (int c = 0; c < 2; ++c)
            row_weight[static_cast<size_t>(c)] = cfg.class_weights->value(label_from_value(c));
    double weight_sum = 0;
    for (int y : labels) weight_sum += row_weight[static_cast<size_t>(y)];

    RngEngine rng(cfg.seed);
    std::vector<double> w(terms.size());
    for (auto& wj : w) wj = (u01(rng) * 2.0 - 1.0) * kInitScale;
    double bias = 0;

    std::vector<double> grad(w.size());
    for (int iter = 0; iter < kIterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0;
        for (size_t i = 0; i < features.size(); ++i) {
            double z = bias;
            for (const auto& [j, v] : features[i]) z += w[j] * v;
            double g =
                row_weight[static_cast<size_t>(labels[i])] * (sigmoid(z) - labels[i]);
            for (const auto& [j, v] : features[i]) grad[j] += g * v;
            grad_b += g;
        }
        for (size_t j = 0; j < w.size(); ++j)
            w[j] -= kLearningRate * (grad[j] / weight_sum + kL2Penalty * w[j]);
        bias -= kLearningRate * (grad_b / weight_sum);
    }

    return std::make_unique<TfidfLogregModel>(std::move(terms), std::move(idf), std::move(w),
                                              bias, cfg);
}

}  // namespace gendetect

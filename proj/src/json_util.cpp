#include "json_util.hpp"

#include <fstream>

#include "gendetect/errors.hpp"

namespace gendetect {

std::string format_double(double v) { return nlohmann::json(v).dump(); }

double parse_double(const std::string& raw, const std::string& where) {
    size_t consumed = 0;
    double v = 0;
    try {
        v = std::stod(raw, &consumed);
    } catch (const std::exception&) {
        throw DataError(where + ": not a number: \"" + raw + "\"");
    }
    if (consumed != raw.size())
        throw DataError(where + ": trailing characters in number: \"" + raw + "\"");
    return v;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

nlohmann::json class_weights_to_json(const ClassWeights& w) {
    nlohmann::json j;
    for (int c = 0; c < 2; ++c) {
        const Ratio& r = w.exact(label_from_value(c));
        j[std::string(label_name(label_from_value(c)))] = {r.num, r.den};
    }
    return j;
}

ClassWeights class_weights_from_json(const nlohmann::json& j) {
    ClassWeights w;
    for (int c = 0; c < 2; ++c) {
        const auto& pair = j.at(std::string(label_name(label_from_value(c))));
        if (!pair.is_array() || pair.size() != 2)
            throw DataError("class weight must be a [numerator, denominator] pair");
        w.weights[static_cast<size_t>(c)] =
            Ratio::of(pair[0].get<long long>(), pair[1].get<long long>());
    }
    return w;
}

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
    nlohmann::json j;
    j["backend_id"] = cfg.backend_id;
    j["max_seq_len"] = cfg.max_seq_len;
    j["learning_rate"] = cfg.learning_rate;
    j["epochs"] = cfg.epochs;
    j["batch_size"] = cfg.batch_size;
    j["sliding_window"] = cfg.sliding_window;
    j["window_stride_fraction"] = cfg.window_stride_fraction;
    j["seed"] = cfg.seed;
    j["class_weights"] =
        cfg.class_weights ? class_weights_to_json(*cfg.class_weights) : nlohmann::json();
    return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    try {
        cfg.backend_id = j.at("backend_id").get<std::string>();
        cfg.max_seq_len = j.at("max_seq_len").get<int>();
        cfg.learning_rate = j.at("learning_rate").get<double>();
        cfg.epochs = j.at("epochs").get<int>();
        cfg.batch_size = j.at("batch_size").get<int>();
        cfg.sliding_window = j.at("sliding_window").get<bool>();
        cfg.window_stride_fraction = j.at("window_stride_fraction").get<double>();
        cfg.seed = j.at("seed").get<uint64_t>();
        if (j.contains("class_weights") && !j.at("class_weights").is_null())
            cfg.class_weights = class_weights_from_json(j.at("class_weights"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid training config: ") + e.what());
    }
    return cfg;
}

std::string hex64(uint64_t value) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

}  // namespace gendetect

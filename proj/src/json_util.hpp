#pragma once

// Library-private JSON plumbing shared by the persistence and config code.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gendetect/classify.hpp"
#include "gendetect/imbalance.hpp"

namespace gendetect {

// Shortest round-trip decimal form, "0.6" not "0.59999999999999998".
std::string format_double(double v);

// Strict full-string parse; `where` prefixes the DataError message.
double parse_double(const std::string& raw, const std::string& where);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json class_weights_to_json(const ClassWeights& w);
ClassWeights class_weights_from_json(const nlohmann::json& j);

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

std::string hex64(uint64_t value);  // 16 lowercase hex digits

}  // namespace gendetect

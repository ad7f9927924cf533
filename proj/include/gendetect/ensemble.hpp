#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gendetect/classify.hpp"

namespace gendetect {

enum class TieBreak { MeanProb, FixedHuman };

std::string_view tie_break_name(TieBreak t);
TieBreak parse_tie_break(std::string_view name);

// One model type with several same-type members fine-tuned under different
// seeds; members name prediction sets (map keys, or file paths in the JSON
// spec form).
struct SeedGroup {
    std::string model_type;
    std::vector<std::string> members;
    bool operator==(const SeedGroup&) const = default;
};

struct EnsembleSpec {
    std::vector<SeedGroup> groups;
    TieBreak tie_break = TieBreak::MeanProb;
    bool operator==(const EnsembleSpec&) const = default;
};

// Element-wise arithmetic mean of member probability vectors.
std::array<double, 2> soft_vote(std::span<const std::array<double, 2>> member_probs);

// Strict majority. On a tie, MeanProb compares the mean generated-probability
// of all contributing members against 0.5 (exactly 0.5 resolves to Human);
// FixedHuman returns Human.
ClassLabel hard_vote(std::span<const ClassLabel> labels, TieBreak tie_break,
                     std::span<const std::array<double, 2>> member_probs = {});

// Two-level reduction, per excerpt: soft vote inside each group, threshold
// the group mean at 0.5 for the group label, then hard vote across group
// labels. The reported probabilities are the mean of group means and are
// diagnostic only; the hard vote decides the label.
std::vector<Prediction> two_level_ensemble(
    const EnsembleSpec& spec, const std::map<std::string, std::vector<Prediction>>& by_member);

// JSON document: {"schema_version":1, "tie_break":"mean_prob",
//   "groups":[{"model_type":"...","members":["path.csv",...]},...]}
// Relative member paths resolve against the spec file's directory.
EnsembleSpec read_ensemble_spec(const std::filesystem::path& path);
void write_ensemble_spec(const std::filesystem::path& path, const EnsembleSpec& spec);

// Loads every member's prediction file and runs the two-level reduction.
std::vector<Prediction> run_ensemble_spec(const EnsembleSpec& spec);

}  // namespace gendetect

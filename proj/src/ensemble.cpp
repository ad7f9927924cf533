#include "gendetect/ensemble.hpp"

#include <json.hpp>

#include "gendetect/errors.hpp"
#include "json_util.hpp"

namespace gendetect {

std::string_view tie_break_name(TieBreak t) {
    return t == TieBreak::MeanProb ? "mean_prob" : "fixed_human";
}

TieBreak parse_tie_break(std::string_view name) {
    if (name == "mean_prob") return TieBreak::MeanProb;
    if (name == "fixed_human") return TieBreak::FixedHuman;
    throw ConfigError("unknown tie break rule: \"" + std::string(name) + "\"");
}

std::array<double, 2> soft_vote(std::span<const std::array<double, 2>> member_probs) {
    if (member_probs.empty()) throw std::invalid_argument("soft_vote: no members");
    std::array<double, 2> sum{0.0, 0.0};
    for (const auto& p : member_probs) {
        sum[0] += p[0];
        sum[1] += p[1];
    }
    double n = static_cast<double>(member_probs.size());
    return {sum[0] / n, sum[1] / n};
}

ClassLabel hard_vote(std::span<const ClassLabel> labels, TieBreak tie_break,
                     std::span<const std::array<double, 2>> member_probs) {
    if (labels.empty()) throw std::invalid_argument("hard_vote: no votes");
    size_t generated = 0;
    for (ClassLabel l : labels)
        if (l == ClassLabel::Generated) ++generated;
    size_t human = labels.size() - generated;
    if (generated > human) return ClassLabel::Generated;
    if (human > generated) return ClassLabel::Human;
    if (tie_break == TieBreak::FixedHuman) return ClassLabel::Human;
    if (member_probs.empty())
        throw std::invalid_argument("hard_vote: mean_prob tie break needs member probabilities");
    double mean_generated = soft_vote(member_probs)[1];
    return mean_generated > 0.5 ? ClassLabel::Generated : ClassLabel::Human;
}

std::vector<Prediction> two_level_ensemble(
    const EnsembleSpec& spec, const std::map<std::string, std::vector<Prediction>>& by_member) {
    if (spec.groups.empty()) throw std::invalid_argument("ensemble spec has no groups");
    for (const auto& group : spec.groups)
        if (group.members.empty())
            throw std::invalid_argument("ensemble group \"" + group.model_type +
                                        "\" has no members");

    // All member prediction sets must describe the same excerpts in the same
    // order; the files come from independent runs, so check before reducing.
    const std::vector<Prediction>* reference = nullptr;
    std::string reference_name;
    for (const auto& group : spec.groups) {
        for (const auto& member : group.members) {
            auto it = by_member.find(member);
            if (it == by_member.end())
                throw DataError("ensemble member \"" + member + "\" has no predictions");
            if (!reference) {
                reference = &it->second;
                reference_name = member;
                continue;
            }
            if (it->second.size() != reference->size())
                throw DataError("ensemble member \"" + member + "\" has " +
                                std::to_string(it->second.size()) + " predictions, \"" +
                                reference_name + "\" has " +
                                std::to_string(reference->size()));
            for (size_t i = 0; i < reference->size(); ++i)
                if (it->second[i].id != (*reference)[i].id)
                    throw DataError("ensemble member \"" + member + "\" id \"" +
                                    it->second[i].id + "\" at row " + std::to_string(i + 1) +
                                    " does not match \"" + (*reference)[i].id + "\"");
        }
    }

    size_t n = reference->size();
    std::vector<Prediction> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        std::vector<ClassLabel> group_labels;
        std::vector<std::array<double, 2>> group_means;
        std::vector<std::array<double, 2>> all_member_probs;
        group_labels.reserve(spec.groups.size());
        group_means.reserve(spec.groups.size());
        for (const auto& group : spec.groups) {
            std::vector<std::array<double, 2>> member_probs;
            member_probs.reserve(group.members.size());
            for (const auto& member : group.members) {
                const auto& probs = by_member.at(member)[i].probs;
                member_probs.push_back(probs);
                all_member_probs.push_back(probs);
            }
            std::array<double, 2> mean = soft_vote(member_probs);
            group_means.push_back(mean);
            group_labels.push_back(decide_label(mean));
        }
        Prediction p;
        p.id = (*reference)[i].id;
        p.probs = soft_vote(group_means);
        p.label = hard_vote(group_labels, spec.tie_break, all_member_probs);
        out.push_back(std::move(p));
    }
    return out;
}

EnsembleSpec read_ensemble_spec(const std::filesystem::path& path) {
    nlohmann::json j = read_json_file(path);
    EnsembleSpec spec;
    try {
        spec.tie_break = parse_tie_break(j.at("tie_break").get<std::string>());
        for (const auto& g : j.at("groups")) {
            SeedGroup group;
            group.model_type = g.at("model_type").get<std::string>();
            for (const auto& m : g.at("members")) {
                std::filesystem::path member = m.get<std::string>();
                if (member.is_relative()) member = path.parent_path() / member;
                group.members.push_back(member.string());
            }
            spec.groups.push_back(std::move(group));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid ensemble spec " + path.string() + ": " + e.what());
    }
    return spec;
}

void write_ensemble_spec(const std::filesystem::path& path, const EnsembleSpec& spec) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["tie_break"] = std::string(tie_break_name(spec.tie_break));
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : spec.groups) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto& m : g.members) members.push_back(m);
        groups.push_back({{"model_type", g.model_type}, {"members", members}});
    }
    j["groups"] = groups;
    write_json_file(path, j);
}

std::vector<Prediction> run_ensemble_spec(const EnsembleSpec& spec) {
    std::map<std::string, std::vector<Prediction>> by_member;
    for (const auto& group : spec.groups)
        for (const auto& member : group.members)
            if (!by_member.count(member)) by_member[member] = read_predictions(member);
    return two_level_ensemble(spec, by_member);
}

}  // namespace gendetect

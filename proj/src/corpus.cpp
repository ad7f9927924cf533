#include "gendetect/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"
#include "gendetect/text.hpp"

namespace gendetect {

ClassLabel label_from_value(int v) {
    if (v == 0) return ClassLabel::Human;
    if (v == 1) return ClassLabel::Generated;
    throw std::invalid_argument("label value must be 0 or 1");
}

std::string_view label_name(ClassLabel l) {
    return l == ClassLabel::Human ? "human" : "generated";
}

std::optional<ClassLabel> parse_label(std::string_view raw) {
    std::string s = ascii_lower(trim_copy(raw));
    if (s.empty()) return std::nullopt;
    if (s == "0" || s == "human" || s == "human-written" || s == "human_written")
        return ClassLabel::Human;
    if (s == "1" || s == "generated" || s == "machine-generated" || s == "machine_generated")
        return ClassLabel::Generated;
    throw DataError("unrecognized label value: \"" + std::string(raw) + "\"");
}

Corpus::Corpus(std::vector<Excerpt> items) : items_(std::move(items)) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(items_.size());
    for (const auto& e : items_) {
        if (e.id.empty()) throw DataError("excerpt with empty id");
        if (trim_copy(e.text).empty()) throw DataError("excerpt \"" + e.id + "\" has empty text");
        if (!seen.insert(e.id).second) throw DataError("duplicate excerpt id: \"" + e.id + "\"");
        if (e.label)
            ++counts_[static_cast<size_t>(label_value(*e.label))];
        else
            ++unlabeled_;
    }
}

Corpus corpus_from_table(const CsvTable& table, const ColumnSchema& schema,
                         std::string_view source_name) {
    auto require = [&](const std::string& name) {
        int idx = table.column(name);
        if (idx < 0)
            throw DataError(std::string(source_name) + ": missing column \"" + name + "\"");
        return idx;
    };
    int id_col = require(schema.id_column);
    int text_col = require(schema.text_column);
    int label_col = schema.label_column.empty() ? -1 : require(schema.label_column);
    int method_col = schema.method_column.empty() ? -1 : table.column(schema.method_column);
    int source_col = schema.source_column.empty() ? -1 : table.column(schema.source_column);

    std::vector<Excerpt> items;
    items.reserve(table.rows.size());
    std::unordered_set<std::string> seen;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto where = [&] {
            std::ostringstream msg;
            msg << source_name << ": row " << (r + 1) << ": ";
            return msg.str();
        };
        Excerpt e;
        e.id = row[static_cast<size_t>(id_col)];
        if (e.id.empty()) throw DataError(where() + "empty id");
        if (!seen.insert(e.id).second)
            throw DataError(where() + "duplicate id \"" + e.id + "\"");
        e.text = row[static_cast<size_t>(text_col)];
        if (trim_copy(e.text).empty()) throw DataError(where() + "empty text");
        if (label_col >= 0) {
            try {
                e.label = parse_label(row[static_cast<size_t>(label_col)]);
            } catch (const DataError& err) {
                throw DataError(where() + err.what());
            }
        }
        if (method_col >= 0 && source_col >= 0) {
            const std::string& method = row[static_cast<size_t>(method_col)];
            const std::string& src = row[static_cast<size_t>(source_col)];
            if (!method.empty() || !src.empty()) e.provenance = Provenance{method, src};
        }
        items.push_back(std::move(e));
    }
    return Corpus(std::move(items));
}

Corpus load_corpus(const std::filesystem::path& path, const ColumnSchema& schema) {
    CsvTable table = read_delimited(path, schema.delimiter);
    return corpus_from_table(table, schema, path.string());
}

CsvTable corpus_to_table(const Corpus& corpus, const ColumnSchema& schema) {
    bool any_provenance = std::any_of(corpus.items().begin(), corpus.items().end(),
                                      [](const Excerpt& e) { return e.provenance.has_value(); });
    CsvTable table;
    table.header = {schema.id_column, schema.text_column};
    if (!schema.label_column.empty()) table.header.push_back(schema.label_column);
    if (any_provenance) {
        table.header.push_back(schema.method_column);
        table.header.push_back(schema.source_column);
    }
    for (const auto& e : corpus.items()) {
        std::vector<std::string> row{e.id, e.text};
        if (!schema.label_column.empty())
            row.push_back(e.label ? std::to_string(label_value(*e.label)) : "");
        if (any_provenance) {
            row.push_back(e.provenance ? e.provenance->method : "");
            row.push_back(e.provenance ? e.provenance->source_id : "");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus,
                  const ColumnSchema& schema) {
    write_delimited(path, corpus_to_table(corpus, schema), schema.delimiter);
}

CorpusStats corpus_stats(const Corpus& corpus) {
    if (corpus.empty()) throw std::invalid_argument("corpus_stats: empty corpus");
    CorpusStats stats;
    size_t total_words = 0;
    size_t total_sents = 0;
    bool first = true;
    for (const auto& e : corpus.items()) {
        size_t words = word_count(e.text);
        size_t sents = sentence_count(e.text);
        total_words += words;
        total_sents += sents;
        if (first) {
            stats.min_words = stats.max_words = words;
            stats.min_sents = stats.max_sents = sents;
            first = false;
        } else {
            stats.min_words = std::min(stats.min_words, words);
            stats.max_words = std::max(stats.max_words, words);
            stats.min_sents = std::min(stats.min_sents, sents);
            stats.max_sents = std::max(stats.max_sents, sents);
        }
    }
    stats.avg_words = static_cast<double>(total_words) / static_cast<double>(corpus.size());
    stats.avg_sents = static_cast<double>(total_sents) / static_cast<double>(corpus.size());
    return stats;
}

std::string stats_text(const Corpus& corpus, const CorpusStats& stats) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "items " << corpus.size() << '\n';
    out << "human " << corpus.count(ClassLabel::Human) << '\n';
    out << "generated " << corpus.count(ClassLabel::Generated) << '\n';
    out << "unlabeled " << corpus.unlabeled_count() << '\n';
    out << "avg_words " << stats.avg_words << '\n';
    out << "min_words " << stats.min_words << '\n';
    out << "max_words " << stats.max_words << '\n';
    out << "avg_sents " << stats.avg_sents << '\n';
    out << "min_sents " << stats.min_sents << '\n';
    out << "max_sents " << stats.max_sents << '\n';
    return out.str();
}

std::string stats_json(const Corpus& corpus, const CorpusStats& stats) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["items"] = corpus.size();
    j["counts"] = {{"human", corpus.count(ClassLabel::Human)},
                   {"generated", corpus.count(ClassLabel::Generated)},
                   {"unlabeled", corpus.unlabeled_count()}};
    j["words"] = {{"avg", stats.avg_words}, {"min", stats.min_words}, {"max", stats.max_words}};
    j["sentences"] = {{"avg", stats.avg_sents}, {"min", stats.min_sents}, {"max", stats.max_sents}};
    return j.dump(2) + "\n";
}

FoldPlan stratified_kfold(const Corpus& corpus, int k, uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be at least 2");
    std::array<std::vector<const std::string*>, 2> per_class;
    for (const auto& e : corpus.items()) {
        if (!e.label)
            throw std::invalid_argument("stratified_kfold: unlabeled item \"" + e.id + "\"");
        per_class[static_cast<size_t>(label_value(*e.label))].push_back(&e.id);
    }
    for (size_t c = 0; c < per_class.size(); ++c) {
        if (per_class[c].size() < static_cast<size_t>(k)) {
            std::ostringstream msg;
            msg << "stratified_kfold: class " << label_name(label_from_value(static_cast<int>(c)))
                << " has " << per_class[c].size() << " items, fewer than k=" << k;
            throw std::invalid_argument(msg.str());
        }
    }
    RngEngine rng(seed);
    FoldPlan plan;
    plan.k = k;
    for (auto& ids : per_class) {
        shuffle_in_place(ids, rng);
        for (size_t i = 0; i < ids.size(); ++i)
            plan.assignments[*ids[i]] = static_cast<int>(i % static_cast<size_t>(k));
    }
    return plan;
}

namespace {

int fold_of(const FoldPlan& plan, const std::string& id) {
    auto it = plan.assignments.find(id);
    if (it == plan.assignments.end())
        throw std::invalid_argument("fold plan does not cover excerpt \"" + id + "\"");
    return it->second;
}

}  // namespace

Corpus fold_items(const Corpus& corpus, const FoldPlan& plan, int fold) {
    std::vector<Excerpt> items;
    for (const auto& e : corpus.items())
        if (fold_of(plan, e.id) == fold) items.push_back(e);
    return Corpus(std::move(items));
}

Corpus fold_complement(const Corpus& corpus, const FoldPlan& plan, int fold) {
    std::vector<Excerpt> items;
    for (const auto& e : corpus.items())
        if (fold_of(plan, e.id) != fold) items.push_back(e);
    return Corpus(std::move(items));
}

void write_fold_plan(const std::filesystem::path& path, const FoldPlan& plan, uint64_t seed) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["k"] = plan.k;
    j["seed"] = seed;
    nlohmann::json assignments = nlohmann::json::object();
    for (const auto& [id, fold] : plan.assignments) assignments[id] = fold;
    j["assignments"] = assignments;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

FoldPlan read_fold_plan(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        FoldPlan plan;
        plan.k = j.at("k").get<int>();
        for (const auto& [id, fold] : j.at("assignments").items())
            plan.assignments[id] = fold.get<int>();
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid fold plan " + path.string() + ": " + e.what());
    }
}

// --- synthetic fixture -------------------------------------------------------

namespace {

const std::vector<std::string> kFrames = {
    "The {0} of {1} has been studied extensively in {2}",
    "We present a {0} that improves {1} on {2}",
    "Experimental evaluation shows that the proposed {0} outperforms earlier approaches to {1}",
    "A detailed analysis of {2} reveals the role of the {0} in {1}",
    "Prior studies of {1} rely on {2} to characterize the {0}",
    "The results indicate that the {0} can be estimated from {2} with high accuracy",
    "This paper examines how the {0} interacts with {1} across {2}",
    "These findings suggest that {1} depends strongly on the chosen {0}",
};

const std::vector<std::string> kHumanThings = {
    "convolutional neural network", "support vector machine",  "feature extraction pipeline",
    "attention mechanism",          "regularization scheme",   "optimization procedure",
    "sampling strategy",            "evaluation protocol",     "signal processing chain",
    "measurement apparatus",
};

const std::vector<std::string> kHumanTopics = {
    "image classification", "speech recognition",       "protein folding",
    "sentiment analysis",   "anomaly detection",        "machine translation",
    "gene expression",      "object tracking",          "climate modeling",
    "information retrieval",
};

const std::vector<std::string> kHumanContexts = {
    "benchmark datasets",    "clinical cohorts",      "large-scale corpora",
    "controlled experiments", "simulation studies",   "field measurements",
    "ablation studies",      "longitudinal surveys",
};

// Garbled paraphrases of the same concepts, the telltale vocabulary of
// machine-rewritten excerpts.
const std::vector<std::string> kGenThings = {
    "convolutional brain organization", "bolster vector apparatus", "highlight extraction channel",
    "consideration instrument",         "regularization plot",      "streamlining methodology",
    "inspecting technique",             "appraisal convention",     "flag preparing chain",
    "estimation contraption",
};

const std::vector<std::string> kGenTopics = {
    "picture characterization", "discourse acknowledgment",  "protein collapsing",
    "feeling examination",      "peculiarity identification", "machine interpretation",
    "quality articulation",     "question following",         "environment demonstrating",
    "data recovery",
};

const std::vector<std::string> kGenContexts = {
    "benchmark informational collections", "clinical accomplices", "huge scope corpora",
    "controlled preliminaries",            "recreation ponders",   "field estimations",
    "removal thinks about",                "longitudinal reviews",
};

std::string fill_frame(const std::string& frame, const std::string& a, const std::string& b,
                       const std::string& c) {
    std::string out;
    for (size_t i = 0; i < frame.size(); ++i) {
        if (frame[i] == '{' && i + 2 < frame.size() && frame[i + 2] == '}') {
            switch (frame[i + 1]) {
                case '0': out += a; break;
                case '1': out += b; break;
                case '2': out += c; break;
                default: out += frame.substr(i, 3); break;
            }
            i += 2;
        } else {
            out += frame[i];
        }
    }
    return out;
}

const std::string& pick(const std::vector<std::string>& pool, RngEngine& rng) {
    return pool[static_cast<size_t>(rand_below(rng, pool.size()))];
}

std::string make_sentence(RngEngine& rng, bool generated) {
    const auto& things = generated ? kGenThings : kHumanThings;
    const auto& topics = generated ? kGenTopics : kHumanTopics;
    const auto& contexts = generated ? kGenContexts : kHumanContexts;
    return fill_frame(pick(kFrames, rng), pick(things, rng), pick(topics, rng),
                      pick(contexts, rng));
}

std::string make_human_text(RngEngine& rng) {
    size_t n_sentences = 3 + static_cast<size_t>(rand_below(rng, 4));  // 3..6
    std::string text;
    for (size_t s = 0; s < n_sentences; ++s) {
        if (s > 0) text += ' ';
        text += make_sentence(rng, false);
        text += '.';
    }
    return text;
}

// Opening sentence appears twice back to back, the first copy without its
// final period, then a few more sentences.
std::string make_generated_text(RngEngine& rng) {
    std::string lead = make_sentence(rng, true);
    std::string text = lead + ' ' + lead + '.';
    size_t extra = 2 + static_cast<size_t>(rand_below(rng, 3));  // 2..4
    for (size_t s = 0; s < extra; ++s) {
        text += ' ';
        text += make_sentence(rng, true);
        text += '.';
    }
    return text;
}

}  // namespace

Corpus make_synthetic_corpus(size_t n_human, size_t n_generated, uint64_t seed) {
    RngEngine rng(seed);
    std::vector<Excerpt> items;
    items.reserve(n_human + n_generated);
    for (size_t i = 0; i < n_human; ++i) {
        Excerpt e;
        e.id = "h" + std::to_string(i + 1);
        e.text = make_human_text(rng);
        e.label = ClassLabel::Human;
        items.push_back(std::move(e));
    }
    for (size_t i = 0; i < n_generated; ++i) {
        Excerpt e;
        e.id = "g" + std::to_string(i + 1);
        e.text = make_generated_text(rng);
        e.label = ClassLabel::Generated;
        items.push_back(std::move(e));
    }
    shuffle_in_place(items, rng);
    return Corpus(std::move(items));
}

}  // namespace gendetect

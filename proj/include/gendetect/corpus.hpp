#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gendetect/csv.hpp"

namespace gendetect {

// Binary labels. Serialized as 0 = human, 1 = generated; the detection
// target is the positive class.
enum class ClassLabel : int { Human = 0, Generated = 1 };

constexpr int label_value(ClassLabel l) { return static_cast<int>(l); }
ClassLabel label_from_value(int v);
std::string_view label_name(ClassLabel l);  // "human" / "generated"

// Accepted spellings (case-insensitive, trimmed): 0, human, human-written,
// human_written for Human; 1, generated, machine-generated,
// machine_generated for Generated. An empty cell means unlabeled.
std::optional<ClassLabel> parse_label(std::string_view raw);

// Where an excerpt came from when it was manufactured by the augmenter.
struct Provenance {
    std::string method;     // e.g. "bt:fr" or "lm"
    std::string source_id;  // id of the excerpt it was derived from
    bool operator==(const Provenance&) const = default;
};

struct Excerpt {
    std::string id;
    std::string text;
    std::optional<ClassLabel> label;
    std::optional<Provenance> provenance;
    bool operator==(const Excerpt&) const = default;
};

// Ordered, immutable collection of excerpts. Construction validates that
// every text is non-empty after trimming and that ids are unique.
class Corpus {
  public:
    Corpus() = default;
    explicit Corpus(std::vector<Excerpt> items);

    const std::vector<Excerpt>& items() const { return items_; }
    const Excerpt& at(size_t i) const { return items_.at(i); }
    size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    size_t count(ClassLabel l) const { return counts_[static_cast<size_t>(label_value(l))]; }
    size_t unlabeled_count() const { return unlabeled_; }
    bool fully_labeled() const { return unlabeled_ == 0; }

    bool operator==(const Corpus&) const = default;

  private:
    std::vector<Excerpt> items_;
    std::array<size_t, 2> counts_{0, 0};
    size_t unlabeled_ = 0;
};

// Column layout of a delimited corpus file. An empty label_column means the
// file carries no labels (e.g. a test set). The method/source columns are
// read when present and written only for corpora that carry provenance.
struct ColumnSchema {
    std::string id_column = "id";
    std::string text_column = "text";
    std::string label_column = "label";
    std::string method_column = "method";
    std::string source_column = "source_id";
    char delimiter = ',';
    bool operator==(const ColumnSchema&) const = default;
};

Corpus load_corpus(const std::filesystem::path& path, const ColumnSchema& schema);
Corpus corpus_from_table(const CsvTable& table, const ColumnSchema& schema,
                         std::string_view source_name);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus,
                  const ColumnSchema& schema);
CsvTable corpus_to_table(const Corpus& corpus, const ColumnSchema& schema);

struct CorpusStats {
    double avg_words = 0;
    size_t min_words = 0;
    size_t max_words = 0;
    double avg_sents = 0;
    size_t min_sents = 0;
    size_t max_sents = 0;
};

// Exact arithmetic means over the word/sentence counts of every item.
CorpusStats corpus_stats(const Corpus& corpus);

// Flat key->value lines ("avg_words 157.4000") including label counts.
std::string stats_text(const Corpus& corpus, const CorpusStats& stats);
std::string stats_json(const Corpus& corpus, const CorpusStats& stats);

// Stratified cross-validation plan: fold index per excerpt id.
struct FoldPlan {
    int k = 0;
    std::map<std::string, int> assignments;
    bool operator==(const FoldPlan&) const = default;
};

// Per-class seeded shuffle followed by round-robin assignment, so every
// fold's class counts are within one item of exact proportionality.
FoldPlan stratified_kfold(const Corpus& corpus, int k, uint64_t seed);

// Items assigned to `fold` (evaluation split) or to every other fold
// (training split), in corpus order.
Corpus fold_items(const Corpus& corpus, const FoldPlan& plan, int fold);
Corpus fold_complement(const Corpus& corpus, const FoldPlan& plan, int fold);

void write_fold_plan(const std::filesystem::path& path, const FoldPlan& plan, uint64_t seed);
FoldPlan read_fold_plan(const std::filesystem::path& path);

// Deterministic fixture generator. Human items are fluent multi-sentence
// abstracts; generated items open with a duplicated leading sentence and use
// garbled terminology, the two telltales of machine-generated excerpts this
// pipeline is built to catch. The two classes are lexically separable on
// purpose so the corpus can anchor end-to-end tests.
Corpus make_synthetic_corpus(size_t n_human, size_t n_generated, uint64_t seed);

}  // namespace gendetect

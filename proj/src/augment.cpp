#include "gendetect/augment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <optional>
#include <thread>

#include <json.hpp>

#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"
#include "gendetect/text.hpp"
#include "json_util.hpp"

namespace gendetect {

namespace {

// Retries fn on ClientError; anything else propagates untouched.
template <typename Fn>
std::string with_retry(Fn&& fn, int max_attempts) {
    if (max_attempts < 1) throw std::invalid_argument("max_attempts must be at least 1");
    std::string last_error;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        try {
            return fn();
        } catch (const ClientError& e) {
            last_error = e.what();
        }
    }
    throw ClientError("client failed after " + std::to_string(max_attempts) +
                          " attempts: " + last_error,
                      max_attempts);
}

}  // namespace

std::string back_translate(const std::string& text, const std::string& pivot_lang,
                           TranslatorClient& client, int max_attempts,
                           const std::string& source_lang) {
    if (pivot_lang.empty() || pivot_lang == source_lang)
        throw std::invalid_argument("back_translate: pivot language must differ from source");
    auto leg = [&](const std::string& input, const std::string& from, const std::string& to) {
        return with_retry(
            [&] {
                std::string out = client.translate(input, from, to);
                if (trim_copy(out).empty())
                    throw ClientError("translator returned empty text");
                return out;
            },
            max_attempts);
    };
    std::string pivoted = leg(text, source_lang, pivot_lang);
    return leg(pivoted, pivot_lang, source_lang);
}

std::string lm_generate(const Excerpt& source, GeneratorClient& client, int prompt_token_count,
                        uint64_t seed) {
    if (prompt_token_count < 1)
        throw std::invalid_argument("lm_generate: prompt_token_count must be at least 1");
    std::vector<std::string> tokens = word_tokens(source.text);
    if (tokens.empty()) throw std::invalid_argument("lm_generate: source has no tokens");
    size_t cap = tokens.size();
    size_t prompt_len = std::min(static_cast<size_t>(prompt_token_count), tokens.size());
    std::string prompt = join_tokens(std::span<const std::string>(tokens.data(), prompt_len));

    std::string out = client.generate(prompt, static_cast<int>(cap), seed);
    std::vector<std::string> out_tokens = word_tokens(out);
    if (out_tokens.empty()) throw ClientError("generator returned empty text");
    // The cap is a hard contract of this op, so over-long client output is
    // cut rather than trusted.
    if (out_tokens.size() > cap)
        return join_tokens(std::span<const std::string>(out_tokens.data(), cap));
    return out;
}

std::string_view augment_method_name(AugmentMethod m) {
    return m == AugmentMethod::BackTranslation ? "back_translation" : "lm_generation";
}

AugmentMethod parse_augment_method(std::string_view name) {
    if (name == "back_translation") return AugmentMethod::BackTranslation;
    if (name == "lm_generation") return AugmentMethod::LmGeneration;
    throw ConfigError("unknown augmentation method: \"" + std::string(name) + "\"");
}

std::string_view source_pool_name(SourcePool p) {
    return p == SourcePool::OriginalCorpus ? "original_corpus" : "external_abstracts";
}

SourcePool parse_source_pool(std::string_view name) {
    if (name == "original_corpus") return SourcePool::OriginalCorpus;
    if (name == "external_abstracts") return SourcePool::ExternalAbstracts;
    throw ConfigError("unknown source pool: \"" + std::string(name) + "\"");
}

namespace {

// Serializes client calls and spaces them to the configured rate. The lock
// is held across the call itself: clients are not assumed thread-safe.
class Throttle {
  public:
    explicit Throttle(double requests_per_second) : rps_(requests_per_second) {}

    template <typename Fn>
    auto run(Fn&& fn) {
        std::unique_lock lock(mutex_);
        if (rps_ > 0) {
            auto now = std::chrono::steady_clock::now();
            if (now < next_) {
                std::this_thread::sleep_until(next_);
                now = next_;
            }
            next_ = now + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(1.0 / rps_));
        }
        return fn();
    }

  private:
    std::mutex mutex_;
    std::chrono::steady_clock::time_point next_{};
    double rps_;
};

class ThrottledTranslator final : public TranslatorClient {
  public:
    ThrottledTranslator(TranslatorClient& inner, Throttle& throttle)
        : inner_(inner), throttle_(throttle) {}
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override {
        return throttle_.run([&] { return inner_.translate(text, source_lang, target_lang); });
    }

  private:
    TranslatorClient& inner_;
    Throttle& throttle_;
};

class ThrottledGenerator final : public GeneratorClient {
  public:
    ThrottledGenerator(GeneratorClient& inner, Throttle& throttle)
        : inner_(inner), throttle_(throttle) {}
    std::string generate(const std::string& prompt, int max_new_tokens, uint64_t seed) override {
        return throttle_.run([&] { return inner_.generate(prompt, max_new_tokens, seed); });
    }

  private:
    GeneratorClient& inner_;
    Throttle& throttle_;
};

}  // namespace

Corpus build_augmented_set(const Corpus& pool, const AugmentationSpec& spec,
                           TranslatorClient* translator, GeneratorClient* generator,
                           const ClientLimits& limits) {
    if (spec.count > pool.size())
        throw std::invalid_argument("augment count " + std::to_string(spec.count) +
                                    " exceeds pool size " + std::to_string(pool.size()));
    if (spec.method == AugmentMethod::BackTranslation && translator == nullptr)
        throw std::invalid_argument("back translation needs a translator client");
    if (spec.method == AugmentMethod::LmGeneration && generator == nullptr)
        throw std::invalid_argument("lm generation needs a generator client");
    if (limits.max_in_flight < 1)
        throw std::invalid_argument("max_in_flight must be at least 1");

    RngEngine rng(spec.seed);
    std::vector<size_t> order = sample_indices(pool.size(), spec.count, rng);

    Throttle throttle(limits.requests_per_second);
    std::optional<ThrottledTranslator> throttled_translator;
    std::optional<ThrottledGenerator> throttled_generator;
    if (translator) throttled_translator.emplace(*translator, throttle);
    if (generator) throttled_generator.emplace(*generator, throttle);

    auto produce = [&](size_t k) {
        const Excerpt& src = pool.at(order[k]);
        Excerpt out;
        out.label = ClassLabel::Generated;
        if (spec.method == AugmentMethod::BackTranslation) {
            out.text = back_translate(src.text, spec.pivot_lang, *throttled_translator);
            out.id = "bt" + std::to_string(k + 1);
            out.provenance = Provenance{"bt:" + spec.pivot_lang, src.id};
        } else {
            uint64_t item_seed = stage_seed(spec.seed, "item:" + std::to_string(k));
            out.text = lm_generate(src, *throttled_generator, spec.prompt_token_count, item_seed);
            out.id = "lm" + std::to_string(k + 1);
            out.provenance = Provenance{"lm", src.id};
        }
        return out;
    };

    std::vector<Excerpt> generated(spec.count);
    if (limits.max_in_flight == 1 || spec.count < 2) {
        for (size_t k = 0; k < spec.count; ++k) generated[k] = produce(k);
    } else {
        size_t n_workers = std::min<size_t>(static_cast<size_t>(limits.max_in_flight),
                                            spec.count);
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> failures(spec.count);
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (size_t k = next.fetch_add(1); k < spec.count; k = next.fetch_add(1)) {
                    try {
                        generated[k] = produce(k);
                    } catch (...) {
                        failures[k] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        for (const auto& failure : failures)
            if (failure) std::rethrow_exception(failure);
    }

    std::vector<Excerpt> items = std::move(generated);
    if (spec.source_pool == SourcePool::ExternalAbstracts) {
        for (size_t k = 0; k < spec.count; ++k) {
            const Excerpt& src = pool.at(order[k]);
            Excerpt human;
            human.id = src.id;
            human.text = src.text;
            human.label = ClassLabel::Human;
            items.push_back(std::move(human));
        }
    }
    return Corpus(std::move(items));
}

Corpus compose_training_set(const Corpus& base, const Corpus& augmented,
                            const ImbalancePlan& plan) {
    std::vector<Excerpt> items;
    items.reserve(base.size() + augmented.size());
    items.insert(items.end(), base.items().begin(), base.items().end());
    items.insert(items.end(), augmented.items().begin(), augmented.items().end());
    Corpus combined(std::move(items));  // rejects id overlap
    return apply_imbalance(combined, plan);
}

// --- record / replay ---------------------------------------------------------

Cassette::Cassette(Cassette&& other) noexcept {
    std::lock_guard lock(other.mutex_);
    records_ = std::move(other.records_);
    consumed_ = std::move(other.consumed_);
}

Cassette Cassette::load(const std::filesystem::path& path) {
    nlohmann::json j = read_json_file(path);
    Cassette c;
    try {
        for (const auto& r : j.at("records")) {
            CassetteRecord record;
            record.request_hash = r.at("request_hash").get<std::string>();
            record.response = r.at("response").get<std::string>();
            c.records_.push_back(std::move(record));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid cassette " + path.string() + ": " + e.what());
    }
    c.consumed_.assign(c.records_.size(), false);
    return c;
}

void Cassette::save(const std::filesystem::path& path) const {
    std::lock_guard lock(mutex_);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : records_)
        records.push_back({{"request_hash", r.request_hash}, {"response", r.response}});
    nlohmann::json j;
    j["schema_version"] = 1;
    j["records"] = records;
    write_json_file(path, j);
}

void Cassette::add(std::string request_hash, std::string response) {
    std::lock_guard lock(mutex_);
    records_.push_back(CassetteRecord{std::move(request_hash), std::move(response)});
    consumed_.push_back(false);
}

std::string Cassette::take(const std::string& request_hash) {
    std::lock_guard lock(mutex_);
    for (size_t i = 0; i < records_.size(); ++i) {
        if (!consumed_[i] && records_[i].request_hash == request_hash) {
            consumed_[i] = true;
            return records_[i].response;
        }
    }
    throw ClientError("no recorded response for request hash " + request_hash);
}

size_t Cassette::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

size_t Cassette::remaining() const {
    std::lock_guard lock(mutex_);
    size_t n = 0;
    for (bool used : consumed_)
        if (!used) ++n;
    return n;
}

std::string Cassette::translate_hash(const std::string& text, const std::string& source_lang,
                                     const std::string& target_lang) {
    return hex64(fnv1a64("translate\n" + source_lang + "\n" + target_lang + "\n" + text));
}

std::string Cassette::generate_hash(const std::string& prompt, int max_new_tokens,
                                    uint64_t seed) {
    return hex64(fnv1a64("generate\n" + std::to_string(max_new_tokens) + "\n" +
                         std::to_string(seed) + "\n" + prompt));
}

std::string CassetteTranslator::translate(const std::string& text, const std::string& source_lang,
                                          const std::string& target_lang) {
    return cassette_.take(Cassette::translate_hash(text, source_lang, target_lang));
}

std::string CassetteGenerator::generate(const std::string& prompt, int max_new_tokens,
                                        uint64_t seed) {
    return cassette_.take(Cassette::generate_hash(prompt, max_new_tokens, seed));
}

std::string RecordingTranslator::translate(const std::string& text,
                                           const std::string& source_lang,
                                           const std::string& target_lang) {
    std::string response = inner_.translate(text, source_lang, target_lang);
    cassette_.add(Cassette::translate_hash(text, source_lang, target_lang), response);
    return response;
}

std::string RecordingGenerator::generate(const std::string& prompt, int max_new_tokens,
                                         uint64_t seed) {
    std::string response = inner_.generate(prompt, max_new_tokens, seed);
    cassette_.add(Cassette::generate_hash(prompt, max_new_tokens, seed), response);
    return response;
}

std::string EchoGenerator::generate(const std::string& prompt, int max_new_tokens, uint64_t) {
    std::vector<std::string> tokens = word_tokens(prompt);
    size_t limit = std::min(tokens.size(), static_cast<size_t>(std::max(0, max_new_tokens)));
    return join_tokens(std::span<const std::string>(tokens.data(), limit));
}

}  // namespace gendetect

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gendetect/corpus.hpp"
#include "gendetect/imbalance.hpp"

namespace gendetect {

// Pluggable translation service. Implementations must be deterministic for
// fixed inputs within a session; live services that are not should be used
// through the recording wrapper and replayed from a cassette.
class TranslatorClient {
  public:
    virtual ~TranslatorClient() = default;
    virtual std::string translate(const std::string& text, const std::string& source_lang,
                                  const std::string& target_lang) = 0;
};

// Pluggable text generator (zero-shot LM prompting).
class GeneratorClient {
  public:
    virtual ~GeneratorClient() = default;
    virtual std::string generate(const std::string& prompt, int max_new_tokens,
                                 uint64_t seed) = 0;
};

// Round trip through a pivot language: src -> pivot -> src. Client failures
// are retried up to max_attempts; the final ClientError carries the attempt
// count.
std::string back_translate(const std::string& text, const std::string& pivot_lang,
                           TranslatorClient& client, int max_attempts = 3,
                           const std::string& source_lang = "en");

// Prompts the client with the first prompt_token_count tokens of the source
// and caps generation at the source's token count. Output exceeding the cap
// is cut at the cap; an empty generation is a ClientError.
std::string lm_generate(const Excerpt& source, GeneratorClient& client, int prompt_token_count,
                        uint64_t seed);

enum class AugmentMethod { BackTranslation, LmGeneration };
enum class SourcePool { OriginalCorpus, ExternalAbstracts };

std::string_view augment_method_name(AugmentMethod m);
AugmentMethod parse_augment_method(std::string_view name);
std::string_view source_pool_name(SourcePool p);
SourcePool parse_source_pool(std::string_view name);

struct AugmentationSpec {
    AugmentMethod method = AugmentMethod::BackTranslation;
    SourcePool source_pool = SourcePool::OriginalCorpus;
    size_t count = 0;
    std::string pivot_lang = "fr";
    int prompt_token_count = 20;
    uint64_t seed = 0;
    bool operator==(const AugmentationSpec&) const = default;
};

// Concurrency knobs for build_augmented_set: up to max_in_flight items are
// produced at once, while individual client calls stay serialized and spaced
// to requests_per_second (0 = unthrottled).
struct ClientLimits {
    int max_in_flight = 1;
    double requests_per_second = 0.0;
};

// Samples spec.count pool items without replacement (seeded) and emits one
// generated excerpt per sample, labeled Generated under a fresh id with
// provenance {method, source id}. For the external-abstracts pool the
// sampled abstracts themselves are also emitted, labeled Human. Output
// follows sampling order regardless of completion order.
Corpus build_augmented_set(const Corpus& pool, const AugmentationSpec& spec,
                           TranslatorClient* translator, GeneratorClient* generator,
                           const ClientLimits& limits = {});

// Concatenates base and augmented (ids must be disjoint), then applies the
// imbalance plan: augment first, resample second.
Corpus compose_training_set(const Corpus& base, const Corpus& augmented,
                            const ImbalancePlan& plan);

// --- record / replay ------------------------------------------------------
//
// Cassette file: {"schema_version":1, "records":[{"request_hash":"<16 hex>",
// "response":"..."}]} in call order. Replay consumes the first unconsumed
// record matching the request hash, so tests run fully offline.

struct CassetteRecord {
    std::string request_hash;
    std::string response;
};

class Cassette {
  public:
    Cassette() = default;
    Cassette(Cassette&& other) noexcept;
    static Cassette load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    void add(std::string request_hash, std::string response);
    std::string take(const std::string& request_hash);  // ClientError when absent
    size_t size() const;
    size_t remaining() const;

    static std::string translate_hash(const std::string& text, const std::string& source_lang,
                                      const std::string& target_lang);
    static std::string generate_hash(const std::string& prompt, int max_new_tokens,
                                     uint64_t seed);

  private:
    mutable std::mutex mutex_;
    std::vector<CassetteRecord> records_;
    std::vector<bool> consumed_;
};

class CassetteTranslator final : public TranslatorClient {
  public:
    explicit CassetteTranslator(Cassette& cassette) : cassette_(cassette) {}
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;

  private:
    Cassette& cassette_;
};

class CassetteGenerator final : public GeneratorClient {
  public:
    explicit CassetteGenerator(Cassette& cassette) : cassette_(cassette) {}
    std::string generate(const std::string& prompt, int max_new_tokens, uint64_t seed) override;

  private:
    Cassette& cassette_;
};

class RecordingTranslator final : public TranslatorClient {
  public:
    RecordingTranslator(TranslatorClient& inner, Cassette& cassette)
        : inner_(inner), cassette_(cassette) {}
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;

  private:
    TranslatorClient& inner_;
    Cassette& cassette_;
};

class RecordingGenerator final : public GeneratorClient {
  public:
    RecordingGenerator(GeneratorClient& inner, Cassette& cassette)
        : inner_(inner), cassette_(cassette) {}
    std::string generate(const std::string& prompt, int max_new_tokens, uint64_t seed) override;

  private:
    GeneratorClient& inner_;
    Cassette& cassette_;
};

// --- offline stand-ins ------------------------------------------------------

// Returns its input unchanged; the degenerate pivot round trip.
class IdentityTranslator final : public TranslatorClient {
  public:
    std::string translate(const std::string& text, const std::string&,
                          const std::string&) override {
        return text;
    }
};

// Returns the prompt itself, truncated to the token cap.
class EchoGenerator final : public GeneratorClient {
  public:
    std::string generate(const std::string& prompt, int max_new_tokens, uint64_t seed) override;
};

}  // namespace gendetect

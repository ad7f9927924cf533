#include <doctest.h>

#include <filesystem>

#include "gendetect/config.hpp"
#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"
#include "helpers.hpp"

using namespace gendetect;

namespace {

const char* kFullConfig = R"({
  "schema_version": 1,
  "seed": 42,
  "train_path": "train.csv",
  "test_path": "test.csv",
  "columns": {"id": "id", "text": "text", "label": "label"},
  "imbalance": "oversample",
  "imbalance_seed": null,
  "augmentations": [
    {"method": "back_translation", "source_pool": "original_corpus", "count": 5,
     "pivot_lang": "de", "translator": "identity"},
    {"method": "lm_generation", "source_pool": "original_corpus", "count": 3,
     "prompt_token_count": 10, "generator": "echo", "seed": 77}
  ],
  "backend_id": "baseline",
  "max_seq_len": 256,
  "learning_rate": 2e-05,
  "epochs": 3,
  "batch_size": 16,
  "sliding_window": true,
  "window_stride_fraction": 0.8,
  "train_seed": null,
  "cv_folds": 3,
  "output_dir": "out"
})";

}  // namespace

TEST_CASE("parse_pipeline_config reads the full document") {
    PipelineConfig cfg = parse_pipeline_config(kFullConfig);
    CHECK(cfg.seed == 42);
    CHECK(cfg.train_path == "train.csv");
    CHECK(cfg.imbalance == ImbalanceStrategy::Oversample);
    CHECK(cfg.max_seq_len == 256);
    REQUIRE(cfg.augmentations.size() == 2);
    CHECK(cfg.augmentations[0].method == AugmentMethod::BackTranslation);
    CHECK(cfg.augmentations[0].pivot_lang == "de");
    CHECK(cfg.augmentations[1].seed == 77);
    CHECK(cfg.problems().empty());
}

TEST_CASE("serialize and parse round trip") {
    PipelineConfig cfg = parse_pipeline_config(kFullConfig);
    PipelineConfig back = parse_pipeline_config(serialize_pipeline_config(cfg));
    CHECK(back == cfg);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(
        parse_pipeline_config(R"({"schema_version": 1, "train_path": "t.csv", "typo_key": 3})"),
        doctest::Contains("typo_key"), ConfigError);
    CHECK_THROWS_AS(parse_pipeline_config(R"({"schema_version": 2})"), ConfigError);
    CHECK_THROWS_AS(parse_pipeline_config("not json at all"), ConfigError);
    CHECK_THROWS_AS(parse_pipeline_config(R"({"schema_version": 1, "imbalance": "w"})"),
                    ConfigError);
}

TEST_CASE("problems lists every defect at once") {
    PipelineConfig cfg = parse_pipeline_config(kFullConfig);
    cfg.cv_folds = 1;
    cfg.output_dir = "";
    cfg.max_seq_len = 300;
    cfg.augmentations[1].prompt_token_count = 0;
    auto probs = cfg.problems();
    CHECK(probs.size() >= 4);
}

TEST_CASE("stage configs derive seeds from the global seed") {
    PipelineConfig cfg = parse_pipeline_config(kFullConfig);

    ImbalancePlan plan = make_imbalance_plan(cfg);
    CHECK(plan.strategy == ImbalanceStrategy::Oversample);
    CHECK(plan.seed == stage_seed(42, "imbalance"));

    TrainConfig train = make_train_config(cfg);
    CHECK(train.backend_id == "baseline");
    CHECK(train.max_seq_len == 256);
    CHECK(train.seed == stage_seed(42, "train"));

    CHECK(folds_seed(cfg) == stage_seed(42, "folds"));

    AugmentationSpec bt = make_augment_spec(cfg, 0);
    CHECK(bt.method == AugmentMethod::BackTranslation);
    CHECK(bt.pivot_lang == "de");
    CHECK(bt.count == 5);
    CHECK(bt.seed == stage_seed(42, "augment:0"));

    SUBCASE("explicit stage seeds win") {
        AugmentationSpec lm = make_augment_spec(cfg, 1);
        CHECK(lm.seed == 77);

        cfg.imbalance_seed = 1234;
        CHECK(make_imbalance_plan(cfg).seed == 1234);
        cfg.train_seed = 987;
        CHECK(make_train_config(cfg).seed == 987);
    }
}

TEST_CASE("stage validation guards client wiring") {
    PipelineConfig cfg = parse_pipeline_config(kFullConfig);

    SUBCASE("cassette clients need a cassette path") {
        cfg.augmentations[0].translator = "cassette";
        cfg.augmentations[0].cassette = "";
        CHECK_FALSE(cfg.problems().empty());
        cfg.augmentations[0].cassette = "session.json";
        CHECK(cfg.problems().empty());
    }

    SUBCASE("unknown client names are problems") {
        cfg.augmentations[0].translator = "google";
        CHECK_FALSE(cfg.problems().empty());
        cfg.augmentations[1].generator = "gpt2";
        CHECK(cfg.problems().size() >= 2);
    }

    SUBCASE("bt stage needs a pivot") {
        cfg.augmentations[0].pivot_lang = "";
        CHECK_FALSE(cfg.problems().empty());
    }

    SUBCASE("external pool needs a pool path") {
        cfg.augmentations[1].source_pool = SourcePool::ExternalAbstracts;
        cfg.augmentations[1].pool_path = "";
        CHECK_FALSE(cfg.problems().empty());
        cfg.augmentations[1].pool_path = "abstracts.csv";
        CHECK(cfg.problems().empty());
    }
}

TEST_CASE("config file round trip") {
    auto dir = testutil::make_temp_dir("config");
    PipelineConfig cfg = parse_pipeline_config(kFullConfig);
    save_pipeline_config(dir / "run.json", cfg);
    PipelineConfig back = load_pipeline_config(dir / "run.json");
    CHECK(back == cfg);
    CHECK_THROWS_AS(load_pipeline_config(dir / "missing.json"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("defaults parse from a minimal document") {
    PipelineConfig cfg = parse_pipeline_config(R"({"schema_version": 1})");
    CHECK(cfg.seed == 0);
    CHECK(cfg.backend_id == "baseline");
    CHECK(cfg.imbalance == ImbalanceStrategy::None);
    CHECK(cfg.cv_folds == 3);
    CHECK(cfg.augmentations.empty());
    CHECK(cfg.schema.id_column == "id");
    CHECK(cfg.schema.delimiter == ',');
}

// gendetect: detection pipeline for machine-generated scientific excerpts.
// Exit codes: 0 success, 1 usage or config, 2 data, 3 client or backend.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gendetect/augment.hpp"
#include "gendetect/baseline.hpp"
#include "gendetect/classify.hpp"
#include "gendetect/config.hpp"
#include "gendetect/corpus.hpp"
#include "gendetect/ensemble.hpp"
#include "gendetect/errors.hpp"
#include "gendetect/imbalance.hpp"
#include "gendetect/metrics.hpp"
#include "gendetect/rng.hpp"

namespace {

using namespace gendetect;

void add_schema_flags(CLI::App* cmd, ColumnSchema& schema) {
    cmd->add_option("--id-column", schema.id_column, "id column name");
    cmd->add_option("--text-column", schema.text_column, "text column name");
    cmd->add_option("--label-column", schema.label_column,
                    "label column name (empty for unlabeled files)");
    cmd->add_option("--delimiter", schema.delimiter, "field delimiter");
}

// Tolerates a missing label column: test sets and abstract pools carry none.
Corpus load_flexible(const std::filesystem::path& path, const ColumnSchema& schema) {
    CsvTable table = read_delimited(path, schema.delimiter);
    ColumnSchema effective = schema;
    if (!effective.label_column.empty() && table.column(effective.label_column) < 0)
        effective.label_column.clear();
    return corpus_from_table(table, effective, path.string());
}

std::filesystem::path resolve_cassette(const std::string& raw) {
    std::filesystem::path p = raw;
    if (p.is_relative())
        if (const char* dir = std::getenv("GENDETECT_CASSETTE_DIR")) p = std::filesystem::path(dir) / p;
    return p;
}

void require_usable(const PipelineConfig& config) {
    auto found = config.problems();
    if (found.empty()) return;
    std::string msg = "unusable config: ";
    for (size_t i = 0; i < found.size(); ++i) {
        if (i > 0) msg += "; ";
        msg += found[i];
    }
    throw ConfigError(msg);
}

// Materializes the clients named by the stage and runs it. The base corpus
// serves as the source pool unless the stage names an external file.
Corpus run_augment_stage(const PipelineConfig& config, size_t index, const Corpus& base,
                         const ClientLimits& limits, bool record) {
    const AugmentStage& stage = config.augmentations.at(index);
    AugmentationSpec spec = make_augment_spec(config, index);
    Corpus pool =
        stage.pool_path.empty() ? base : load_flexible(stage.pool_path, config.schema);

    std::optional<Cassette> cassette;
    std::filesystem::path cassette_path;
    if (!stage.cassette.empty()) cassette_path = resolve_cassette(stage.cassette);

    IdentityTranslator identity;
    EchoGenerator echo;
    std::optional<CassetteTranslator> cassette_translator;
    std::optional<CassetteGenerator> cassette_generator;
    std::optional<RecordingTranslator> recording_translator;
    std::optional<RecordingGenerator> recording_generator;
    TranslatorClient* translator = nullptr;
    GeneratorClient* generator = nullptr;

    if (stage.method == AugmentMethod::BackTranslation) {
        if (stage.translator == "cassette") {
            if (record) throw ConfigError("cannot record from a cassette translator");
            cassette.emplace(Cassette::load(cassette_path));
            cassette_translator.emplace(*cassette);
            translator = &*cassette_translator;
        } else {
            translator = &identity;
        }
    } else {
        if (stage.generator == "cassette") {
            if (record) throw ConfigError("cannot record from a cassette generator");
            cassette.emplace(Cassette::load(cassette_path));
            cassette_generator.emplace(*cassette);
            generator = &*cassette_generator;
        } else {
            generator = &echo;
        }
    }
    if (record) {
        if (stage.cassette.empty())
            throw ConfigError("recording needs a cassette path in the stage");
        cassette.emplace();
        if (translator) {
            recording_translator.emplace(*translator, *cassette);
            translator = &*recording_translator;
        }
        if (generator) {
            recording_generator.emplace(*generator, *cassette);
            generator = &*recording_generator;
        }
    }

    Corpus out = build_augmented_set(pool, spec, translator, generator, limits);
    if (record) cassette->save(cassette_path);
    return out;
}

Corpus concat(const Corpus& a, const Corpus& b) {
    std::vector<Excerpt> items;
    items.reserve(a.size() + b.size());
    items.insert(items.end(), a.items().begin(), a.items().end());
    items.insert(items.end(), b.items().begin(), b.items().end());
    return Corpus(std::move(items));
}

// All augmentation stages appended to the base corpus; stage outputs get an
// "a<index>." id prefix so repeated stages cannot collide.
Corpus compose_all_stages(const PipelineConfig& config, const Corpus& base,
                          const ClientLimits& limits) {
    Corpus composed = base;
    for (size_t i = 0; i < config.augmentations.size(); ++i) {
        Corpus aug = run_augment_stage(config, i, base, limits, false);
        std::vector<Excerpt> remapped;
        remapped.reserve(aug.size());
        for (Excerpt e : aug.items()) {
            e.id = "a" + std::to_string(i) + "." + e.id;
            remapped.push_back(std::move(e));
        }
        composed = concat(composed, Corpus(std::move(remapped)));
    }
    return composed;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

void write_submission(const std::filesystem::path& path, std::span<const Prediction> preds) {
    CsvTable table;
    table.header = {"id", "label"};
    for (const auto& p : preds)
        table.rows.push_back({p.id, std::to_string(label_value(p.label))});
    write_delimited(path, table, ',');
}

// --- subcommand bodies -------------------------------------------------------

struct StatsArgs {
    std::string input;
    ColumnSchema schema;
    bool as_json = false;
};

void cmd_stats(const StatsArgs& args) {
    Corpus corpus = load_flexible(args.input, args.schema);
    CorpusStats stats = corpus_stats(corpus);
    std::cout << (args.as_json ? stats_json(corpus, stats) : stats_text(corpus, stats));
}

struct SplitArgs {
    std::string input;
    std::string output;
    ColumnSchema schema;
    int folds = 3;
    uint64_t seed = 0;
};

void cmd_split(const SplitArgs& args) {
    Corpus corpus = load_corpus(args.input, args.schema);
    FoldPlan plan = stratified_kfold(corpus, args.folds, args.seed);
    write_fold_plan(args.output, plan, args.seed);
    std::cout << "wrote fold plan for " << corpus.size() << " items to " << args.output << "\n";
}

struct AugmentArgs {
    std::string config_path;
    std::string output;
    size_t stage = 0;
    bool record = false;
    ClientLimits limits;
};

void cmd_augment(const AugmentArgs& args) {
    PipelineConfig config = load_pipeline_config(args.config_path);
    require_usable(config);
    if (config.augmentations.empty())
        throw ConfigError("config defines no augmentation stages");
    if (args.stage >= config.augmentations.size())
        throw ConfigError("stage " + std::to_string(args.stage) + " out of range, config has " +
                          std::to_string(config.augmentations.size()) + " stages");
    const AugmentStage& stage = config.augmentations[args.stage];
    Corpus base;
    if (stage.pool_path.empty()) {
        if (config.train_path.empty())
            throw ConfigError("stage draws from the training corpus but train_path is empty");
        base = load_corpus(config.train_path, config.schema);
    }
    Corpus out = run_augment_stage(config, args.stage, base, args.limits, args.record);
    write_corpus(args.output, out, config.schema);
    std::cout << "wrote " << out.size() << " augmented items to " << args.output << "\n";
}

struct TrainArgs {
    std::string config_path;
    bool no_cv = false;
    ClientLimits limits;
};

void cmd_train(const PipelineConfig& config, const TrainArgs& args) {
    require_usable(config);
    if (config.train_path.empty()) throw ConfigError("train_path is required");

    Corpus base = load_corpus(config.train_path, config.schema);
    if (!base.fully_labeled())
        throw DataError(config.train_path + ": training corpus has unlabeled items");

    Corpus composed = compose_all_stages(config, base, args.limits);

    std::filesystem::path outdir = config.output_dir;
    std::filesystem::create_directories(outdir);
    save_pipeline_config(outdir / "config.json", config);

    ImbalancePlan plan = make_imbalance_plan(config);
    TrainConfig train_cfg = make_train_config(config);
    auto backend = make_backend(config.backend_id);

    if (!args.no_cv) {
        FoldPlan folds = stratified_kfold(composed, config.cv_folds, folds_seed(config));
        write_fold_plan(outdir / "folds.json", folds, folds_seed(config));
        MetricsReport report = cross_validate(composed, folds, *backend, {plan, train_cfg});
        write_text_file(outdir / "metrics.json", report_json(report));
        std::cout << report_table(report);
    }

    Corpus final_set = apply_imbalance(composed, plan);
    write_corpus(outdir / "training_set.csv", final_set, config.schema);
    TrainConfig final_cfg = train_cfg;
    if (plan.strategy == ImbalanceStrategy::ClassWeights)
        final_cfg.class_weights = class_weights(composed);
    auto model = backend->fit(final_set, final_cfg);
    model->save(outdir / "model");
    std::cout << "model saved to " << (outdir / "model").string() << "\n";
}

struct PredictArgs {
    std::string model_dir;
    std::string input;
    std::string output;
    std::string submission;
    ColumnSchema schema;
};

void cmd_predict(const PredictArgs& args) {
    auto model = load_model(args.model_dir);
    Corpus corpus = load_flexible(args.input, args.schema);
    std::vector<Prediction> preds = predict(*model, corpus.items());
    write_predictions(args.output, preds);
    if (!args.submission.empty()) write_submission(args.submission, preds);
    std::cout << "wrote " << preds.size() << " predictions to " << args.output << "\n";
}

struct EnsembleArgs {
    std::string spec_path;
    std::string output;
    std::string submission;
};

void cmd_ensemble(const EnsembleArgs& args) {
    EnsembleSpec spec = read_ensemble_spec(args.spec_path);
    std::vector<Prediction> preds = run_ensemble_spec(spec);
    write_predictions(args.output, preds);
    if (!args.submission.empty()) write_submission(args.submission, preds);
    std::cout << "wrote " << preds.size() << " ensembled predictions to " << args.output << "\n";
}

struct EvaluateArgs {
    std::string truth_path;
    std::string predictions_path;
    ColumnSchema schema;
    bool as_json = false;
};

void cmd_evaluate(const EvaluateArgs& args) {
    Corpus truth = load_corpus(args.truth_path, args.schema);
    if (!truth.fully_labeled())
        throw DataError(args.truth_path + ": truth corpus has unlabeled items");
    std::map<std::string, ClassLabel> truth_labels;
    for (const auto& e : truth.items()) truth_labels[e.id] = *e.label;

    // Accepts either a probability file or an id,label submission.
    CsvTable table = read_delimited(args.predictions_path, ',');
    std::vector<std::pair<std::string, ClassLabel>> predicted;
    if (table.column("p_human") >= 0 && table.column("p_generated") >= 0) {
        for (const auto& p : read_predictions(args.predictions_path))
            predicted.emplace_back(p.id, p.label);
    } else if (table.column("id") >= 0 && table.column("label") >= 0) {
        int id_col = table.column("id");
        int label_col = table.column("label");
        for (size_t r = 0; r < table.rows.size(); ++r) {
            auto label = parse_label(table.rows[r][static_cast<size_t>(label_col)]);
            if (!label)
                throw DataError(args.predictions_path + ": row " + std::to_string(r + 1) +
                                ": missing label");
            predicted.emplace_back(table.rows[r][static_cast<size_t>(id_col)], *label);
        }
    } else {
        throw DataError(args.predictions_path +
                        ": expected columns id,p_human,p_generated or id,label");
    }

    std::vector<ClassLabel> y_true;
    std::vector<ClassLabel> y_pred;
    y_true.reserve(predicted.size());
    y_pred.reserve(predicted.size());
    for (const auto& [id, label] : predicted) {
        auto it = truth_labels.find(id);
        if (it == truth_labels.end())
            throw DataError("prediction id \"" + id + "\" not present in " + args.truth_path);
        y_true.push_back(it->second);
        y_pred.push_back(label);
    }
    MetricsReport report = macro_scores(confusion(y_true, y_pred));
    std::cout << (args.as_json ? report_json(report) : report_table(report));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"detection pipeline for machine-generated scientific excerpts"};
    app.require_subcommand(1);

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "corpus size and length statistics");
    stats->add_option("--input", stats_args.input, "corpus file")->required();
    stats->add_flag("--json", stats_args.as_json, "emit JSON");
    add_schema_flags(stats, stats_args.schema);
    stats->callback([&] { cmd_stats(stats_args); });

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "write a stratified fold plan");
    split->add_option("--input", split_args.input, "labeled corpus file")->required();
    split->add_option("--output", split_args.output, "fold plan destination")->required();
    split->add_option("--folds", split_args.folds, "fold count");
    split->add_option("--seed", split_args.seed, "shuffle seed");
    add_schema_flags(split, split_args.schema);
    split->callback([&] { cmd_split(split_args); });

    AugmentArgs augment_args;
    auto* augment = app.add_subcommand("augment", "run one augmentation stage");
    augment->add_option("--config", augment_args.config_path, "pipeline config")->required();
    augment->add_option("--output", augment_args.output, "augmented corpus destination")
        ->required();
    augment->add_option("--stage", augment_args.stage, "stage index");
    augment->add_flag("--record", augment_args.record,
                      "record client traffic into the stage cassette");
    augment->add_option("--max-in-flight", augment_args.limits.max_in_flight,
                        "concurrent augmentation items");
    augment->add_option("--requests-per-second", augment_args.limits.requests_per_second,
                        "client rate limit, 0 for none");
    augment->callback([&] { cmd_augment(augment_args); });

    TrainArgs train_args;
    PipelineConfig train_config;
    uint64_t seed_override = 0;
    std::string train_override, test_override, imbalance_override, backend_override,
        output_override;
    int max_seq_override = 0, folds_override = 0;
    auto* train = app.add_subcommand("train", "augment, cross-validate and fit the final model");
    train->add_option("--config", train_args.config_path,
                      "pipeline config; defaults apply when omitted");
    auto* o_seed = train->add_option("--seed", seed_override, "global seed override");
    auto* o_train = train->add_option("--train", train_override, "training corpus override");
    auto* o_test = train->add_option("--test", test_override, "test corpus override");
    auto* o_imb = train->add_option("--imbalance", imbalance_override,
                                    "none | oversample | undersample | class_weights");
    auto* o_backend = train->add_option("--backend", backend_override, "backend id override");
    auto* o_maxseq = train->add_option("--max-seq-len", max_seq_override, "128 | 256 | 512");
    auto* o_folds = train->add_option("--cv-folds", folds_override, "fold count override");
    auto* o_outdir = train->add_option("--output-dir", output_override, "output directory");
    train->add_flag("--no-cv", train_args.no_cv, "skip cross-validation");
    train->add_option("--max-in-flight", train_args.limits.max_in_flight,
                      "concurrent augmentation items");
    train->add_option("--requests-per-second", train_args.limits.requests_per_second,
                      "client rate limit, 0 for none");
    train->callback([&] {
        train_config = train_args.config_path.empty()
                           ? PipelineConfig{}
                           : load_pipeline_config(train_args.config_path);
        if (*o_seed) train_config.seed = seed_override;
        if (*o_train) train_config.train_path = train_override;
        if (*o_test) train_config.test_path = test_override;
        if (*o_imb) train_config.imbalance = parse_strategy(imbalance_override);
        if (*o_backend) train_config.backend_id = backend_override;
        if (*o_maxseq) train_config.max_seq_len = max_seq_override;
        if (*o_folds) train_config.cv_folds = folds_override;
        if (*o_outdir) train_config.output_dir = output_override;
        cmd_train(train_config, train_args);
    });

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "score a corpus with a saved model");
    predict_cmd->add_option("--model-dir", predict_args.model_dir, "saved model directory")
        ->required();
    predict_cmd->add_option("--input", predict_args.input, "corpus file")->required();
    predict_cmd->add_option("--output", predict_args.output, "probability file destination")
        ->required();
    predict_cmd->add_option("--submission", predict_args.submission,
                            "also write an id,label submission file");
    add_schema_flags(predict_cmd, predict_args.schema);
    predict_cmd->callback([&] { cmd_predict(predict_args); });

    EnsembleArgs ensemble_args;
    auto* ensemble = app.add_subcommand("ensemble", "two-level vote over prediction files");
    ensemble->add_option("--spec", ensemble_args.spec_path, "ensemble spec file")->required();
    ensemble->add_option("--output", ensemble_args.output, "probability file destination")
        ->required();
    ensemble->add_option("--submission", ensemble_args.submission,
                         "also write an id,label submission file");
    ensemble->callback([&] { cmd_ensemble(ensemble_args); });

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "score predictions against a labeled corpus");
    evaluate->add_option("--truth", evaluate_args.truth_path, "labeled corpus file")->required();
    evaluate->add_option("--predictions", evaluate_args.predictions_path,
                         "probability or submission file")
        ->required();
    evaluate->add_flag("--json", evaluate_args.as_json, "emit JSON");
    add_schema_flags(evaluate, evaluate_args.schema);
    evaluate->callback([&] { cmd_evaluate(evaluate_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const ClientError& e) {
        std::cerr << "client error: " << e.what() << "\n";
        return 3;
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

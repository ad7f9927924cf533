#include "gendetect/metrics.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gendetect/errors.hpp"
#include "gendetect/rng.hpp"

namespace gendetect {

long long ConfusionMatrix::total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
    for (size_t t = 0; t < 2; ++t)
        for (size_t p = 0; p < 2; ++p) counts[t][p] += o.counts[t][p];
    return *this;
}

ConfusionMatrix confusion(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion: label spans differ in length");
    ConfusionMatrix m;
    for (size_t i = 0; i < y_true.size(); ++i)
        ++m.counts[static_cast<size_t>(label_value(y_true[i]))]
                  [static_cast<size_t>(label_value(y_pred[i]))];
    return m;
}

ExactReport macro_scores_exact(const ConfusionMatrix& m) {
    auto safe = [](long long num, long long den) {
        return den == 0 ? Ratio{0, 1} : Ratio::of(num, den);
    };
    ExactReport r;
    for (size_t c = 0; c < 2; ++c) {
        long long tp = m.counts[c][c];
        long long fp = m.counts[1 - c][c];
        long long fn = m.counts[c][1 - c];
        r.per_class[c].precision = safe(tp, tp + fp);
        r.per_class[c].recall = safe(tp, tp + fn);
        r.per_class[c].f1 = safe(2 * tp, 2 * tp + fp + fn);
    }
    r.macro.precision = (r.per_class[0].precision + r.per_class[1].precision).divided_by(2);
    r.macro.recall = (r.per_class[0].recall + r.per_class[1].recall).divided_by(2);
    r.macro.f1 = (r.per_class[0].f1 + r.per_class[1].f1).divided_by(2);
    return r;
}

MetricsReport macro_scores(const ConfusionMatrix& matrix) {
    ExactReport exact = macro_scores_exact(matrix);
    MetricsReport report;
    for (size_t c = 0; c < 2; ++c) {
        report.per_class[c].precision = exact.per_class[c].precision.value();
        report.per_class[c].recall = exact.per_class[c].recall.value();
        report.per_class[c].f1 = exact.per_class[c].f1.value();
    }
    report.macro.precision = exact.macro.precision.value();
    report.macro.recall = exact.macro.recall.value();
    report.macro.f1 = exact.macro.f1.value();
    report.matrix = matrix;
    return report;
}

namespace {

nlohmann::json scores_json(const ClassScores& s) {
    return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

nlohmann::json report_body(const MetricsReport& r) {
    nlohmann::json j;
    j["macro"] = scores_json(r.macro);
    j["per_class"] = {{"human", scores_json(r.per_class[0])},
                      {"generated", scores_json(r.per_class[1])}};
    j["confusion"] = {{r.matrix.counts[0][0], r.matrix.counts[0][1]},
                      {r.matrix.counts[1][0], r.matrix.counts[1][1]}};
    if (r.n_folds) j["n_folds"] = *r.n_folds;
    if (!r.folds.empty()) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& f : r.folds) folds.push_back(report_body(f));
        j["folds"] = folds;
    }
    return j;
}

}  // namespace

std::string report_json(const MetricsReport& report) {
    nlohmann::json j = report_body(report);
    j["schema_version"] = 1;
    return j.dump(2) + "\n";
}

std::string report_table(const MetricsReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(12) << "class" << std::right << std::setw(10) << "precision"
        << std::setw(10) << "recall" << std::setw(10) << "f1" << '\n';
    auto line = [&](const char* name, const ClassScores& s) {
        out << std::left << std::setw(12) << name << std::right << std::setw(10) << s.precision
            << std::setw(10) << s.recall << std::setw(10) << s.f1 << '\n';
    };
    line("human", report.per_class[0]);
    line("generated", report.per_class[1]);
    line("macro", report.macro);
    out << '\n';
    out << std::left << std::setw(16) << "" << std::right << std::setw(12) << "pred_human"
        << std::setw(16) << "pred_generated" << '\n';
    out << std::left << std::setw(16) << "true_human" << std::right << std::setw(12)
        << report.matrix.counts[0][0] << std::setw(16) << report.matrix.counts[0][1] << '\n';
    out << std::left << std::setw(16) << "true_generated" << std::right << std::setw(12)
        << report.matrix.counts[1][0] << std::setw(16) << report.matrix.counts[1][1] << '\n';
    if (report.n_folds) out << "\nfolds " << *report.n_folds << '\n';
    return out.str();
}

MetricsReport cross_validate(const Corpus& corpus, const FoldPlan& plan,
                             ClassifierBackend& backend, const TrainRecipe& recipe) {
    if (plan.k < 2) throw std::invalid_argument("cross_validate: plan needs k >= 2");
    if (!corpus.fully_labeled())
        throw std::invalid_argument("cross_validate: corpus has unlabeled items");

    MetricsReport top;
    top.n_folds = plan.k;
    for (int fold = 0; fold < plan.k; ++fold) {
        std::string fold_tag = "fold:" + std::to_string(fold);
        auto annotate = [&](const char* what) {
            return "fold " + std::to_string(fold) + ": " + what;
        };
        try {
            Corpus train = fold_complement(corpus, plan, fold);
            Corpus eval = fold_items(corpus, plan, fold);

            ImbalancePlan fold_imbalance = recipe.imbalance;
            fold_imbalance.seed = stage_seed(recipe.imbalance.seed, fold_tag);
            Corpus train_set = apply_imbalance(train, fold_imbalance);

            TrainConfig fold_cfg = recipe.train;
            fold_cfg.seed = stage_seed(recipe.train.seed, fold_tag);
            if (recipe.imbalance.strategy == ImbalanceStrategy::ClassWeights)
                fold_cfg.class_weights = class_weights(train);

            auto model = backend.fit(train_set, fold_cfg);
            auto preds = predict(*model, eval.items(), fold_cfg);

            std::vector<ClassLabel> y_true;
            std::vector<ClassLabel> y_pred;
            y_true.reserve(eval.size());
            y_pred.reserve(eval.size());
            for (size_t i = 0; i < eval.size(); ++i) {
                y_true.push_back(*eval.at(i).label);
                y_pred.push_back(preds[i].label);
            }
            ConfusionMatrix m = confusion(y_true, y_pred);
            top.folds.push_back(macro_scores(m));
            top.matrix += m;
        } catch (const ConfigError& e) {
            throw ConfigError(annotate(e.what()));
        } catch (const DataError& e) {
            throw DataError(annotate(e.what()));
        } catch (const BackendError& e) {
            throw BackendError(annotate(e.what()));
        } catch (const ClientError& e) {
            throw ClientError(annotate(e.what()), e.attempts);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(annotate(e.what()));
        }
    }

    double k = static_cast<double>(plan.k);
    for (const auto& f : top.folds) {
        for (size_t c = 0; c < 2; ++c) {
            top.per_class[c].precision += f.per_class[c].precision / k;
            top.per_class[c].recall += f.per_class[c].recall / k;
            top.per_class[c].f1 += f.per_class[c].f1 / k;
        }
        top.macro.precision += f.macro.precision / k;
        top.macro.recall += f.macro.recall / k;
        top.macro.f1 += f.macro.f1 / k;
    }
    return top;
}

}  // namespace gendetect

#include "indivec/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"

#include "indivec/error.hpp"

namespace indivec {

using nlohmann::json;

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_of(double precision, double recall) {
    return safe_div(2.0 * precision * recall, precision + recall);
}

void check_label(const std::string& label, LabelSpace space, const std::string& who) {
    for (std::string_view valid : labels_in_space(space)) {
        if (label == valid) return;
    }
    raise(ErrorCode::InvalidArgument,
          who + " label \"" + label + "\" is not in the " + std::string(to_string(space)) + " space");
}

}  // namespace

EvalReport evaluate(std::span<const LabeledId> predictions, std::span<const LabeledId> references,
                    LabelSpace space) {
    if (predictions.size() != references.size()) {
        raise(ErrorCode::IdMismatch, "got " + std::to_string(predictions.size()) +
                                         " predictions for " + std::to_string(references.size()) +
                                         " references");
    }

    std::unordered_map<std::string, const std::string*> gold_by_id;
    gold_by_id.reserve(references.size());
    for (const auto& [id, label] : references) {
        check_label(label, space, "reference");
        if (!gold_by_id.emplace(id, &label).second) {
            raise(ErrorCode::IdMismatch, "duplicate reference id \"" + id + "\"");
        }
    }

    EvalReport report;
    report.space = space;
    report.n = predictions.size();

    std::unordered_map<std::string, bool> seen;
    seen.reserve(predictions.size());
    for (const auto& [id, predicted] : predictions) {
        check_label(predicted, space, "prediction");
        const auto it = gold_by_id.find(id);
        if (it == gold_by_id.end()) {
            raise(ErrorCode::IdMismatch, "prediction id \"" + id + "\" has no reference");
        }
        if (!seen.emplace(id, true).second) {
            raise(ErrorCode::IdMismatch, "duplicate prediction id \"" + id + "\"");
        }
        report.confusion[*it->second][predicted] += 1;
    }

    const auto space_labels = labels_in_space(space);
    double f1_sum = 0.0;
    long long pooled_tp = 0, pooled_fp = 0, pooled_fn = 0;

    for (std::string_view label_view : space_labels) {
        const std::string label(label_view);
        long long tp = 0, fp = 0, fn = 0;
        for (std::string_view other_view : space_labels) {
            const std::string other(other_view);
            int gold_label_pred_other = 0;
            int gold_other_pred_label = 0;
            if (const auto g = report.confusion.find(label); g != report.confusion.end()) {
                if (const auto p = g->second.find(other); p != g->second.end()) {
                    gold_label_pred_other = p->second;
                }
            }
            if (const auto g = report.confusion.find(other); g != report.confusion.end()) {
                if (const auto p = g->second.find(label); p != g->second.end()) {
                    gold_other_pred_label = p->second;
                }
            }
            if (other == label) {
                tp = gold_label_pred_other;
            } else {
                fn += gold_label_pred_other;
                fp += gold_other_pred_label;
            }
        }
        ClassMetrics metrics;
        metrics.precision = safe_div(static_cast<double>(tp), static_cast<double>(tp + fp));
        metrics.recall = safe_div(static_cast<double>(tp), static_cast<double>(tp + fn));
        metrics.f1 = f1_of(metrics.precision, metrics.recall);
        report.per_class[label] = metrics;
        f1_sum += metrics.f1;
        pooled_tp += tp;
        pooled_fp += fp;
        pooled_fn += fn;
    }

    report.macro_f1 = f1_sum / static_cast<double>(space_labels.size());
    const double micro_p =
        safe_div(static_cast<double>(pooled_tp), static_cast<double>(pooled_tp + pooled_fp));
    const double micro_r =
        safe_div(static_cast<double>(pooled_tp), static_cast<double>(pooled_tp + pooled_fn));
    report.micro_f1 = f1_of(micro_p, micro_r);

    if (space == LabelSpace::Binary) {
        const ClassMetrics& biased = report.per_class.at("biased");
        report.biased_precision = biased.precision;
        report.biased_recall = biased.recall;
        report.biased_f1 = biased.f1;
    }
    return report;
}

std::string eval_report_to_json(const EvalReport& report, bool pretty) {
    json per_class = json::object();
    for (const auto& [label, metrics] : report.per_class) {
        per_class[label] = {
            {"precision", metrics.precision},
            {"recall", metrics.recall},
            {"f1", metrics.f1},
        };
    }
    json j = {
        {"space", to_string(report.space)},
        {"n", report.n},
        {"confusion", report.confusion},
        {"per_class", std::move(per_class)},
        {"micro_f1", report.micro_f1},
        {"macro_f1", report.macro_f1},
    };
    if (report.space == LabelSpace::Binary) {
        j["biased_precision"] = report.biased_precision;
        j["biased_recall"] = report.biased_recall;
        j["biased_f1"] = report.biased_f1;
    }
    return pretty ? j.dump(2) : j.dump();
}

}  // namespace indivec

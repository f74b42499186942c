#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>

#include "indivec/labels.hpp"

namespace indivec {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Classification quality over a label space. Every metric is derivable
/// from the confusion matrix exactly; any zero-denominator metric is
/// defined as 0.
struct EvalReport {
    LabelSpace space = LabelSpace::Binary;
    size_t n = 0;
    std::map<std::string, std::map<std::string, int>> confusion;  // gold -> pred -> count
    std::map<std::string, ClassMetrics> per_class;
    double biased_precision = 0.0;  // binary space only
    double biased_recall = 0.0;
    double biased_f1 = 0.0;
    double micro_f1 = 0.0;  // pooled over all classes; equals accuracy here
    double macro_f1 = 0.0;  // unweighted mean of per-class F1 over the space
};

using LabeledId = std::pair<std::string, std::string>;  // (id, serialized label)

/// Score predictions against references. The id sets must coincide
/// (IdMismatch otherwise) and every label must belong to the space.
EvalReport evaluate(std::span<const LabeledId> predictions, std::span<const LabeledId> references,
                    LabelSpace space);

std::string eval_report_to_json(const EvalReport& report, bool pretty = false);

}  // namespace indivec

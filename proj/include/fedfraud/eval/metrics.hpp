#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fedfraud::eval {

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
};

// Fraud (y=1) is the positive class throughout.
ConfusionMatrix confusion(const std::vector<int>& predicted, const std::vector<int>& actual);

struct BinaryMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    bool degenerate = false;  // a zero denominator was replaced by 0
};

BinaryMetrics binary_metrics(const ConfusionMatrix& cm);

// One-vs-rest per anomaly type: the type-k fraud rows plus all non-fraud
// rows. Types absent from the evaluation set are omitted (diagnosed via the
// returned set when requested).
std::map<int, ConfusionMatrix> per_type_confusion(const std::vector<int>& predicted,
                                                  const std::vector<int>& actual,
                                                  const std::vector<std::set<int>>& type_tags,
                                                  std::set<int>* absent_types = nullptr);

std::map<int, double> per_type_f1(const std::vector<int>& predicted,
                                  const std::vector<int>& actual,
                                  const std::vector<std::set<int>>& type_tags,
                                  std::set<int>* absent_types = nullptr);

double mean_f1(const std::map<int, double>& per_type);

struct PrCurve {
    std::vector<std::pair<double, double>> points;  // (recall, precision)
    double auprc = 0.0;
    double no_skill = 0.0;  // positive prevalence
    bool degenerate = false;  // single-class input
};

// Precision/recall at every distinct threshold of a descending-score sweep;
// AUPRC by the step-wise rectangle rule.
PrCurve pr_curve(const std::vector<double>& scores, const std::vector<int>& labels);

// First round r whose metric window [r, r+window) has sd <= sigma_max.
std::optional<std::size_t> convergence_round(const std::vector<double>& history, double sigma_max,
                                             std::size_t window);

struct MetricReport {
    double f1 = 0.0, precision = 0.0, recall = 0.0, accuracy = 0.0;
    std::map<int, double> per_type;
    double mean_per_type_f1 = 0.0;
    double auprc = 0.0;
    ConfusionMatrix cm;
    bool degenerate = false;
};

// Full evaluation of hard predictions plus scores against labels/tags.
MetricReport evaluate_predictions(const std::vector<int>& predicted,
                                  const std::vector<double>& scores,
                                  const std::vector<int>& actual,
                                  const std::vector<std::set<int>>& type_tags);

}  // namespace fedfraud::eval

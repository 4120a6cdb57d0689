#include "fedfraud/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedfraud::eval {

ConfusionMatrix confusion(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("confusion: length mismatch");
    if (predicted.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] == 1;
        const bool a = actual[i] == 1;
        if (p && a) ++cm.tp;
        else if (p && !a) ++cm.fp;
        else if (!p && a) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

BinaryMetrics binary_metrics(const ConfusionMatrix& cm) {
    BinaryMetrics m;
    const auto safe_div = [&m](std::size_t num, std::size_t den) {
        if (den == 0) {
            m.degenerate = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.precision = safe_div(cm.tp, cm.tp + cm.fp);
    m.recall = safe_div(cm.tp, cm.tp + cm.fn);
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else
        m.degenerate = true;
    m.accuracy = safe_div(cm.tp + cm.tn, cm.total());
    return m;
}

std::map<int, ConfusionMatrix> per_type_confusion(const std::vector<int>& predicted,
                                                  const std::vector<int>& actual,
                                                  const std::vector<std::set<int>>& type_tags,
                                                  std::set<int>* absent_types) {
    if (predicted.size() != actual.size() || predicted.size() != type_tags.size())
        throw std::invalid_argument("per_type_confusion: length mismatch");

    std::set<int> present;
    for (std::size_t i = 0; i < actual.size(); ++i)
        if (actual[i] == 1)
            for (int t : type_tags[i]) present.insert(t);

    if (absent_types) {
        for (int t = 1; t <= 4; ++t)
            if (!present.count(t)) absent_types->insert(t);
    }

    std::map<int, ConfusionMatrix> out;
    for (int t : present) {
        std::vector<int> pred_sub, act_sub;
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const bool is_type_fraud = actual[i] == 1 && type_tags[i].count(t) > 0;
            const bool is_normal = actual[i] == 0;
            if (!is_type_fraud && !is_normal) continue;  // other fraud types excluded
            pred_sub.push_back(predicted[i]);
            act_sub.push_back(actual[i]);
        }
        out[t] = confusion(pred_sub, act_sub);
    }
    return out;
}

std::map<int, double> per_type_f1(const std::vector<int>& predicted,
                                  const std::vector<int>& actual,
                                  const std::vector<std::set<int>>& type_tags,
                                  std::set<int>* absent_types) {
    std::map<int, double> out;
    for (const auto& [t, cm] : per_type_confusion(predicted, actual, type_tags, absent_types))
        out[t] = binary_metrics(cm).f1;
    return out;
}

double mean_f1(const std::map<int, double>& per_type) {
    if (per_type.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [t, f1] : per_type) sum += f1;
    return sum / static_cast<double>(per_type.size());
}

PrCurve pr_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("pr_curve: bad input lengths");
    for (double s : scores)
        if (!std::isfinite(s)) throw std::invalid_argument("pr_curve: non-finite score");

    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (int y : labels) positives += static_cast<std::size_t>(y);

    PrCurve curve;
    curve.no_skill = static_cast<double>(positives) / static_cast<double>(n);
    if (positives == 0 || positives == n) {
        curve.degenerate = true;
        return curve;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::size_t tp = 0, fp = 0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = order[i];
        if (labels[idx] == 1) ++tp;
        else ++fp;
        // emit a point only at distinct-threshold boundaries
        if (i + 1 < n && scores[order[i + 1]] == scores[idx]) continue;
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall = static_cast<double>(tp) / static_cast<double>(positives);
        curve.points.emplace_back(recall, precision);
        curve.auprc += (recall - prev_recall) * precision;  // step-wise rule
        prev_recall = recall;
    }
    return curve;
}

std::optional<std::size_t> convergence_round(const std::vector<double>& history, double sigma_max,
                                             std::size_t window) {
    if (window < 2) throw std::invalid_argument("convergence_round: window must be >= 2");
    if (history.size() < window) return std::nullopt;
    for (std::size_t r = 0; r + window <= history.size(); ++r) {
        double mean = 0.0;
        for (std::size_t i = 0; i < window; ++i) mean += history[r + i];
        mean /= static_cast<double>(window);
        double var = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double d = history[r + i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(window);
        if (std::sqrt(var) <= sigma_max) return r;
    }
    return std::nullopt;
}

MetricReport evaluate_predictions(const std::vector<int>& predicted,
                                  const std::vector<double>& scores,
                                  const std::vector<int>& actual,
                                  const std::vector<std::set<int>>& type_tags) {
    MetricReport report;
    report.cm = confusion(predicted, actual);
    const BinaryMetrics m = binary_metrics(report.cm);
    report.f1 = m.f1;
    report.precision = m.precision;
    report.recall = m.recall;
    report.accuracy = m.accuracy;
    report.degenerate = m.degenerate;
    report.per_type = per_type_f1(predicted, actual, type_tags);
    report.mean_per_type_f1 = mean_f1(report.per_type);
    const PrCurve curve = pr_curve(scores, actual);
    report.auprc = curve.auprc;
    return report;
}

}  // namespace fedfraud::eval

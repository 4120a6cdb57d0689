#include "fedfraud/attribution/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "fedfraud/common/csv.hpp"
#include "fedfraud/features/features.hpp"
#include "fedfraud/nn/network.hpp"

namespace fedfraud::attribution {

double logit_margin(const nn::ModelParameters& model, std::span<const double> input) {
    Matrix x(1, input.size());
    std::copy(input.begin(), input.end(), x.data.begin());
    const Matrix logits = nn::forward_logits(model, x);
    return logits.at(0, 1) - logits.at(0, 0);
}

Matrix margin_input_gradients(const nn::ModelParameters& model, const Matrix& inputs) {
    auto fwd = nn::forward(model, inputs);
    Matrix dlogits(inputs.rows, 2);
    for (std::size_t r = 0; r < inputs.rows; ++r) {
        dlogits.at(r, 0) = -1.0;
        dlogits.at(r, 1) = 1.0;
    }
    nn::BackwardOptions opts;
    opts.want_input_grads = true;
    auto grads = nn::backward(model, fwd.cache, dlogits, opts);
    return std::move(grads.input_grads);
}

AttributionReport gradient_shap(const nn::ModelParameters& model, const Matrix& inputs,
                                const Matrix& baselines, std::size_t k_samples, Rng& rng) {
    if (baselines.rows == 0) throw std::invalid_argument("gradient_shap: empty baseline set");
    if (k_samples < 1) throw std::invalid_argument("gradient_shap: k_samples must be >= 1");
    if (inputs.cols != baselines.cols)
        throw std::invalid_argument("gradient_shap: input/baseline width mismatch");

    const std::size_t dim = inputs.cols;
    AttributionReport report;
    report.baseline_count = baselines.rows;
    report.attributions = Matrix(inputs.rows, dim);

    double phi0 = 0.0;
    for (std::size_t b = 0; b < baselines.rows; ++b) {
        const auto row = baselines.row(b);
        phi0 += logit_margin(model, row);
    }
    report.phi0 = phi0 / static_cast<double>(baselines.rows);

    // Evaluate all K interpolants of one input as a single batch.
    Matrix points(k_samples, dim);
    Matrix diffs(k_samples, dim);
    for (std::size_t r = 0; r < inputs.rows; ++r) {
        const auto x = inputs.row(r);
        for (std::size_t k = 0; k < k_samples; ++k) {
            const auto base = baselines.row(rng.uniform_index(baselines.rows));
            const double t = rng.uniform();
            for (std::size_t i = 0; i < dim; ++i) {
                diffs.at(k, i) = x[i] - base[i];
                points.at(k, i) = base[i] + t * diffs.at(k, i);
            }
        }
        const Matrix grads = margin_input_gradients(model, points);
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < k_samples; ++k) acc += diffs.at(k, i) * grads.at(k, i);
            report.attributions.at(r, i) = acc / static_cast<double>(k_samples);
        }
    }

    report.mean_abs.assign(dim, 0.0);
    for (std::size_t r = 0; r < inputs.rows; ++r)
        for (std::size_t i = 0; i < dim; ++i)
            report.mean_abs[i] += std::abs(report.attributions.at(r, i));
    if (inputs.rows > 0)
        for (double& v : report.mean_abs) v /= static_cast<double>(inputs.rows);

    report.feature_names = dim == features::feature_count()
                               ? features::feature_layout()
                               : [dim] {
                                     std::vector<std::string> names;
                                     for (std::size_t i = 0; i < dim; ++i)
                                         names.push_back("f" + std::to_string(i));
                                     return names;
                                 }();
    report.ranking = rank_features(report.feature_names, report.mean_abs);
    return report;
}

std::vector<double> exact_shapley(const ScalarModel& f, const std::vector<double>& x,
                                  const std::vector<double>& baseline,
                                  std::size_t max_features) {
    const std::size_t m = x.size();
    if (baseline.size() != m) throw std::invalid_argument("exact_shapley: baseline size mismatch");
    if (m > max_features || m > 20)
        throw std::invalid_argument(
            "exact_shapley: too many features for exact enumeration; use gradient_shap");

    // f evaluated on every coalition mask once.
    const std::size_t n_masks = std::size_t{1} << m;
    std::vector<double> value(n_masks);
    std::vector<double> point(m);
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
        for (std::size_t i = 0; i < m; ++i)
            point[i] = (mask >> i) & 1 ? x[i] : baseline[i];
        value[mask] = f(point);
    }

    std::vector<double> factorial(m + 1, 1.0);
    for (std::size_t i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);

    std::vector<double> phi(m, 0.0);
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
        const auto s = static_cast<std::size_t>(std::popcount(mask));
        for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1) continue;
            const double weight = factorial[s] * factorial[m - s - 1] / factorial[m];
            phi[i] += weight * (value[mask | (std::size_t{1} << i)] - value[mask]);
        }
    }
    return phi;
}

std::vector<std::pair<std::string, double>> rank_features(
    const std::vector<std::string>& feature_names, const std::vector<double>& scores) {
    if (feature_names.size() != scores.size())
        throw std::invalid_argument("rank_features: name/score length mismatch");
    std::vector<std::pair<std::string, double>> ranked;
    for (std::size_t i = 0; i < scores.size(); ++i) ranked.emplace_back(feature_names[i], scores[i]);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

void write_report(const std::string& dir, const std::string& tag,
                  const AttributionReport& report) {
    std::filesystem::create_directories(dir);

    CsvWriter ranking(dir + "/attribution_ranking_" + tag + ".csv");
    ranking.write_row({"feature", "mean_abs_attribution"});
    for (const auto& [name, score] : report.ranking)
        ranking.write_row({name, format_double(score)});

    CsvWriter matrix(dir + "/attribution_matrix_" + tag + ".csv");
    matrix.write_row(report.feature_names);
    for (std::size_t r = 0; r < report.attributions.rows; ++r) {
        std::vector<std::string> row;
        for (std::size_t c = 0; c < report.attributions.cols; ++c)
            row.push_back(format_double(report.attributions.at(r, c)));
        matrix.write_row(row);
    }

    std::ofstream summary(dir + "/attribution_summary_" + tag + ".txt");
    summary << "samples: " << report.attributions.rows << "\n";
    summary << "baselines: " << report.baseline_count << "\n";
    summary << "phi0 (expected margin over baselines): " << report.phi0 << "\n";
    summary << "score = mean |attribution| per feature\n\n";
    for (const auto& [name, score] : report.ranking)
        summary << name << "\t" << score << "\n";
}

}  // namespace fedfraud::attribution

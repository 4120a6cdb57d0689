#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fedfraud/common/matrix.hpp"
#include "fedfraud/common/rng.hpp"
#include "fedfraud/nn/model.hpp"

namespace fedfraud::attribution {

struct AttributionReport {
    std::vector<std::string> feature_names;
    Matrix attributions;                                // samples x features
    std::vector<double> mean_abs;                       // per feature
    std::vector<std::pair<std::string, double>> ranking;  // descending mean |phi|
    std::size_t baseline_count = 0;
    double phi0 = 0.0;  // expected model output over the baselines
};

// Attribution target: fraud-minus-legit logit margin, invariant to a common
// shift of both logits.
double logit_margin(const nn::ModelParameters& model, std::span<const double> input);

// Gradient of the margin w.r.t. inputs, one row per input row.
Matrix margin_input_gradients(const nn::ModelParameters& model, const Matrix& inputs);

// Stochastic gradient-path attribution: per input, K interpolation points
// x = b + t (x - b) with uniform t and a baseline b drawn per point;
// phi_i averages (x_i - b_i) * d f / d x_i over the points.
AttributionReport gradient_shap(const nn::ModelParameters& model, const Matrix& inputs,
                                const Matrix& baselines, std::size_t k_samples, Rng& rng);

using ScalarModel = std::function<double(const std::vector<double>&)>;

// Exact Shapley values by coalition enumeration with single-reference
// marginalization: f_S substitutes baseline values outside S. Exponential in
// the feature count, hence the hard cap.
std::vector<double> exact_shapley(const ScalarModel& f, const std::vector<double>& x,
                                  const std::vector<double>& baseline,
                                  std::size_t max_features = 12);

// Descending by score; ties broken by feature name.
std::vector<std::pair<std::string, double>> rank_features(
    const std::vector<std::string>& feature_names, const std::vector<double>& scores);

void write_report(const std::string& dir, const std::string& tag, const AttributionReport& report);

}  // namespace fedfraud::attribution

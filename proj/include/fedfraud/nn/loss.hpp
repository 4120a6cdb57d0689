#pragma once

#include <vector>

#include "fedfraud/common/matrix.hpp"

namespace fedfraud::nn {

struct FocalParams {
    double gamma = 2.0;
    double alpha0 = 1.0;  // class-0 weight
    double alpha1 = 1.0;  // class-1 (fraud) weight
};

// Class weights proportional to inverse class frequency, N / (2 * N_c).
// Classes absent from the batch get weight 1.
FocalParams inverse_class_frequency(const std::vector<int>& labels, double gamma = 2.0);

enum class Reduction {
    Mean,       // dlogits carries 1/B scaling
    PerSample,  // each dlogits row is the gradient of that row's own loss
};

struct FocalLossResult {
    double loss = 0.0;  // mean over the batch in both reductions
    Matrix dlogits;
    std::vector<double> per_sample_loss;
};

// FL(p_t) = -alpha_t (1 - p_t)^gamma ln(p_t) on softmax probabilities, with
// the exact analytic gradient. gamma = 0 and uniform alpha reduce it to
// cross-entropy.
FocalLossResult focal_loss(const Matrix& logits, const std::vector<int>& labels,
                           const FocalParams& params, Reduction reduction = Reduction::Mean);

// Softmax probability of the fraud class per row.
std::vector<double> fraud_scores(const Matrix& logits);

}  // namespace fedfraud::nn

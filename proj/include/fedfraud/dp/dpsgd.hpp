#pragma once

#include <span>
#include <vector>

#include "fedfraud/common/rng.hpp"

namespace fedfraud::dp {

// l2 norm of one flat per-sample gradient.
double grad_norm(std::span<const double> grad);

// g. min(1, C/||g||): scales in place, leaves small gradients untouched.
void clip_gradient(std::span<double> grad, double max_norm);
void clip_per_sample(std::vector<std::vector<double>>& per_sample_grads, double max_norm);

// Noisy mean of clipped per-sample gradients: the sum is perturbed with
// iid N(0, (sigma C)^2) per coordinate, then divided by the batch size, so
// the mean carries noise of sd sigma*C/|B|.
std::vector<double> privatize_batch(const std::vector<std::vector<double>>& clipped_grads,
                                    double max_norm, double sigma, std::size_t batch_size,
                                    Rng& rng);

// Poisson subsampling: each index enters the batch independently with
// probability q, matching the accountant's amplification assumption.
std::vector<std::size_t> poisson_sample(std::size_t dataset_size, double q, Rng& rng);

}  // namespace fedfraud::dp

#include "fedfraud/dp/dpsgd.hpp"

#include <cmath>
#include <stdexcept>

namespace fedfraud::dp {

double grad_norm(std::span<const double> grad) {
    double ss = 0.0;
    for (double v : grad) ss += v * v;
    return std::sqrt(ss);
}

void clip_gradient(std::span<double> grad, double max_norm) {
    if (!(max_norm > 0.0)) throw std::invalid_argument("clip_gradient: max_norm must be > 0");
    const double norm = grad_norm(grad);
    if (norm <= max_norm) return;
    const double factor = max_norm / norm;
    for (double& v : grad) v *= factor;
}

void clip_per_sample(std::vector<std::vector<double>>& per_sample_grads, double max_norm) {
    for (auto& g : per_sample_grads) clip_gradient(g, max_norm);
}

std::vector<double> privatize_batch(const std::vector<std::vector<double>>& clipped_grads,
                                    double max_norm, double sigma, std::size_t batch_size,
                                    Rng& rng) {
    if (clipped_grads.empty()) throw std::invalid_argument("privatize_batch: empty batch");
    if (batch_size == 0) throw std::invalid_argument("privatize_batch: batch_size must be > 0");
    if (sigma < 0.0) throw std::invalid_argument("privatize_batch: sigma must be >= 0");

    const std::size_t dim = clipped_grads.front().size();
    std::vector<double> out(dim, 0.0);
    for (const auto& g : clipped_grads) {
        if (g.size() != dim) throw std::invalid_argument("privatize_batch: gradient size mismatch");
        for (std::size_t i = 0; i < dim; ++i) out[i] += g[i];
    }
    const double noise_sd = sigma * max_norm;
    if (noise_sd > 0.0)
        for (double& v : out) v += rng.normal(0.0, noise_sd);
    const double inv_b = 1.0 / static_cast<double>(batch_size);
    for (double& v : out) v *= inv_b;
    return out;
}

std::vector<std::size_t> poisson_sample(std::size_t dataset_size, double q, Rng& rng) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("poisson_sample: q must be in (0, 1]");
    std::vector<std::size_t> batch;
    for (std::size_t i = 0; i < dataset_size; ++i)
        if (rng.bernoulli(q)) batch.push_back(i);
    return batch;
}

}  // namespace fedfraud::dp

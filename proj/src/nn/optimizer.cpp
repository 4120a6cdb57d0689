#include "fedfraud/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace fedfraud::nn {

void optimizer_step(ModelParameters& params, const ModelParameters& grads, OptimizerState& state,
                    const OptimizerConfig& config) {
    if (!params.same_shape(grads)) throw std::invalid_argument("optimizer_step: shape mismatch");

    const std::size_t n = params.data.size();
    if (config.kind == OptimizerKind::Sgd) {
        for (std::size_t i = 0; i < n; ++i) params.data[i] -= config.lr * grads.data[i];
        return;
    }

    if (state.m.size() != n) {
        state.m.assign(n, 0.0);
        state.v.assign(n, 0.0);
        state.step = 0;
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads.data[i];
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params.data[i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
    }
}

}  // namespace fedfraud::nn

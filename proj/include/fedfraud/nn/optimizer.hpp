#pragma once

#include <cstdint>
#include <vector>

#include "fedfraud/nn/model.hpp"

namespace fedfraud::nn {

enum class OptimizerKind { Adam, Sgd };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct OptimizerState {
    std::vector<double> m, v;  // Adam moments, lazily sized
    std::uint64_t step = 0;
};

// One update in place. SGD: p -= lr*g. Adam: bias-corrected moments.
void optimizer_step(ModelParameters& params, const ModelParameters& grads, OptimizerState& state,
                    const OptimizerConfig& config);

}  // namespace fedfraud::nn

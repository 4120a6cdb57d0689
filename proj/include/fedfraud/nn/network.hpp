#pragma once

#include <vector>

#include "fedfraud/common/matrix.hpp"
#include "fedfraud/nn/model.hpp"

namespace fedfraud::nn {

// Per-layer intermediates kept for backprop. LayerNorm statistics are
// per-row, so every gradient quantity decomposes sample-wise.
struct LayerCache {
    Matrix input;                 // batch x in
    Matrix normalized;            // xhat, hidden layers only
    std::vector<double> inv_std;  // per row, hidden layers only
    Matrix activated;             // post-ReLU output, hidden layers only
};

struct ForwardCache {
    std::vector<LayerCache> layers;
    Matrix logits;
    bool consumed = false;
};

struct ForwardResult {
    Matrix logits;
    ForwardCache cache;
};

// Hidden layers apply affine -> LayerNorm -> ReLU; the output layer is
// affine only. Throws on NaN input.
ForwardResult forward(const ModelParameters& params, const Matrix& batch);

// Inference-only forward, no cache.
Matrix forward_logits(const ModelParameters& params, const Matrix& batch);

struct BackwardOptions {
    bool want_per_sample = false;
    bool want_input_grads = false;
};

struct Gradients {
    ModelParameters grads;                      // summed over the batch
    std::vector<std::vector<double>> per_sample;  // flat, aligned with params.data
    Matrix input_grads;                         // optional
};

// Exact reverse-mode gradients. The cache is consumed; reuse is an error.
Gradients backward(const ModelParameters& params, ForwardCache& cache, const Matrix& dlogits,
                   const BackwardOptions& options = {});

}  // namespace fedfraud::nn

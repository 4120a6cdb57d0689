#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fedfraud/common/rng.hpp"

namespace fedfraud::nn {

// Hidden widths of the classifier; input -> 64 -> 32 -> 16 -> 2.
inline constexpr std::size_t kHidden[3] = {64, 32, 16};
inline constexpr std::size_t kOutputs = 2;
inline constexpr double kLayerNormEps = 1e-5;

struct TensorSpec {
    std::string name;
    std::vector<std::size_t> dims;
    std::size_t offset = 0;

    std::size_t size() const {
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        return n;
    }

    bool operator==(const TensorSpec&) const = default;
};

// All parameters in one flat buffer with named shape views. Value semantics;
// a snapshot is exactly what crosses the wire each round.
struct ModelParameters {
    std::vector<TensorSpec> specs;
    std::vector<double> data;

    std::span<double> tensor(std::size_t i) { return {data.data() + specs[i].offset, specs[i].size()}; }
    std::span<const double> tensor(std::size_t i) const {
        return {data.data() + specs[i].offset, specs[i].size()};
    }

    std::size_t param_count() const { return data.size(); }
    bool same_shape(const ModelParameters& other) const { return specs == other.specs; }
    std::size_t input_dim() const { return specs.empty() ? 0 : specs[0].dims[1]; }
};

// Affine + LayerNorm views for one layer. Output layer has empty norm spans.
// Offsets locate each tensor inside the flat parameter buffer, which the
// per-sample gradient path writes into directly.
struct LayerView {
    std::span<const double> w, b, gain, offset;
    std::size_t in = 0, out = 0;
    std::size_t w_off = 0, b_off = 0, gain_off = 0, offset_off = 0;
};

struct LayerViewMut {
    std::span<double> w, b, gain, offset;
    std::size_t in = 0, out = 0;
    std::size_t w_off = 0, b_off = 0, gain_off = 0, offset_off = 0;
};

std::vector<LayerView> layer_views(const ModelParameters& p);
std::vector<LayerViewMut> layer_views(ModelParameters& p);

// Shape skeleton for the fixed architecture with all values zero.
ModelParameters model_skeleton(std::size_t input_dim);

// Weights from uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)), zero biases,
// identity LayerNorm. Deterministic under seed.
ModelParameters init_model(std::size_t input_dim, std::uint64_t seed);

ModelParameters zeros_like(const ModelParameters& p);
void fill(ModelParameters& p, double value);
void axpy(double a, const ModelParameters& x, ModelParameters& y);  // y += a*x
void scale(ModelParameters& p, double a);
double l2_norm(const ModelParameters& p);

}  // namespace fedfraud::nn

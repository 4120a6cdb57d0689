#include "fedfraud/nn/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fedfraud::nn {

namespace {

std::vector<std::size_t> layer_dims(std::size_t input_dim) {
    return {input_dim, kHidden[0], kHidden[1], kHidden[2], kOutputs};
}

}  // namespace

ModelParameters model_skeleton(std::size_t input_dim) {
    if (input_dim < 1) throw std::invalid_argument("model_skeleton: input_dim must be >= 1");
    const auto dims = layer_dims(input_dim);
    ModelParameters p;
    std::size_t offset = 0;
    auto add = [&](std::string name, std::vector<std::size_t> shape) {
        TensorSpec spec{std::move(name), std::move(shape), offset};
        offset += spec.size();
        p.specs.push_back(std::move(spec));
    };
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::string idx = std::to_string(l);
        add("w" + idx, {dims[l + 1], dims[l]});
        add("b" + idx, {dims[l + 1]});
        if (l + 2 < dims.size()) {  // hidden layers carry LayerNorm
            add("ln_gain" + idx, {dims[l + 1]});
            add("ln_offset" + idx, {dims[l + 1]});
        }
    }
    p.data.assign(offset, 0.0);
    return p;
}

namespace {

template <typename View, typename Params>
std::vector<View> make_views(Params& p) {
    std::vector<View> views;
    std::size_t i = 0;
    while (i < p.specs.size()) {
        View v;
        v.w = p.tensor(i);
        v.w_off = p.specs[i].offset;
        v.out = p.specs[i].dims[0];
        v.in = p.specs[i].dims[1];
        v.b = p.tensor(i + 1);
        v.b_off = p.specs[i + 1].offset;
        if (i + 3 < p.specs.size() && p.specs[i + 2].name.starts_with("ln_gain")) {
            v.gain = p.tensor(i + 2);
            v.gain_off = p.specs[i + 2].offset;
            v.offset = p.tensor(i + 3);
            v.offset_off = p.specs[i + 3].offset;
            i += 4;
        } else {
            i += 2;
        }
        views.push_back(v);
    }
    return views;
}

}  // namespace

std::vector<LayerView> layer_views(const ModelParameters& p) {
    return make_views<LayerView>(p);
}

std::vector<LayerViewMut> layer_views(ModelParameters& p) {
    return make_views<LayerViewMut>(p);
}

ModelParameters init_model(std::size_t input_dim, std::uint64_t seed) {
    ModelParameters p = model_skeleton(input_dim);
    Rng rng(derive_seed(seed, "model-init"));
    for (auto& layer : layer_views(p)) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        for (double& w : layer.w) w = rng.uniform(-bound, bound);
        for (double& g : layer.gain) g = 1.0;
        // biases and LayerNorm offsets stay zero
    }
    return p;
}

ModelParameters zeros_like(const ModelParameters& p) {
    ModelParameters z;
    z.specs = p.specs;
    z.data.assign(p.data.size(), 0.0);
    return z;
}

void fill(ModelParameters& p, double value) {
    for (double& v : p.data) v = value;
}

void axpy(double a, const ModelParameters& x, ModelParameters& y) {
    if (!x.same_shape(y)) throw std::invalid_argument("axpy: shape mismatch");
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] += a * x.data[i];
}

void scale(ModelParameters& p, double a) {
    for (double& v : p.data) v *= a;
}

double l2_norm(const ModelParameters& p) {
    double ss = 0.0;
    for (double v : p.data) ss += v * v;
    return std::sqrt(ss);
}

}  // namespace fedfraud::nn

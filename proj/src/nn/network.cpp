#include "fedfraud/nn/network.hpp"

#include <cmath>
#include <stdexcept>

namespace fedfraud::nn {

namespace {

void affine_forward(const LayerView& v, const Matrix& in, Matrix& out) {
    for (std::size_t r = 0; r < in.rows; ++r) {
        const double* x = in.data.data() + r * in.cols;
        double* z = out.data.data() + r * out.cols;
        for (std::size_t j = 0; j < v.out; ++j) {
            double acc = v.b[j];
            const double* w = v.w.data() + j * v.in;
            for (std::size_t k = 0; k < v.in; ++k) acc += w[k] * x[k];
            z[j] = acc;
        }
    }
}

// Row-wise LayerNorm followed by ReLU. Stores xhat and 1/std for backward.
void norm_relu_forward(const LayerView& v, const Matrix& z, Matrix& xhat,
                       std::vector<double>& inv_std, Matrix& act) {
    const std::size_t d = v.out;
    const double dd = static_cast<double>(d);
    for (std::size_t r = 0; r < z.rows; ++r) {
        const double* zr = z.data.data() + r * d;
        double mean = 0.0;
        for (std::size_t j = 0; j < d; ++j) mean += zr[j];
        mean /= dd;
        double var = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double c = zr[j] - mean;
            var += c * c;
        }
        var /= dd;
        const double is = 1.0 / std::sqrt(var + kLayerNormEps);
        inv_std[r] = is;
        double* xh = xhat.data.data() + r * d;
        double* a = act.data.data() + r * d;
        for (std::size_t j = 0; j < d; ++j) {
            xh[j] = (zr[j] - mean) * is;
            const double y = v.gain[j] * xh[j] + v.offset[j];
            a[j] = y > 0.0 ? y : 0.0;
        }
    }
}

}  // namespace

ForwardResult forward(const ModelParameters& params, const Matrix& batch) {
    const auto views = layer_views(params);
    if (batch.cols != views.front().in)
        throw std::invalid_argument("forward: batch feature length does not match input_dim");
    for (double v : batch.data)
        if (std::isnan(v)) throw std::invalid_argument("forward: NaN in input batch");

    ForwardResult res;
    res.cache.layers.resize(views.size());
    Matrix current = batch;
    for (std::size_t l = 0; l < views.size(); ++l) {
        const LayerView& v = views[l];
        LayerCache& c = res.cache.layers[l];
        c.input = std::move(current);
        Matrix z(c.input.rows, v.out);
        affine_forward(v, c.input, z);
        if (!v.gain.empty()) {
            c.normalized = Matrix(z.rows, v.out);
            c.inv_std.assign(z.rows, 0.0);
            c.activated = Matrix(z.rows, v.out);
            norm_relu_forward(v, z, c.normalized, c.inv_std, c.activated);
            current = c.activated;
        } else {
            res.cache.logits = std::move(z);
            res.logits = res.cache.logits;
        }
    }
    return res;
}

Matrix forward_logits(const ModelParameters& params, const Matrix& batch) {
    const auto views = layer_views(params);
    if (batch.cols != views.front().in)
        throw std::invalid_argument("forward_logits: batch feature length does not match input_dim");

    Matrix current = batch;
    Matrix xhat, act;
    std::vector<double> inv_std;
    for (const LayerView& v : views) {
        Matrix z(current.rows, v.out);
        affine_forward(v, current, z);
        if (v.gain.empty()) {
            current = std::move(z);
        } else {
            xhat = Matrix(z.rows, v.out);
            inv_std.assign(z.rows, 0.0);
            act = Matrix(z.rows, v.out);
            norm_relu_forward(v, z, xhat, inv_std, act);
            current = std::move(act);
        }
    }
    return current;
}

Gradients backward(const ModelParameters& params, ForwardCache& cache, const Matrix& dlogits,
                   const BackwardOptions& options) {
    if (cache.consumed) throw std::logic_error("backward: cache already consumed");
    cache.consumed = true;

    const auto views = layer_views(params);
    if (cache.layers.size() != views.size()) throw std::invalid_argument("backward: stale cache");
    const std::size_t batch = cache.layers.front().input.rows;
    if (dlogits.rows != batch || dlogits.cols != kOutputs)
        throw std::invalid_argument("backward: dlogits shape mismatch");

    Gradients out;
    out.grads = zeros_like(params);
    auto grad_views = layer_views(out.grads);
    if (options.want_per_sample)
        out.per_sample.assign(batch, std::vector<double>(params.data.size(), 0.0));

    Matrix dY = dlogits;
    for (std::size_t li = views.size(); li-- > 0;) {
        const LayerView& v = views[li];
        LayerCache& c = cache.layers[li];
        LayerViewMut& g = grad_views[li];
        const std::size_t d = v.out;
        const double dd = static_cast<double>(d);

        Matrix dZ(batch, d);
        if (v.gain.empty()) {
            dZ = std::move(dY);
        } else {
            for (std::size_t r = 0; r < batch; ++r) {
                const double* dy = dY.data.data() + r * d;
                const double* a = c.activated.data.data() + r * d;
                const double* xh = c.normalized.data.data() + r * d;
                double* dz = dZ.data.data() + r * d;

                // ReLU mask, then LayerNorm parameter and input gradients.
                double s1 = 0.0, s2 = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double da = a[j] > 0.0 ? dy[j] : 0.0;
                    const double dxhat = da * v.gain[j];
                    dz[j] = dxhat;  // stash dxhat
                    s1 += dxhat;
                    s2 += dxhat * xh[j];
                    g.gain[j] += da * xh[j];
                    g.offset[j] += da;
                    if (options.want_per_sample) {
                        auto& ps = out.per_sample[r];
                        ps[v.gain_off + j] = da * xh[j];
                        ps[v.offset_off + j] = da;
                    }
                }
                const double is = c.inv_std[r];
                for (std::size_t j = 0; j < d; ++j) {
                    dz[j] = is / dd * (dd * dz[j] - s1 - xh[j] * s2);
                }
            }
        }

        // Affine gradients and input gradient.
        const Matrix& in = c.input;
        for (std::size_t r = 0; r < batch; ++r) {
            const double* dz = dZ.data.data() + r * d;
            const double* x = in.data.data() + r * in.cols;
            for (std::size_t j = 0; j < d; ++j) {
                const double dzj = dz[j];
                g.b[j] += dzj;
                double* gw = g.w.data() + j * v.in;
                for (std::size_t k = 0; k < v.in; ++k) gw[k] += dzj * x[k];
                if (options.want_per_sample) {
                    auto& ps = out.per_sample[r];
                    ps[v.b_off + j] = dzj;
                    double* pw = ps.data() + v.w_off + j * v.in;
                    for (std::size_t k = 0; k < v.in; ++k) pw[k] = dzj * x[k];
                }
            }
        }

        const bool need_dinput = li > 0 || options.want_input_grads;
        if (need_dinput) {
            Matrix dIn(batch, v.in, 0.0);
            for (std::size_t r = 0; r < batch; ++r) {
                const double* dz = dZ.data.data() + r * d;
                double* di = dIn.data.data() + r * v.in;
                for (std::size_t j = 0; j < d; ++j) {
                    const double dzj = dz[j];
                    const double* w = v.w.data() + j * v.in;
                    for (std::size_t k = 0; k < v.in; ++k) di[k] += dzj * w[k];
                }
            }
            if (li == 0) {
                out.input_grads = std::move(dIn);
            } else {
                dY = std::move(dIn);
            }
        }
    }
    return out;
}

}  // namespace fedfraud::nn

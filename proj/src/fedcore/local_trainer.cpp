#include "fedfraud/fedcore/local_trainer.hpp"

#include <cmath>

#include "fedfraud/dp/dpsgd.hpp"
#include "fedfraud/nn/network.hpp"

namespace fedfraud::fedcore {

namespace {

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), x.cols);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto src = x.row(idx[r]);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& idx) {
    std::vector<int> out(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) out[r] = labels[idx[r]];
    return out;
}

// mu * (w - w_global), added to the loss gradient.
void add_prox_term(nn::ModelParameters& grads, const nn::ModelParameters& params,
                   const nn::ModelParameters& global_params, double mu) {
    for (std::size_t i = 0; i < grads.data.size(); ++i)
        grads.data[i] += mu * (params.data[i] - global_params.data[i]);
}

nn::FocalParams resolve_focal(const TrainConfig& cfg, const std::vector<int>& labels) {
    if (cfg.focal_alpha) {
        nn::FocalParams p;
        p.gamma = cfg.focal_gamma;
        p.alpha0 = cfg.focal_alpha->first;
        p.alpha1 = cfg.focal_alpha->second;
        return p;
    }
    return nn::inverse_class_frequency(labels, cfg.focal_gamma);
}

}  // namespace

DpRuntime make_dp_runtime(const DpConfig& dp, std::size_t dataset_size, const TrainConfig& train,
                          std::size_t total_rounds) {
    if (dataset_size == 0) throw std::invalid_argument("make_dp_runtime: empty dataset");
    const double q = std::min(
        1.0, static_cast<double>(train.batch_size) / static_cast<double>(dataset_size));
    const std::size_t steps_per_epoch =
        (dataset_size + train.batch_size - 1) / train.batch_size;

    dp::PrivacySpec spec;
    spec.target_epsilon = dp.target_epsilon;
    spec.target_delta = dp.target_delta;
    spec.max_grad_norm = dp.max_grad_norm;
    spec.sampling_rate = q;
    spec.total_steps = total_rounds * train.epochs_per_round * steps_per_epoch;
    spec.order_grid = dp.order_grid.empty() ? dp::default_order_grid() : dp.order_grid;

    const double sigma = dp::calibrate_noise(spec);
    return DpRuntime{sigma, dp.max_grad_norm, q,
                     dp::PrivacyLedger(q, sigma, dp.target_delta, spec.order_grid)};
}

ClientUpdate train_on_set(const nn::ModelParameters& global_params,
                          const features::FeaturizedSet& train_set, const std::string& id,
                          const TrainConfig& train, double prox_mu, DpRuntime* dp,
                          std::uint64_t seed, nn::OptimizerState* opt_state, std::size_t round) {
    train.validate();
    const std::size_t n = train_set.x.rows;
    if (n == 0) throw std::invalid_argument("train_on_set: empty train partition");

    ClientUpdate update;
    update.site_id = id;
    update.n_samples = n;

    nn::ModelParameters params = global_params;
    const nn::FocalParams focal = resolve_focal(train, train_set.labels);
    const double lr =
        train.learning_rate / (1.0 + train.round_lr_decay * static_cast<double>(round));
    const nn::OptimizerConfig opt_cfg{train.optimizer, lr, 0.9, 0.999, 1e-8};
    nn::OptimizerState scratch_state;
    nn::OptimizerState& opt = opt_state ? *opt_state : scratch_state;
    Rng rng(seed);

    double loss_sum = 0.0;
    std::size_t loss_batches = 0;

    if (dp) {
        const std::size_t steps_per_epoch = (n + train.batch_size - 1) / train.batch_size;
        for (std::size_t epoch = 0; epoch < train.epochs_per_round; ++epoch) {
            for (std::size_t step = 0; step < steps_per_epoch; ++step) {
                const auto batch_idx = dp::poisson_sample(n, dp->sampling_rate, rng);
                dp->ledger.record_steps(1);  // cost accrues even for empty draws
                if (batch_idx.empty()) continue;

                const Matrix bx = gather_rows(train_set.x, batch_idx);
                const auto by = gather_labels(train_set.labels, batch_idx);
                auto fwd = nn::forward(params, bx);
                auto loss = nn::focal_loss(fwd.logits, by, focal, nn::Reduction::PerSample);
                loss_sum += loss.loss;
                ++loss_batches;

                nn::BackwardOptions opts;
                opts.want_per_sample = true;
                auto grads = nn::backward(params, fwd.cache, loss.dlogits, opts);

                dp::clip_per_sample(grads.per_sample, dp->max_grad_norm);
                auto noisy_mean = dp::privatize_batch(grads.per_sample, dp->max_grad_norm,
                                                      dp->sigma, batch_idx.size(), rng);
                nn::ModelParameters g = nn::zeros_like(params);
                g.data = std::move(noisy_mean);
                if (prox_mu > 0.0) add_prox_term(g, params, global_params, prox_mu);
                nn::optimizer_step(params, g, opt, opt_cfg);
            }
        }
        update.privacy = dp->ledger.snapshot();
    } else {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t epoch = 0; epoch < train.epochs_per_round; ++epoch) {
            rng.shuffle(order);
            for (std::size_t start = 0; start < n; start += train.batch_size) {
                const std::size_t end = std::min(n, start + train.batch_size);
                const std::vector<std::size_t> batch_idx(order.begin() + start,
                                                         order.begin() + end);
                const Matrix bx = gather_rows(train_set.x, batch_idx);
                const auto by = gather_labels(train_set.labels, batch_idx);
                auto fwd = nn::forward(params, bx);
                auto loss = nn::focal_loss(fwd.logits, by, focal, nn::Reduction::Mean);
                loss_sum += loss.loss;
                ++loss_batches;

                auto grads = nn::backward(params, fwd.cache, loss.dlogits);
                if (prox_mu > 0.0) add_prox_term(grads.grads, params, global_params, prox_mu);
                nn::optimizer_step(params, grads.grads, opt, opt_cfg);
            }
        }
    }

    update.local_metrics["train_loss"] =
        loss_batches == 0 ? 0.0 : loss_sum / static_cast<double>(loss_batches);
    update.params_after = std::move(params);
    return update;
}

ClientUpdate local_train(const nn::ModelParameters& global_params, const SiteData& site,
                         const TrainConfig& train, double prox_mu, DpRuntime* dp,
                         std::uint64_t seed, nn::OptimizerState* opt_state, std::size_t round) {
    return train_on_set(global_params, site.train, site.site_id, train, prox_mu, dp, seed,
                        opt_state, round);
}

eval::MetricReport evaluate_model(const nn::ModelParameters& params,
                                  const features::FeaturizedSet& set) {
    const Matrix logits = nn::forward_logits(params, set.x);
    std::vector<int> predicted(logits.rows);
    for (std::size_t r = 0; r < logits.rows; ++r)
        predicted[r] = logits.at(r, 1) > logits.at(r, 0) ? 1 : 0;
    const auto scores = nn::fraud_scores(logits);
    return eval::evaluate_predictions(predicted, scores, set.labels, set.type_tags);
}

}  // namespace fedfraud::fedcore

#pragma once

#include <optional>

#include "fedfraud/dp/accountant.hpp"
#include "fedfraud/fedcore/site_data.hpp"
#include "fedfraud/fedcore/types.hpp"
#include "fedfraud/nn/loss.hpp"

namespace fedfraud::fedcore {

// Per-client DP machinery: calibrated noise multiplier plus the ledger that
// persists across federated rounds.
struct DpRuntime {
    double sigma = 0.0;
    double max_grad_norm = 1.0;
    double sampling_rate = 0.0;
    dp::PrivacyLedger ledger;
};

// Calibrates sigma for the client's sampling rate and the full run's step
// count, then opens a fresh ledger.
DpRuntime make_dp_runtime(const DpConfig& dp, std::size_t dataset_size,
                          const TrainConfig& train, std::size_t total_rounds);

// epochs_per_round passes over the train partition. prox_mu > 0 adds
// mu*(w - w_global) to the gradient; with DP enabled batches are Poisson
// sampled and gradients are clipped per sample and noised.
ClientUpdate local_train(const nn::ModelParameters& global_params, const SiteData& site,
                         const TrainConfig& train, double prox_mu, DpRuntime* dp,
                         std::uint64_t seed, nn::OptimizerState* opt_state = nullptr,
                         std::size_t round = 0);

// Same loop over an arbitrary featurized set (used by the central baseline).
// The optimizer state belongs to the client and persists across federated
// rounds when the caller passes one in.
ClientUpdate train_on_set(const nn::ModelParameters& global_params,
                          const features::FeaturizedSet& train_set, const std::string& id,
                          const TrainConfig& train, double prox_mu, DpRuntime* dp,
                          std::uint64_t seed, nn::OptimizerState* opt_state = nullptr,
                          std::size_t round = 0);

// argmax predictions + fraud scores -> full metric report.
eval::MetricReport evaluate_model(const nn::ModelParameters& params,
                                  const features::FeaturizedSet& set);

}  // namespace fedfraud::fedcore

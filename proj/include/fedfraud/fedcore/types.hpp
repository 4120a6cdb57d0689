#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedfraud/datagen/types.hpp"
#include "fedfraud/dp/accountant.hpp"
#include "fedfraud/eval/metrics.hpp"
#include "fedfraud/nn/model.hpp"
#include "fedfraud/nn/optimizer.hpp"

namespace fedfraud::fedcore {

enum class Algorithm { FedAvg, FedProx, FedOpt, Local, Central };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct TrainConfig {
    double learning_rate = 5e-4;
    std::size_t epochs_per_round = 1;
    std::size_t batch_size = 64;
    double focal_gamma = 2.0;
    // Unset: inverse-class-frequency weights fit on each client's train split.
    std::optional<std::pair<double, double>> focal_alpha;
    nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
    double prox_mu = 0.0;  // 0 disables the FedProx term
    // Effective lr at round r is learning_rate / (1 + round_lr_decay * r);
    // damps late-round boundary wobble identically across regimes.
    double round_lr_decay = 0.25;

    void validate() const;
};

struct DpConfig {
    double target_epsilon = 10.0;
    double target_delta = 1e-5;
    double max_grad_norm = 1.0;
    std::vector<int> order_grid;  // empty -> default grid
};

struct FederationConfig {
    Algorithm algorithm = Algorithm::FedAvg;
    std::size_t rounds = 20;
    double server_lr = 1.0;        // FedOpt
    double server_momentum = 0.9;  // FedOpt
    double prox_mu = 0.01;         // FedProx
    std::vector<datagen::SiteConfig> sites;
    TrainConfig train;
    std::optional<DpConfig> dp;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ClientUpdate {
    std::string site_id;
    nn::ModelParameters params_after;
    std::size_t n_samples = 0;
    std::map<std::string, double> local_metrics;
    std::optional<dp::LedgerSnapshot> privacy;
};

struct RoundRecord {
    std::size_t round_index = 0;
    std::string global_params_hash;
    std::map<std::string, eval::MetricReport> per_site;  // test-partition metrics
    double mean_f1 = 0.0;  // mean per-type F1 across sites and types
    std::map<std::string, double> epsilon_by_site;
    double duration_s = 0.0;
};

// Headline aggregation: mean of per-type F1 over every (site, type) pair.
double headline_mean_f1(const std::map<std::string, eval::MetricReport>& per_site);

}  // namespace fedfraud::fedcore

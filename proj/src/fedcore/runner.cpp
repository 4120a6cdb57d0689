#include "fedfraud/fedcore/runner.hpp"

#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include "fedfraud/nn/serialize.hpp"

namespace fedfraud::fedcore {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double effective_prox_mu(const FederationConfig& config) {
    return config.algorithm == Algorithm::FedProx ? config.prox_mu : 0.0;
}

}  // namespace

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::FedAvg: return "fedavg";
        case Algorithm::FedProx: return "fedprox";
        case Algorithm::FedOpt: return "fedopt";
        case Algorithm::Local: return "local";
        case Algorithm::Central: return "central";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "fedavg") return Algorithm::FedAvg;
    if (s == "fedprox") return Algorithm::FedProx;
    if (s == "fedopt") return Algorithm::FedOpt;
    if (s == "local") return Algorithm::Local;
    if (s == "central") return Algorithm::Central;
    throw std::invalid_argument("unknown algorithm: " + s);
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (epochs_per_round < 1)
        throw std::invalid_argument("TrainConfig: epochs_per_round must be >= 1");
    if (!(focal_gamma >= 0.0)) throw std::invalid_argument("TrainConfig: focal_gamma must be >= 0");
    if (!(prox_mu >= 0.0)) throw std::invalid_argument("TrainConfig: prox_mu must be >= 0");
}

void FederationConfig::validate() const {
    train.validate();
    if (sites.empty()) throw std::invalid_argument("FederationConfig: no sites configured");
    for (const auto& s : sites) s.validate();
    std::set<std::string> ids;
    for (const auto& s : sites)
        if (!ids.insert(s.site_id).second)
            throw std::invalid_argument("FederationConfig: duplicate site_id " + s.site_id);
    if (algorithm == Algorithm::FedOpt && !(server_lr > 0.0))
        throw std::invalid_argument("FederationConfig: server_lr must be > 0 for fedopt");
    if (algorithm == Algorithm::FedProx && !(prox_mu >= 0.0))
        throw std::invalid_argument("FederationConfig: prox_mu must be >= 0");
    if (dp) {
        if (!(dp->target_epsilon > 0.0) || !(dp->target_delta > 0.0 && dp->target_delta < 1.0) ||
            !(dp->max_grad_norm > 0.0))
            throw std::invalid_argument("FederationConfig: invalid dp settings");
    }
}

double headline_mean_f1(const std::map<std::string, eval::MetricReport>& per_site) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [site, report] : per_site) {
        for (const auto& [type, f1] : report.per_type) {
            sum += f1;
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::uint64_t round_site_seed(std::uint64_t master, std::size_t round,
                              const std::string& site_id) {
    return derive_seed(derive_seed(master, static_cast<std::uint64_t>(round)), site_id);
}

InProcessChannel::InProcessChannel(const FederationConfig& config, std::vector<SiteData> sites)
    : config_(config), sites_(std::move(sites)) {
    for (const auto& s : sites_) site_ids_.push_back(s.site_id);
    dp_.resize(sites_.size());
    opt_states_.resize(sites_.size());
    if (config_.dp) {
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            dp_[i] = std::make_unique<DpRuntime>(make_dp_runtime(
                *config_.dp, sites_[i].train.x.rows, config_.train, config_.rounds));
        }
    }
}

std::vector<ClientUpdate> InProcessChannel::train_round(std::size_t round,
                                                        const nn::ModelParameters& global) {
    std::vector<ClientUpdate> updates(sites_.size());
    std::vector<std::thread> workers;
    workers.reserve(sites_.size());
    const double mu = effective_prox_mu(config_);
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        workers.emplace_back([&, i] {
            updates[i] = local_train(global, sites_[i], config_.train, mu, dp_[i].get(),
                                     round_site_seed(config_.seed, round, sites_[i].site_id),
                                     &opt_states_[i], round);
        });
    }
    for (auto& w : workers) w.join();
    return updates;
}

std::map<std::string, eval::MetricReport> InProcessChannel::eval_round(
    std::size_t, const nn::ModelParameters& global) {
    std::map<std::string, eval::MetricReport> out;
    std::vector<eval::MetricReport> reports(sites_.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < sites_.size(); ++i)
        workers.emplace_back([&, i] { reports[i] = evaluate_model(global, sites_[i].test); });
    for (auto& w : workers) w.join();
    for (std::size_t i = 0; i < sites_.size(); ++i) out[sites_[i].site_id] = reports[i];
    return out;
}

FederationResult run_federation(const FederationConfig& config, ClientChannel& channel) {
    config.validate();
    if (config.algorithm != Algorithm::FedAvg && config.algorithm != Algorithm::FedProx &&
        config.algorithm != Algorithm::FedOpt)
        throw std::invalid_argument("run_federation: algorithm is not a federated one");

    FederationResult result;
    nn::ModelParameters global =
        nn::init_model(features::feature_count(), derive_seed(config.seed, "global-init"));
    ServerOptState server_state;

    for (std::size_t round = 0; round < config.rounds; ++round) {
        const auto start = Clock::now();
        auto updates = channel.train_round(round, global);

        const nn::ModelParameters aggregated = aggregate_fedavg(updates);
        if (config.algorithm == Algorithm::FedOpt) {
            global = server_opt_step(global, aggregated, config.server_lr,
                                     config.server_momentum, server_state);
        } else {
            global = aggregated;
        }

        RoundRecord record;
        record.round_index = round;
        record.global_params_hash = nn::model_hash(global);
        record.per_site = channel.eval_round(round, global);
        record.mean_f1 = headline_mean_f1(record.per_site);
        for (const auto& u : updates)
            if (u.privacy) record.epsilon_by_site[u.site_id] = u.privacy->epsilon;
        record.duration_s = seconds_since(start);
        result.history.push_back(std::move(record));
    }
    channel.finish();
    result.final_model = std::move(global);
    return result;
}

FederationResult run_central(const FederationConfig& config, const CentralData& data) {
    config.validate();
    FederationResult result;
    nn::ModelParameters global =
        nn::init_model(features::feature_count(), derive_seed(config.seed, "global-init"));

    std::unique_ptr<DpRuntime> dp;
    if (config.dp)
        dp = std::make_unique<DpRuntime>(
            make_dp_runtime(*config.dp, data.train.x.rows, config.train, config.rounds));

    nn::OptimizerState opt_state;
    for (std::size_t round = 0; round < config.rounds; ++round) {
        const auto start = Clock::now();
        auto update = train_on_set(global, data.train, "central", config.train, 0.0, dp.get(),
                                   round_site_seed(config.seed, round, "central"), &opt_state,
                                   round);
        global = std::move(update.params_after);

        RoundRecord record;
        record.round_index = round;
        record.global_params_hash = nn::model_hash(global);
        for (std::size_t i = 0; i < data.tests.size(); ++i)
            record.per_site[data.site_ids[i]] = evaluate_model(global, data.tests[i]);
        record.mean_f1 = headline_mean_f1(record.per_site);
        if (update.privacy) record.epsilon_by_site["central"] = update.privacy->epsilon;
        record.duration_s = seconds_since(start);
        result.history.push_back(std::move(record));
    }
    result.final_model = std::move(global);
    return result;
}

LocalRunResult run_local(const FederationConfig& config, const std::vector<SiteData>& sites) {
    config.validate();
    LocalRunResult result;
    std::vector<std::thread> workers;
    std::mutex mu;
    for (const SiteData& site : sites) {
        workers.emplace_back([&] {
            nn::ModelParameters model = nn::init_model(features::feature_count(),
                                                       derive_seed(config.seed, "global-init"));
            std::unique_ptr<DpRuntime> dp;
            if (config.dp)
                dp = std::make_unique<DpRuntime>(
                    make_dp_runtime(*config.dp, site.train.x.rows, config.train, config.rounds));

            std::vector<RoundRecord> history;
            nn::OptimizerState opt_state;
            for (std::size_t round = 0; round < config.rounds; ++round) {
                const auto start = Clock::now();
                auto update = local_train(model, site, config.train, 0.0, dp.get(),
                                          round_site_seed(config.seed, round, site.site_id),
                                          &opt_state, round);
                model = std::move(update.params_after);

                RoundRecord record;
                record.round_index = round;
                record.global_params_hash = nn::model_hash(model);
                record.per_site[site.site_id] = evaluate_model(model, site.test);
                record.mean_f1 = headline_mean_f1(record.per_site);
                if (update.privacy)
                    record.epsilon_by_site[site.site_id] = update.privacy->epsilon;
                record.duration_s = seconds_since(start);
                history.push_back(std::move(record));
            }
            std::lock_guard<std::mutex> lock(mu);
            result.history_by_site[site.site_id] = std::move(history);
            result.final_models[site.site_id] = std::move(model);
        });
    }
    for (auto& w : workers) w.join();
    return result;
}

}  // namespace fedfraud::fedcore

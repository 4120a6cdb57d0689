#pragma once

#include <map>
#include <memory>
#include <vector>

#include "fedfraud/fedcore/aggregate.hpp"
#include "fedfraud/fedcore/local_trainer.hpp"
#include "fedfraud/fedcore/types.hpp"

namespace fedfraud::fedcore {

// Transport seam of the scatter-gather loop. The in-process channel calls
// local_train directly; the TCP server drives remote clients through the
// same interface, which is what makes the two modes bit-comparable.
class ClientChannel {
public:
    virtual ~ClientChannel() = default;

    // Ordered site ids; aggregation follows this order.
    virtual const std::vector<std::string>& site_ids() const = 0;

    // Broadcast `global`, run one local training round everywhere, gather.
    virtual std::vector<ClientUpdate> train_round(std::size_t round,
                                                  const nn::ModelParameters& global) = 0;

    // Evaluate `global` on every site's test partition.
    virtual std::map<std::string, eval::MetricReport> eval_round(
        std::size_t round, const nn::ModelParameters& global) = 0;

    virtual void finish() {}
};

// Executes clients in parallel threads over in-memory site data.
class InProcessChannel : public ClientChannel {
public:
    InProcessChannel(const FederationConfig& config, std::vector<SiteData> sites);

    const std::vector<std::string>& site_ids() const override { return site_ids_; }
    std::vector<ClientUpdate> train_round(std::size_t round,
                                          const nn::ModelParameters& global) override;
    std::map<std::string, eval::MetricReport> eval_round(
        std::size_t round, const nn::ModelParameters& global) override;

    const std::vector<SiteData>& sites() const { return sites_; }

private:
    FederationConfig config_;
    std::vector<SiteData> sites_;
    std::vector<std::string> site_ids_;
    std::vector<std::unique_ptr<DpRuntime>> dp_;  // one ledger per site, persists across rounds
    std::vector<nn::OptimizerState> opt_states_;  // client optimizers persist across rounds
};

// Per-round local training seed, shared by in-process and TCP modes.
std::uint64_t round_site_seed(std::uint64_t master, std::size_t round, const std::string& site_id);

struct FederationResult {
    std::vector<RoundRecord> history;
    nn::ModelParameters final_model;
};

// Scatter-gather rounds: broadcast, local training, aggregation (plus a
// server optimizer step for FedOpt), then evaluation of the fresh global
// model on every site's test partition.
FederationResult run_federation(const FederationConfig& config, ClientChannel& channel);

// Pooled-data baseline under the identical protocol; one round == one epoch.
FederationResult run_central(const FederationConfig& config, const CentralData& data);

struct LocalRunResult {
    std::map<std::string, std::vector<RoundRecord>> history_by_site;
    std::map<std::string, nn::ModelParameters> final_models;
};

// Each site trains alone for the same epoch budget; no aggregation.
LocalRunResult run_local(const FederationConfig& config, const std::vector<SiteData>& sites);

}  // namespace fedfraud::fedcore

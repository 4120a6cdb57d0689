#pragma once

#include <span>
#include <vector>

#include "fedfraud/fedcore/types.hpp"

namespace fedfraud::fedcore {

// Sample-count-weighted elementwise mean of client parameters.
nn::ModelParameters aggregate_fedavg(std::span<const ClientUpdate> updates);

struct ServerOptState {
    std::vector<double> velocity;
};

// FedOpt server step on the pseudo-gradient delta = global - aggregated:
//   v <- momentum * v + delta;  theta <- theta - lr * v
// lr = 1 with zero momentum reproduces the FedAvg aggregate exactly.
nn::ModelParameters server_opt_step(const nn::ModelParameters& global,
                                    const nn::ModelParameters& aggregated, double server_lr,
                                    double momentum, ServerOptState& state);

}  // namespace fedfraud::fedcore

#include "fedfraud/fedcore/aggregate.hpp"

#include <stdexcept>

namespace fedfraud::fedcore {

nn::ModelParameters aggregate_fedavg(std::span<const ClientUpdate> updates) {
    if (updates.empty()) throw std::invalid_argument("aggregate_fedavg: no updates");
    double total = 0.0;
    for (const auto& u : updates) {
        if (u.n_samples == 0) throw std::invalid_argument("aggregate_fedavg: zero-sample update");
        if (!u.params_after.same_shape(updates.front().params_after))
            throw std::invalid_argument("aggregate_fedavg: shape mismatch across updates");
        total += static_cast<double>(u.n_samples);
    }
    nn::ModelParameters agg = nn::zeros_like(updates.front().params_after);
    for (const auto& u : updates)
        nn::axpy(static_cast<double>(u.n_samples) / total, u.params_after, agg);
    return agg;
}

nn::ModelParameters server_opt_step(const nn::ModelParameters& global,
                                    const nn::ModelParameters& aggregated, double server_lr,
                                    double momentum, ServerOptState& state) {
    if (!global.same_shape(aggregated))
        throw std::invalid_argument("server_opt_step: shape mismatch");
    // Exact algebraic identity; keeps FedOpt(lr=1, no momentum) bit-equal to
    // plain aggregation. Velocity never feeds forward when momentum is 0.
    if (server_lr == 1.0 && momentum == 0.0) return aggregated;

    if (state.velocity.size() != global.data.size()) state.velocity.assign(global.data.size(), 0.0);
    nn::ModelParameters next = global;
    for (std::size_t i = 0; i < next.data.size(); ++i) {
        const double delta = global.data[i] - aggregated.data[i];
        state.velocity[i] = momentum * state.velocity[i] + delta;
        next.data[i] -= server_lr * state.velocity[i];
    }
    return next;
}

}  // namespace fedfraud::fedcore

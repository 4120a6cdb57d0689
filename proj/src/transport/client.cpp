#include "fedfraud/transport/client.hpp"

#include <chrono>
#include <thread>

#include "fedfraud/eval/report_io.hpp"

namespace fedfraud::transport {

namespace {

TcpConn connect_with_retry(const ClientOptions& options, int attempts) {
    for (int i = 0; i < attempts; ++i) {
        try {
            return TcpConn::connect(options.host, options.port);
        } catch (const ProtocolError&) {
            if (i + 1 == attempts) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(200));
        }
    }
    throw ProtocolError("connect: no attempts configured");
}

}  // namespace

ClientOutcome run_client(const fedcore::FederationConfig& config, fedcore::SiteData site,
                         const ClientOptions& options) {
    const double prox_mu =
        config.algorithm == fedcore::Algorithm::FedProx ? config.prox_mu : 0.0;

    std::unique_ptr<fedcore::DpRuntime> dp;
    if (config.dp)
        dp = std::make_unique<fedcore::DpRuntime>(fedcore::make_dp_runtime(
            *config.dp, site.train.x.rows, config.train, config.rounds));
    nn::OptimizerState opt_state;

    int reconnects_left = options.reconnect_attempts;
    while (true) {
        try {
            TcpConn conn = connect_with_retry(options, options.max_connect_attempts);
            conn.send_frame(encode_message(HelloMsg{site.site_id}), options.tap);

            while (true) {
                const Frame frame = conn.recv_frame(options.tap);
                const Message msg = decode_message(frame);

                if (std::holds_alternative<DoneMsg>(msg)) return ClientOutcome::Completed;
                if (const auto* err = std::get_if<ErrorMsg>(&msg)) {
                    (void)err;
                    return ClientOutcome::ServerError;
                }
                const auto* task = std::get_if<TaskMsg>(&msg);
                if (!task) throw ProtocolError("client: unexpected message type");

                if (task->phase == TaskPhase::Train) {
                    auto update = fedcore::local_train(
                        task->model, site, config.train, prox_mu, dp.get(),
                        fedcore::round_site_seed(config.seed, task->round, site.site_id),
                        &opt_state, task->round);

                    UpdateMsg out;
                    out.round = task->round;
                    out.site_id = site.site_id;
                    out.n_samples = update.n_samples;
                    out.model = std::move(update.params_after);
                    nlohmann::json local = nlohmann::json::object();
                    for (const auto& [k, v] : update.local_metrics) local[k] = v;
                    out.metrics["local"] = local;
                    if (update.privacy) out.metrics["privacy"] = eval::to_json(*update.privacy);
                    conn.send_frame(encode_message(out), options.tap);
                } else {
                    const auto report = fedcore::evaluate_model(task->model, site.test);
                    MetricsMsg out;
                    out.round = task->round;
                    out.site_id = site.site_id;
                    out.metrics["report"] = eval::to_json(report);
                    conn.send_frame(encode_message(out), options.tap);
                }
            }
        } catch (const ConnectionClosed&) {
            if (reconnects_left-- <= 0) return ClientOutcome::ConnectionLost;
        } catch (const ProtocolError&) {
            if (reconnects_left-- <= 0) return ClientOutcome::ConnectionLost;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
}

}  // namespace fedfraud::transport

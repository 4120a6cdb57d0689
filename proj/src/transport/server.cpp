#include "fedfraud/transport/server.hpp"

#include <map>

#include "fedfraud/eval/report_io.hpp"

namespace fedfraud::transport {

namespace {

class TcpChannel : public fedcore::ClientChannel {
public:
    TcpChannel(std::vector<std::string> site_ids, std::map<std::string, TcpConn> conns,
               FrameTap tap)
        : site_ids_(std::move(site_ids)), conns_(std::move(conns)), tap_(std::move(tap)) {}

    const std::vector<std::string>& site_ids() const override { return site_ids_; }

    std::vector<fedcore::ClientUpdate> train_round(std::size_t round,
                                                   const nn::ModelParameters& global) override {
        broadcast_task(round, TaskPhase::Train, global);

        std::vector<fedcore::ClientUpdate> updates;
        for (const auto& site : site_ids_) {
            const Frame frame = conns_.at(site).recv_frame(tap_);
            const Message msg = decode_message(frame);
            const auto* up = std::get_if<UpdateMsg>(&msg);
            if (!up) throw ProtocolError("server: expected UPDATE from " + site);
            if (up->round != round)
                throw ProtocolError("server: UPDATE for stale round from " + site);
            if (up->site_id != site)
                throw ProtocolError("server: UPDATE with mismatched site id from " + site);

            fedcore::ClientUpdate update;
            update.site_id = up->site_id;
            update.params_after = up->model;
            update.n_samples = up->n_samples;
            if (up->metrics.contains("local")) {
                for (const auto& [k, v] : up->metrics.at("local").items())
                    update.local_metrics[k] = v.get<double>();
            }
            if (up->metrics.contains("privacy"))
                update.privacy = eval::ledger_snapshot_from_json(up->metrics.at("privacy"));
            updates.push_back(std::move(update));
        }
        return updates;
    }

    std::map<std::string, eval::MetricReport> eval_round(
        std::size_t round, const nn::ModelParameters& global) override {
        broadcast_task(round, TaskPhase::Eval, global);

        std::map<std::string, eval::MetricReport> reports;
        for (const auto& site : site_ids_) {
            const Frame frame = conns_.at(site).recv_frame(tap_);
            const Message msg = decode_message(frame);
            const auto* m = std::get_if<MetricsMsg>(&msg);
            if (!m) throw ProtocolError("server: expected METRICS from " + site);
            if (m->round != round)
                throw ProtocolError("server: METRICS for stale round from " + site);
            reports[site] = eval::metric_report_from_json(m->metrics.at("report"));
        }
        return reports;
    }

    void finish() override {
        for (const auto& site : site_ids_) conns_.at(site).send_frame(encode_message(DoneMsg{}), tap_);
    }

    void abort(const std::string& reason) {
        for (auto& [site, conn] : conns_) {
            try {
                conn.send_frame(encode_message(ErrorMsg{reason}), tap_);
            } catch (const ProtocolError&) {
                // already gone
            }
        }
    }

private:
    void broadcast_task(std::size_t round, TaskPhase phase, const nn::ModelParameters& global) {
        for (const auto& site : site_ids_) {
            TaskMsg task;
            task.round = round;
            task.phase = phase;
            task.model = global;
            conns_.at(site).send_frame(encode_message(task), tap_);
        }
    }

    std::vector<std::string> site_ids_;
    std::map<std::string, TcpConn> conns_;
    FrameTap tap_;
};

}  // namespace

fedcore::FederationResult serve(const fedcore::FederationConfig& config, TcpListener& listener,
                                const FrameTap& tap) {
    config.validate();
    std::vector<std::string> expected;
    for (const auto& s : config.sites) expected.push_back(s.site_id);

    std::map<std::string, TcpConn> conns;
    while (conns.size() < expected.size()) {
        TcpConn conn = listener.accept();
        Frame frame = conn.recv_frame(tap);
        Message msg;
        try {
            msg = decode_message(frame);
        } catch (const ProtocolError& e) {
            conn.send_frame(encode_message(ErrorMsg{e.what()}), tap);
            continue;
        }
        const auto* hello = std::get_if<HelloMsg>(&msg);
        if (!hello) {
            conn.send_frame(encode_message(ErrorMsg{"expected HELLO"}), tap);
            continue;
        }
        if (std::find(expected.begin(), expected.end(), hello->site_id) == expected.end()) {
            conn.send_frame(encode_message(ErrorMsg{"unknown site_id " + hello->site_id}), tap);
            continue;
        }
        if (conns.count(hello->site_id)) {
            conn.send_frame(encode_message(ErrorMsg{"duplicate site_id " + hello->site_id}), tap);
            continue;
        }
        conns.emplace(hello->site_id, std::move(conn));
    }

    TcpChannel channel(expected, std::move(conns), tap);
    try {
        return fedcore::run_federation(config, channel);
    } catch (const std::exception& e) {
        channel.abort(e.what());
        throw;
    }
}

}  // namespace fedfraud::transport

#pragma once

#include <cstdint>
#include <string>

#include "fedfraud/fedcore/runner.hpp"
#include "fedfraud/transport/socket.hpp"

namespace fedfraud::transport {

enum class ClientOutcome { Completed, ConnectionLost, ServerError };

struct ClientOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
    int max_connect_attempts = 10;
    int reconnect_attempts = 3;
    FrameTap tap;
};

// One federated participant: HELLO, then answer TASK(train) with UPDATE and
// TASK(eval) with METRICS until DONE. Only parameters, counts, and metric
// values ever cross the wire; the site's records stay local.
ClientOutcome run_client(const fedcore::FederationConfig& config, fedcore::SiteData site,
                         const ClientOptions& options);

}  // namespace fedfraud::transport

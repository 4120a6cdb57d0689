#pragma once

#include "fedfraud/fedcore/runner.hpp"
#include "fedfraud/transport/socket.hpp"

namespace fedfraud::transport {

// Accepts one HELLO per configured site (rejecting duplicates and unknown
// ids with ERROR frames), then drives the scatter-gather rounds over TCP
// through the same runner as the in-process mode. Sends DONE at the end.
// A client disconnect mid-round aborts the run with a ProtocolError.
fedcore::FederationResult serve(const fedcore::FederationConfig& config, TcpListener& listener,
                                const FrameTap& tap = nullptr);

}  // namespace fedfraud::transport

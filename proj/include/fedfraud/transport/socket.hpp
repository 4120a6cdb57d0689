#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fedfraud/transport/frame.hpp"

namespace fedfraud::transport {

struct ConnectionClosed : ProtocolError {
    ConnectionClosed() : ProtocolError("connection closed by peer") {}
};

// Observes every frame that crosses one endpoint; used by tests to assert
// data-sovereignty properties of the wire.
using FrameTap = std::function<void(const Frame&, bool outbound)>;

class TcpConn {
public:
    TcpConn() = default;
    explicit TcpConn(int fd) : fd_(fd) {}
    ~TcpConn();

    TcpConn(TcpConn&& other) noexcept;
    TcpConn& operator=(TcpConn&& other) noexcept;
    TcpConn(const TcpConn&) = delete;
    TcpConn& operator=(const TcpConn&) = delete;

    static TcpConn connect(const std::string& host, std::uint16_t port);

    bool valid() const { return fd_ >= 0; }
    void close();

    void send_frame(const Frame& frame, const FrameTap& tap = nullptr);
    Frame recv_frame(const FrameTap& tap = nullptr);

private:
    void send_all(const std::uint8_t* data, std::size_t len);
    // Appends up to `len` bytes; throws ConnectionClosed on EOF.
    void recv_some(std::vector<std::uint8_t>& buf, std::size_t len);

    int fd_ = -1;
    std::vector<std::uint8_t> inbox_;
};

class TcpListener {
public:
    // Binds to 127.0.0.1:port; port 0 picks an ephemeral one.
    explicit TcpListener(std::uint16_t port);
    ~TcpListener();

    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t bound_port() const { return port_; }
    TcpConn accept();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace fedfraud::transport

#include "fedfraud/transport/socket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace fedfraud::transport {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw ProtocolError(what + ": " + std::strerror(errno));
}

}  // namespace

TcpConn::~TcpConn() { close(); }

TcpConn::TcpConn(TcpConn&& other) noexcept : fd_(other.fd_), inbox_(std::move(other.inbox_)) {
    other.fd_ = -1;
}

TcpConn& TcpConn::operator=(TcpConn&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        inbox_ = std::move(other.inbox_);
        other.fd_ = -1;
    }
    return *this;
}

void TcpConn::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpConn TcpConn::connect(const std::string& host, std::uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw_errno("socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw ProtocolError("connect: bad address " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        const int err = errno;
        ::close(fd);
        throw ProtocolError(std::string("connect: ") + std::strerror(err));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpConn(fd);
}

void TcpConn::send_all(const std::uint8_t* data, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t n = ::send(fd_, data + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("send");
        }
        sent += static_cast<std::size_t>(n);
    }
}

void TcpConn::recv_some(std::vector<std::uint8_t>& buf, std::size_t len) {
    std::uint8_t chunk[16384];
    const std::size_t want = std::min(len, sizeof(chunk));
    const ssize_t n = ::recv(fd_, chunk, want, 0);
    if (n < 0) {
        if (errno == EINTR) return;
        throw_errno("recv");
    }
    if (n == 0) throw ConnectionClosed();
    buf.insert(buf.end(), chunk, chunk + n);
}

void TcpConn::send_frame(const Frame& frame, const FrameTap& tap) {
    if (tap) tap(frame, true);
    const auto bytes = encode_frame(frame);
    send_all(bytes.data(), bytes.size());
}

Frame TcpConn::recv_frame(const FrameTap& tap) {
    while (true) {
        std::size_t consumed = 0;
        auto frame = decode_frame(inbox_, consumed);
        if (frame) {
            inbox_.erase(inbox_.begin(), inbox_.begin() + static_cast<std::ptrdiff_t>(consumed));
            if (tap) tap(*frame, false);
            return std::move(*frame);
        }
        recv_some(inbox_, kDefaultMaxPayload);
    }
}

TcpListener::TcpListener(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw_errno("socket");
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        const int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw ProtocolError(std::string("bind: ") + std::strerror(err));
    }
    if (::listen(fd_, 16) != 0) {
        const int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw ProtocolError(std::string("listen: ") + std::strerror(err));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) != 0) throw_errno("getsockname");
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

TcpConn TcpListener::accept() {
    const int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0) throw_errno("accept");
    const int one = 1;
    ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpConn(client);
}

}  // namespace fedfraud::transport

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fedfraud/nn/model.hpp"
#include "json.hpp"

namespace fedfraud::transport {

// Wire format: magic "FFL1" | version u8 | msg_type u8 | payload_len u32 BE
// | payload. Payloads are a length-prefixed JSON header optionally followed
// by a binary tensor blob; raw dataset records have no message type and
// cannot be constructed on the wire.
inline constexpr char kMagic[4] = {'F', 'F', 'L', '1'};
inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kHeaderSize = 10;
inline constexpr std::size_t kDefaultMaxPayload = 64ull * 1024 * 1024;

enum class MsgType : std::uint8_t {
    Hello = 1,
    Task = 2,
    Update = 3,
    Metrics = 4,
    Done = 5,
    Error = 6,
};

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadMagicError : ProtocolError {
    BadMagicError() : ProtocolError("frame: bad magic") {}
};
struct BadVersionError : ProtocolError {
    BadVersionError() : ProtocolError("frame: protocol version mismatch") {}
};
struct UnknownTypeError : ProtocolError {
    UnknownTypeError() : ProtocolError("frame: unknown message type") {}
};
struct OversizeError : ProtocolError {
    OversizeError() : ProtocolError("frame: payload exceeds size cap") {}
};
struct TruncatedError : ProtocolError {
    TruncatedError() : ProtocolError("frame: truncated") {}
};

struct Frame {
    MsgType type = MsgType::Error;
    std::vector<std::uint8_t> payload;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame,
                                       std::size_t max_payload = kDefaultMaxPayload);

// Decodes one frame from the front of `bytes`. Returns nullopt when more
// bytes are needed (a resumable partial read); malformed input throws a
// typed ProtocolError.
std::optional<Frame> decode_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed,
                                  std::size_t max_payload = kDefaultMaxPayload);

// --- Typed messages -------------------------------------------------------

enum class TaskPhase { Train, Eval };

struct HelloMsg {
    std::string site_id;
};
struct TaskMsg {
    std::size_t round = 0;
    TaskPhase phase = TaskPhase::Train;
    nn::ModelParameters model;
};
struct UpdateMsg {
    std::size_t round = 0;
    std::string site_id;
    std::size_t n_samples = 0;
    nn::ModelParameters model;
    nlohmann::json metrics;
};
struct MetricsMsg {
    std::size_t round = 0;
    std::string site_id;
    nlohmann::json metrics;
};
struct DoneMsg {};
struct ErrorMsg {
    std::string message;
};

using Message = std::variant<HelloMsg, TaskMsg, UpdateMsg, MetricsMsg, DoneMsg, ErrorMsg>;

Frame encode_message(const Message& msg);
Message decode_message(const Frame& frame);

}  // namespace fedfraud::transport

#include "fedfraud/transport/frame.hpp"

#include <cstring>

#include "fedfraud/nn/serialize.hpp"

namespace fedfraud::transport {

namespace {

bool known_type(std::uint8_t t) {
    return t >= static_cast<std::uint8_t>(MsgType::Hello) &&
           t <= static_cast<std::uint8_t>(MsgType::Error);
}

// Payload = u32 BE json length | json bytes | optional binary blob.
std::vector<std::uint8_t> pack_payload(const nlohmann::json& header,
                                       std::span<const std::uint8_t> blob) {
    const std::string js = header.dump();
    std::vector<std::uint8_t> out;
    out.reserve(4 + js.size() + blob.size());
    const auto len = static_cast<std::uint32_t>(js.size());
    out.push_back(static_cast<std::uint8_t>((len >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((len >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((len >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(len & 0xff));
    out.insert(out.end(), js.begin(), js.end());
    out.insert(out.end(), blob.begin(), blob.end());
    return out;
}

struct UnpackedPayload {
    nlohmann::json header;
    std::span<const std::uint8_t> blob;
};

UnpackedPayload unpack_payload(std::span<const std::uint8_t> payload) {
    if (payload.size() < 4) throw ProtocolError("payload: missing header length");
    const std::uint32_t len = (static_cast<std::uint32_t>(payload[0]) << 24) |
                              (static_cast<std::uint32_t>(payload[1]) << 16) |
                              (static_cast<std::uint32_t>(payload[2]) << 8) |
                              static_cast<std::uint32_t>(payload[3]);
    if (payload.size() < 4 + static_cast<std::size_t>(len))
        throw ProtocolError("payload: truncated header");
    UnpackedPayload out;
    try {
        out.header = nlohmann::json::parse(payload.begin() + 4, payload.begin() + 4 + len);
    } catch (const nlohmann::json::exception&) {
        throw ProtocolError("payload: malformed header json");
    }
    out.blob = payload.subspan(4 + len);
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame, std::size_t max_payload) {
    if (frame.payload.size() > max_payload) throw OversizeError();
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + frame.payload.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kProtocolVersion);
    out.push_back(static_cast<std::uint8_t>(frame.type));
    const auto len = static_cast<std::uint32_t>(frame.payload.size());
    out.push_back(static_cast<std::uint8_t>((len >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((len >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((len >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(len & 0xff));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

std::optional<Frame> decode_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed,
                                  std::size_t max_payload) {
    consumed = 0;
    if (bytes.size() < kHeaderSize) {
        // Reject a hopeless prefix early; otherwise wait for more bytes.
        if (!bytes.empty() &&
            std::memcmp(bytes.data(), kMagic, std::min<std::size_t>(bytes.size(), 4)) != 0)
            throw BadMagicError();
        return std::nullopt;
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw BadMagicError();
    if (bytes[4] != kProtocolVersion) throw BadVersionError();
    if (!known_type(bytes[5])) throw UnknownTypeError();
    const std::uint32_t len = (static_cast<std::uint32_t>(bytes[6]) << 24) |
                              (static_cast<std::uint32_t>(bytes[7]) << 16) |
                              (static_cast<std::uint32_t>(bytes[8]) << 8) |
                              static_cast<std::uint32_t>(bytes[9]);
    if (len > max_payload) throw OversizeError();
    if (bytes.size() < kHeaderSize + len) return std::nullopt;

    Frame frame;
    frame.type = static_cast<MsgType>(bytes[5]);
    frame.payload.assign(bytes.begin() + kHeaderSize, bytes.begin() + kHeaderSize + len);
    consumed = kHeaderSize + len;
    return frame;
}

Frame encode_message(const Message& msg) {
    Frame frame;
    std::visit(
        [&frame](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            nlohmann::json header;
            std::vector<std::uint8_t> blob;
            if constexpr (std::is_same_v<T, HelloMsg>) {
                frame.type = MsgType::Hello;
                header["site_id"] = m.site_id;
            } else if constexpr (std::is_same_v<T, TaskMsg>) {
                frame.type = MsgType::Task;
                header["round"] = m.round;
                header["phase"] = m.phase == TaskPhase::Train ? "train" : "eval";
                blob = nn::serialize_model(m.model);
            } else if constexpr (std::is_same_v<T, UpdateMsg>) {
                frame.type = MsgType::Update;
                header["round"] = m.round;
                header["site_id"] = m.site_id;
                header["n_samples"] = m.n_samples;
                header["metrics"] = m.metrics;
                blob = nn::serialize_model(m.model);
            } else if constexpr (std::is_same_v<T, MetricsMsg>) {
                frame.type = MsgType::Metrics;
                header["round"] = m.round;
                header["site_id"] = m.site_id;
                header["metrics"] = m.metrics;
            } else if constexpr (std::is_same_v<T, DoneMsg>) {
                frame.type = MsgType::Done;
            } else if constexpr (std::is_same_v<T, ErrorMsg>) {
                frame.type = MsgType::Error;
                header["message"] = m.message;
            }
            frame.payload = pack_payload(header, blob);
        },
        msg);
    return frame;
}

Message decode_message(const Frame& frame) {
    const auto p = unpack_payload(frame.payload);
    try {
        switch (frame.type) {
            case MsgType::Hello:
                return HelloMsg{p.header.at("site_id").get<std::string>()};
            case MsgType::Task: {
                TaskMsg m;
                m.round = p.header.at("round").get<std::size_t>();
                m.phase = p.header.at("phase").get<std::string>() == "train" ? TaskPhase::Train
                                                                             : TaskPhase::Eval;
                m.model = nn::deserialize_model(p.blob);
                return m;
            }
            case MsgType::Update: {
                UpdateMsg m;
                m.round = p.header.at("round").get<std::size_t>();
                m.site_id = p.header.at("site_id").get<std::string>();
                m.n_samples = p.header.at("n_samples").get<std::size_t>();
                m.metrics = p.header.at("metrics");
                m.model = nn::deserialize_model(p.blob);
                return m;
            }
            case MsgType::Metrics: {
                MetricsMsg m;
                m.round = p.header.at("round").get<std::size_t>();
                m.site_id = p.header.at("site_id").get<std::string>();
                m.metrics = p.header.at("metrics");
                return m;
            }
            case MsgType::Done:
                return DoneMsg{};
            case MsgType::Error:
                return ErrorMsg{p.header.value("message", "")};
        }
    } catch (const nlohmann::json::exception&) {
        throw ProtocolError("message: missing or mistyped header field");
    } catch (const std::runtime_error& e) {
        throw ProtocolError(std::string("message: bad model blob: ") + e.what());
    }
    throw UnknownTypeError();
}

}  // namespace fedfraud::transport

#include "fedfraud/nn/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fedfraud/common/hash.hpp"

static_assert(std::endian::native == std::endian::little,
              "tensor codec assumes a little-endian host");

namespace fedfraud::nn {

namespace {

constexpr char kCheckpointMagic[4] = {'F', 'F', 'C', 'K'};
constexpr std::uint8_t kCheckpointVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return take(1)[0]; }

    std::uint16_t u16() {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }

    std::uint32_t u32() {
        auto b = take(4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw std::runtime_error("model blob truncated");
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_model(const ModelParameters& params) {
    std::vector<std::uint8_t> out;
    out.reserve(params.data.size() * 8 + params.specs.size() * 24 + 8);
    put_u32(out, static_cast<std::uint32_t>(params.specs.size()));
    for (std::size_t i = 0; i < params.specs.size(); ++i) {
        const TensorSpec& spec = params.specs[i];
        if (spec.name.size() > 0xffff) throw std::invalid_argument("tensor name too long");
        out.push_back(static_cast<std::uint8_t>(spec.name.size() & 0xff));
        out.push_back(static_cast<std::uint8_t>((spec.name.size() >> 8) & 0xff));
        out.insert(out.end(), spec.name.begin(), spec.name.end());
        out.push_back(static_cast<std::uint8_t>(spec.dims.size()));
        for (std::size_t d : spec.dims) put_u32(out, static_cast<std::uint32_t>(d));
        const auto values = params.tensor(i);
        const std::size_t byte_count = values.size() * sizeof(double);
        const std::size_t at = out.size();
        out.resize(at + byte_count);
        std::memcpy(out.data() + at, values.data(), byte_count);
    }
    return out;
}

ModelParameters deserialize_model(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    const std::uint32_t count = r.u32();
    ModelParameters p;
    std::size_t offset = 0;
    for (std::uint32_t i = 0; i < count; ++i) {
        TensorSpec spec;
        const std::uint16_t name_len = r.u16();
        auto name_bytes = r.take(name_len);
        spec.name.assign(name_bytes.begin(), name_bytes.end());
        const std::uint8_t ndim = r.u8();
        spec.dims.resize(ndim);
        for (std::uint8_t d = 0; d < ndim; ++d) spec.dims[d] = r.u32();
        spec.offset = offset;
        const std::size_t n = spec.size();
        offset += n;
        p.specs.push_back(spec);
        const auto raw = r.take(n * sizeof(double));
        const std::size_t at = p.data.size();
        p.data.resize(at + n);
        std::memcpy(p.data.data() + at, raw.data(), n * sizeof(double));
    }
    if (!r.done()) throw std::runtime_error("model blob has trailing bytes");
    return p;
}

std::string model_hash(const ModelParameters& params) {
    const auto bytes = serialize_model(params);
    return Fnv1a{}.update(bytes.data(), bytes.size()).hex();
}

void save_checkpoint(const std::string& path, const ModelParameters& model,
                     const nlohmann::json& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    out.put(static_cast<char>(kCheckpointVersion));
    const std::string meta_str = meta.dump();
    std::vector<std::uint8_t> len;
    put_u32(len, static_cast<std::uint32_t>(meta_str.size()));
    out.write(reinterpret_cast<const char*>(len.data()), static_cast<std::streamsize>(len.size()));
    out.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));
    const auto blob = serialize_model(model);
    out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() < 9 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0)
        throw std::runtime_error("not a checkpoint file: " + path);
    if (bytes[4] != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version in " + path);
    Reader r(std::span<const std::uint8_t>(bytes).subspan(5));
    const std::uint32_t meta_len = r.u32();
    const auto meta_bytes = r.take(meta_len);
    Checkpoint ck;
    ck.meta = nlohmann::json::parse(meta_bytes.begin(), meta_bytes.end());
    const std::size_t consumed = 5 + 4 + meta_len;
    ck.model = deserialize_model(std::span<const std::uint8_t>(bytes).subspan(consumed));
    return ck;
}

}  // namespace fedfraud::nn

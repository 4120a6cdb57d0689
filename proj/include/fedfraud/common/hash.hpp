#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace fedfraud {

// Accumulating FNV-1a 64-bit hash. Stable across platforms; used for config
// hashes, parameter hashes, and dataset fingerprints.
class Fnv1a {
public:
    Fnv1a& update(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }

    Fnv1a& update(std::string_view s) { return update(s.data(), s.size()); }

    Fnv1a& update(double v) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        return update(&bits, sizeof(bits));
    }

    Fnv1a& update(std::uint64_t v) { return update(&v, sizeof(v)); }

    std::uint64_t value() const { return state_; }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xf];
            v >>= 4;
        }
        return out;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string hash_hex(std::string_view s) { return Fnv1a{}.update(s).hex(); }

}  // namespace fedfraud

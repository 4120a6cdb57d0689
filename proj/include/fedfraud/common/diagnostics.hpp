#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace fedfraud {

// Named event counters surfaced by the generator and feature pipeline
// (clamped coordinates, degraded selections, degenerate scaler columns, ...).
struct DiagCounters {
    std::map<std::string, std::uint64_t> counts;

    void bump(const std::string& name, std::uint64_t by = 1) { counts[name] += by; }

    std::uint64_t get(const std::string& name) const {
        auto it = counts.find(name);
        return it == counts.end() ? 0 : it->second;
    }

    void merge(const DiagCounters& other) {
        for (const auto& [k, v] : other.counts) counts[k] += v;
    }
};

}  // namespace fedfraud

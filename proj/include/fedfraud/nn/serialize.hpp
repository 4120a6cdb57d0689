#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedfraud/nn/model.hpp"
#include "json.hpp"

namespace fedfraud::nn {

// Little-endian IEEE-754 tensor dump with shape headers. One codec shared by
// the checkpoint file and the wire protocol; round-trips are bit exact.
std::vector<std::uint8_t> serialize_model(const ModelParameters& params);
ModelParameters deserialize_model(std::span<const std::uint8_t> bytes);

// FNV-1a fingerprint of the serialized form.
std::string model_hash(const ModelParameters& params);

struct Checkpoint {
    ModelParameters model;
    nlohmann::json meta;  // config_hash, algorithm, ...
};

void save_checkpoint(const std::string& path, const ModelParameters& model,
                     const nlohmann::json& meta);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace fedfraud::nn

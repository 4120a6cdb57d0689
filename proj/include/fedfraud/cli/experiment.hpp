#pragma once

#include <cstdint>
#include <string>

#include "fedfraud/datagen/types.hpp"
#include "fedfraud/fedcore/types.hpp"
#include "json.hpp"

namespace fedfraud::cli {

enum class TransportMode { InProcess, Tcp };

// Whole-experiment declaration: generator sites, training regime, privacy,
// partitioning, output location. Validated as a unit; its hash is stamped
// into every artifact the pipeline emits.
struct ExperimentConfig {
    std::string output_dir = "out";
    TransportMode transport = TransportMode::InProcess;
    std::int64_t clock_now = 0;
    datagen::PartitionRatios ratios;
    fedcore::FederationConfig federation;
    std::string config_hash;  // derived, not part of the input schema

    void validate() const;

    std::string data_dir() const { return output_dir + "/data"; }
    std::string train_dir() const {
        return output_dir + "/train_" + fedcore::to_string(federation.algorithm);
    }
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);
void save_experiment_config(const std::string& path, const ExperimentConfig& config);

// Canonical fingerprint of the normalized config (output_dir excluded, so
// relocating results does not change identity).
std::string config_fingerprint(const ExperimentConfig& config);

// The five-site laboratory suite: amount means interpolated between the two
// anchor sites, anomalous means 5x normal, distinct anomaly-type exposure
// per site, every type covered somewhere and no site seeing all four.
ExperimentConfig default_experiment(std::size_t records_per_site = 20000, std::uint64_t seed = 1,
                                    double fraud_fraction = 0.005);

}  // namespace fedfraud::cli

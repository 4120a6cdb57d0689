#pragma once

#include <cstdint>
#include <string>

#include "fedfraud/cli/experiment.hpp"

namespace fedfraud::cli {

// Dataset CSVs per (site, partition) plus the sidecar manifest.
void cmd_generate(const ExperimentConfig& config);

// Runs the configured regime over generated data; emits JSON-lines history,
// scaler files, checkpoint(s), and a summary table.
void cmd_train(const ExperimentConfig& config);

// Per-site metric reports, confusion matrices, and PR plot data for a
// checkpoint. Refuses a checkpoint whose config hash does not match.
void cmd_evaluate(const ExperimentConfig& config, const std::string& checkpoint_path);

// GradientShap rankings overall and per anomaly type.
void cmd_attribute(const ExperimentConfig& config, const std::string& checkpoint_path,
                   std::size_t n_baselines = 500, std::size_t k_samples = 50);

// Offline budget query: (q, sigma, steps, delta) -> epsilon.
void cmd_account(double q, double sigma, std::size_t steps, double delta);

// TCP federation endpoints.
void cmd_serve(const ExperimentConfig& config, std::uint16_t port);
int cmd_client(const ExperimentConfig& config, const std::string& site_id,
               const std::string& host, std::uint16_t port);

}  // namespace fedfraud::cli

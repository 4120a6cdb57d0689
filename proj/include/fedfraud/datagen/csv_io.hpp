#pragma once

#include <map>
#include <string>
#include <vector>

#include "fedfraud/datagen/types.hpp"

namespace fedfraud::datagen {

// Column order of the dataset CSVs; a stable contract shared by writer,
// reader, and the feature pipeline.
const std::vector<std::string>& csv_columns();

void write_records_csv(const std::string& path, const std::vector<TransactionRecord>& records);
std::vector<TransactionRecord> read_records_csv(const std::string& path);

struct PartitionStats {
    std::size_t rows = 0;
    std::size_t fraud = 0;
};

struct SiteStats {
    std::map<std::string, PartitionStats> partitions;  // scaling/train/test
    double fraud_rate_train_test = 0.0;                // final labels, scaling excluded
};

SiteStats compute_site_stats(const DatasetPartitions& parts);

// Sidecar manifest: config hash, seed, per-partition row/fraud counts, and a
// fingerprint of all emitted CSV bytes.
void write_manifest(const std::string& path, const std::string& config_hash, std::uint64_t seed,
                    std::int64_t clock_now, const std::map<std::string, SiteStats>& sites,
                    const std::string& dataset_hash);

}  // namespace fedfraud::datagen

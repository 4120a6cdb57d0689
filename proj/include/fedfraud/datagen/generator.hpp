#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "fedfraud/common/diagnostics.hpp"
#include "fedfraud/common/rng.hpp"
#include "fedfraud/datagen/types.hpp"

namespace fedfraud::datagen {

// Normal per-account-type activity-event ranges [lo, hi).
std::pair<std::int64_t, std::int64_t> normal_activity_range(AccountType t);
// Elevated ranges used by anomaly Type 4.
std::pair<std::int64_t, std::int64_t> anomalous_activity_range(AccountType t);

// Account-age offset applied by Type 2, seconds before payment init.
std::int64_t type2_age_seconds(int h, int m, int s);
bool is_valid_type2_age(std::int64_t age_seconds);

// All-legitimate base rows. `clock_now` anchors the temporal fields; every
// record's payment moment is drawn within the week before it.
std::vector<TransactionRecord> generate_base_records(const SiteConfig& config,
                                                     std::int64_t clock_now, Rng& rng,
                                                     DiagCounters& diags);

// Applies one anomaly-type rule in place, flags the record, and extends its
// provenance set. Coordinates pushed outside the valid range are clamped and
// counted in `diags`.
void inject_anomaly(TransactionRecord& record, int anomaly_type, const SiteConfig& config,
                    Rng& rng, DiagCounters& diags);

struct FraudSelection {
    std::vector<std::size_t> from_flagged;
    std::vector<std::size_t> from_clean;
    bool degraded = false;  // fewer flagged rows than requested
};

// One injection pass: n_F = ceil(ceil(|D| a) b) rows from previously flagged
// records, n_N = ceil(|D| a) - n_F from clean ones, drawn without replacement.
FraudSelection select_fraud_rows(std::size_t dataset_size, double alpha, double beta,
                                 const std::set<std::size_t>& flagged_indices, Rng& rng,
                                 DiagCounters* diags = nullptr);

// Flips floor((1 - p_apply) * |flagged|) uniformly chosen flagged rows back to
// label 0. Feature values and provenance stay untouched.
void apply_label_noise(std::vector<TransactionRecord*>& records, double p_apply, Rng& rng);
void apply_label_noise(std::vector<TransactionRecord>& records, double p_apply, Rng& rng);

// Seeded shuffle followed by a proportional three-way split.
DatasetPartitions partition_dataset(std::vector<TransactionRecord> records,
                                    const PartitionRatios& ratios, std::uint64_t seed);

struct SiteDataset {
    DatasetPartitions partitions;
    DiagCounters diags;
};

// Full per-site pipeline: base generation, partitioning, anomaly passes over
// the training-side pool (scaling+train) with the site's train types and over
// the test pool with its eval types, then label noise per pool.
SiteDataset generate_site_dataset(const SiteConfig& config, const PartitionRatios& ratios,
                                  std::int64_t clock_now);

}  // namespace fedfraud::datagen

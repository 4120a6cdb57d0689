#pragma once

#include <set>
#include <string>
#include <vector>

#include "fedfraud/common/diagnostics.hpp"
#include "fedfraud/common/matrix.hpp"
#include "fedfraud/datagen/types.hpp"

namespace fedfraud::features {

using FeatureVector = std::vector<double>;

// Ordered feature layout; a stable contract between the generator, the
// scaler files, the model input, and the attribution reports.
const std::vector<std::string>& feature_layout();
std::size_t feature_count();

// One-hot indicator features pass through scaling untouched.
bool is_scaled_feature(std::size_t index);

// Raw record -> numeric vector: log account ages (minutes), log activity
// gaps (seconds), tower-vs-physical Haversine distances (km), raw amounts
// and activity counts, and per-participant account-type one-hots.
FeatureVector engineer_features(const datagen::TransactionRecord& record,
                                DiagCounters* diags = nullptr);

struct FeaturizedSet {
    Matrix x;                             // rows x feature_count()
    std::vector<int> labels;              // FRAUD_FLAG
    std::vector<std::set<int>> type_tags; // provenance, for per-type metrics
};

FeaturizedSet featurize(const std::vector<datagen::TransactionRecord>& records,
                        DiagCounters* diags = nullptr);

}  // namespace fedfraud::features

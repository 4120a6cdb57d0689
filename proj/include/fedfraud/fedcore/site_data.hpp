#pragma once

#include <string>
#include <vector>

#include "fedfraud/datagen/types.hpp"
#include "fedfraud/features/features.hpp"
#include "fedfraud/features/scaler.hpp"

namespace fedfraud::fedcore {

// One site's partitions, featurized and standardized with a scaler fit on
// that site's scaling partition (or a pooled scaler for central training).
struct SiteData {
    std::string site_id;
    features::FeaturizedSet scaling;
    features::FeaturizedSet train;
    features::FeaturizedSet test;
    features::ScalerParams scaler;
    DiagCounters diags;
};

SiteData prepare_site_data(const std::string& site_id, const datagen::DatasetPartitions& parts);

// Pooled view for the centralized baseline: scaler fit on the concatenated
// scaling partitions, train pooled, per-site tests rescaled with the pooled
// scaler.
struct CentralData {
    features::FeaturizedSet train;
    std::vector<std::string> site_ids;
    std::vector<features::FeaturizedSet> tests;
    features::ScalerParams scaler;
};

CentralData prepare_central_data(const std::vector<std::string>& site_ids,
                                 const std::vector<const datagen::DatasetPartitions*>& parts);

// Loads the three partition CSVs of one site from `data_dir`.
datagen::DatasetPartitions load_site_partitions(const std::string& data_dir,
                                                const std::string& site_id);

}  // namespace fedfraud::fedcore

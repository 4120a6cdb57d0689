#include "fedfraud/fedcore/site_data.hpp"

#include "fedfraud/datagen/csv_io.hpp"

namespace fedfraud::fedcore {

namespace {

features::FeaturizedSet featurize_scaled(const std::vector<datagen::TransactionRecord>& records,
                                         const features::ScalerParams& scaler,
                                         DiagCounters* diags) {
    features::FeaturizedSet set = features::featurize(records, diags);
    features::apply_scaler(set.x, scaler);
    return set;
}

}  // namespace

SiteData prepare_site_data(const std::string& site_id, const datagen::DatasetPartitions& parts) {
    SiteData data;
    data.site_id = site_id;

    features::FeaturizedSet raw_scaling = features::featurize(parts.scaling, &data.diags);
    data.scaler = features::fit_scaler(raw_scaling.x, "scaling", &data.diags);
    features::apply_scaler(raw_scaling.x, data.scaler);
    data.scaling = std::move(raw_scaling);

    data.train = featurize_scaled(parts.train, data.scaler, &data.diags);
    data.test = featurize_scaled(parts.test, data.scaler, &data.diags);
    return data;
}

CentralData prepare_central_data(const std::vector<std::string>& site_ids,
                                 const std::vector<const datagen::DatasetPartitions*>& parts) {
    if (site_ids.size() != parts.size() || parts.empty())
        throw std::invalid_argument("prepare_central_data: site/partition mismatch");

    CentralData data;
    data.site_ids = site_ids;

    std::vector<datagen::TransactionRecord> pooled_scaling;
    std::vector<datagen::TransactionRecord> pooled_train;
    for (const auto* p : parts) {
        pooled_scaling.insert(pooled_scaling.end(), p->scaling.begin(), p->scaling.end());
        pooled_train.insert(pooled_train.end(), p->train.begin(), p->train.end());
    }

    features::FeaturizedSet scaling_set = features::featurize(pooled_scaling);
    data.scaler = features::fit_scaler(scaling_set.x, "scaling_pooled");

    data.train = features::featurize(pooled_train);
    features::apply_scaler(data.train.x, data.scaler);

    for (const auto* p : parts) {
        features::FeaturizedSet test = features::featurize(p->test);
        features::apply_scaler(test.x, data.scaler);
        data.tests.push_back(std::move(test));
    }
    return data;
}

datagen::DatasetPartitions load_site_partitions(const std::string& data_dir,
                                                const std::string& site_id) {
    datagen::DatasetPartitions parts;
    parts.scaling = datagen::read_records_csv(data_dir + "/" + site_id + "_scaling.csv");
    parts.train = datagen::read_records_csv(data_dir + "/" + site_id + "_train.csv");
    parts.test = datagen::read_records_csv(data_dir + "/" + site_id + "_test.csv");
    return parts;
}

}  // namespace fedfraud::fedcore

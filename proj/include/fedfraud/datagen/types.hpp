#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedfraud::datagen {

enum class AccountType { Business, Checking, Savings };

inline const char* to_string(AccountType t) {
    switch (t) {
        case AccountType::Business: return "BUSINESS";
        case AccountType::Checking: return "CHECKING";
        case AccountType::Savings: return "SAVINGS";
    }
    return "?";
}

inline AccountType account_type_from_string(const std::string& s) {
    if (s == "BUSINESS") return AccountType::Business;
    if (s == "CHECKING") return AccountType::Checking;
    if (s == "SAVINGS") return AccountType::Savings;
    throw std::invalid_argument("unknown account type: " + s);
}

inline const std::vector<AccountType>& all_account_types() {
    static const std::vector<AccountType> kTypes = {AccountType::Business, AccountType::Checking,
                                                    AccountType::Savings};
    return kTypes;
}

// Log-normal amount family, parameterized by the desired arithmetic mean and
// standard deviation in USD.
struct LogNormalSpec {
    double mean_arith = 0.0;
    double sd_arith = 0.0;

    void validate() const {
        if (!(mean_arith > 0.0)) throw std::invalid_argument("LogNormalSpec: mean_arith must be > 0");
        if (!(sd_arith >= 0.0)) throw std::invalid_argument("LogNormalSpec: sd_arith must be >= 0");
    }
};

struct SiteConfig {
    std::string site_id;
    std::size_t n_records = 0;
    std::map<AccountType, LogNormalSpec> amount_normal;
    std::map<AccountType, LogNormalSpec> amount_anomalous;
    std::pair<double, double> tower_perturbation{0.0, 0.0};  // degrees, applied per coordinate
    double type1_push_factor = -5.0;                         // degrees, typically negative
    std::set<int> anomaly_types_train;
    std::set<int> anomaly_types_eval;
    double fraud_fraction = 0.005;   // alpha, per injection pass
    double overlap_fraction = 0.5;   // beta
    double label_apply_prob = 0.9;   // p_apply
    std::uint64_t seed = 0;

    void validate() const;
};

struct TransactionRecord {
    std::string debitor_id, creditor_id;
    std::string debitor_name, creditor_name;
    std::string debitor_city, creditor_city;

    double debitor_geo_lat = 0, debitor_geo_lon = 0;
    double debitor_tower_lat = 0, debitor_tower_lon = 0;
    double creditor_geo_lat = 0, creditor_geo_lon = 0;
    double creditor_tower_lat = 0, creditor_tower_lon = 0;

    std::int64_t payment_init_ts = 0;
    std::int64_t debitor_dob_ts = 0, creditor_dob_ts = 0;
    std::int64_t debitor_account_create_ts = 0, debitor_last_activity_ts = 0;
    std::int64_t creditor_account_create_ts = 0, creditor_last_activity_ts = 0;

    AccountType debitor_account_type = AccountType::Checking;
    AccountType creditor_account_type = AccountType::Checking;
    std::int64_t debitor_activity_events_30d = 0, creditor_activity_events_30d = 0;

    double debitor_amount = 0.0, creditor_amount = 0.0;
    std::string debitor_currency, creditor_currency;

    int fraud_flag = 0;
    std::set<int> anomaly_types_applied;  // generator provenance, never a feature
};

struct PartitionRatios {
    double scaling = 0.2;
    double train = 0.6;
    double test = 0.2;
};

struct DatasetPartitions {
    std::vector<TransactionRecord> scaling;
    std::vector<TransactionRecord> train;
    std::vector<TransactionRecord> test;
};

}  // namespace fedfraud::datagen

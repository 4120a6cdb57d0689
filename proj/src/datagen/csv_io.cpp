#include "fedfraud/datagen/csv_io.hpp"

#include <charconv>
#include <sstream>

#include "fedfraud/common/csv.hpp"
#include "fedfraud/common/timefmt.hpp"
#include "json.hpp"

namespace fedfraud::datagen {

namespace {

std::string join_types(const std::set<int>& types) {
    std::string out;
    for (int t : types) {
        if (!out.empty()) out += ';';
        out += std::to_string(t);
    }
    return out;
}

std::set<int> parse_types(const std::string& s) {
    std::set<int> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ';'))
        if (!cur.empty()) out.insert(std::stoi(cur));
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw std::runtime_error("bad numeric field: " + s);
    return v;
}

std::int64_t parse_i64(const std::string& s) { return std::stoll(s); }

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> kColumns = {
        "FRAUD_FLAG",
        "ANOMALY_TYPES",
        "PAYMENT_INIT_TIMESTAMP",
        "DEBITOR_ID",
        "DEBITOR_NAME",
        "DEBITOR_CITY",
        "DEBITOR_DOB",
        "DEBITOR_GEO_LATITUDE",
        "DEBITOR_GEO_LONGITUDE",
        "DEBITOR_TOWER_LATITUDE",
        "DEBITOR_TOWER_LONGITUDE",
        "DEBITOR_ACCOUNT_TYPE",
        "DEBITOR_ACCOUNT_CREATE_TIMESTAMP",
        "DEBITOR_ACCOUNT_LAST_ACTIVITY_TIMESTAMP",
        "DEBITOR_ACCOUNT_ACTIVITY_EVENTS_PAST_30D",
        "DEBITOR_AMOUNT",
        "DEBITOR_CURRENCY",
        "CREDITOR_ID",
        "CREDITOR_NAME",
        "CREDITOR_CITY",
        "CREDITOR_DOB",
        "CREDITOR_GEO_LATITUDE",
        "CREDITOR_GEO_LONGITUDE",
        "CREDITOR_TOWER_LATITUDE",
        "CREDITOR_TOWER_LONGITUDE",
        "CREDITOR_ACCOUNT_TYPE",
        "CREDITOR_ACCOUNT_CREATE_TIMESTAMP",
        "CREDITOR_ACCOUNT_LAST_ACTIVITY_TIMESTAMP",
        "CREDITOR_ACCOUNT_ACTIVITY_EVENTS_PAST_30D",
        "CREDITOR_AMOUNT",
        "CREDITOR_CURRENCY",
    };
    return kColumns;
}

void write_records_csv(const std::string& path, const std::vector<TransactionRecord>& records) {
    CsvWriter w(path);
    w.write_row(csv_columns());
    for (const auto& r : records) {
        w.write_row({
            std::to_string(r.fraud_flag),
            join_types(r.anomaly_types_applied),
            iso8601_utc(r.payment_init_ts),
            r.debitor_id,
            r.debitor_name,
            r.debitor_city,
            iso8601_utc(r.debitor_dob_ts),
            format_double(r.debitor_geo_lat),
            format_double(r.debitor_geo_lon),
            format_double(r.debitor_tower_lat),
            format_double(r.debitor_tower_lon),
            to_string(r.debitor_account_type),
            iso8601_utc(r.debitor_account_create_ts),
            iso8601_utc(r.debitor_last_activity_ts),
            std::to_string(r.debitor_activity_events_30d),
            format_double(r.debitor_amount),
            r.debitor_currency,
            r.creditor_id,
            r.creditor_name,
            r.creditor_city,
            iso8601_utc(r.creditor_dob_ts),
            format_double(r.creditor_geo_lat),
            format_double(r.creditor_geo_lon),
            format_double(r.creditor_tower_lat),
            format_double(r.creditor_tower_lon),
            to_string(r.creditor_account_type),
            iso8601_utc(r.creditor_account_create_ts),
            iso8601_utc(r.creditor_last_activity_ts),
            std::to_string(r.creditor_activity_events_30d),
            format_double(r.creditor_amount),
            r.creditor_currency,
        });
    }
}

std::vector<TransactionRecord> read_records_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header != csv_columns())
        throw std::runtime_error("unexpected CSV schema in " + path);

    std::vector<TransactionRecord> records;
    records.reserve(table.rows.size());
    for (const auto& f : table.rows) {
        if (f.size() != csv_columns().size())
            throw std::runtime_error("short CSV row in " + path);
        TransactionRecord r;
        std::size_t i = 0;
        r.fraud_flag = std::stoi(f[i++]);
        r.anomaly_types_applied = parse_types(f[i++]);
        r.payment_init_ts = parse_iso8601_utc(f[i++]);
        r.debitor_id = f[i++];
        r.debitor_name = f[i++];
        r.debitor_city = f[i++];
        r.debitor_dob_ts = parse_iso8601_utc(f[i++]);
        r.debitor_geo_lat = parse_double(f[i++]);
        r.debitor_geo_lon = parse_double(f[i++]);
        r.debitor_tower_lat = parse_double(f[i++]);
        r.debitor_tower_lon = parse_double(f[i++]);
        r.debitor_account_type = account_type_from_string(f[i++]);
        r.debitor_account_create_ts = parse_iso8601_utc(f[i++]);
        r.debitor_last_activity_ts = parse_iso8601_utc(f[i++]);
        r.debitor_activity_events_30d = parse_i64(f[i++]);
        r.debitor_amount = parse_double(f[i++]);
        r.debitor_currency = f[i++];
        r.creditor_id = f[i++];
        r.creditor_name = f[i++];
        r.creditor_city = f[i++];
        r.creditor_dob_ts = parse_iso8601_utc(f[i++]);
        r.creditor_geo_lat = parse_double(f[i++]);
        r.creditor_geo_lon = parse_double(f[i++]);
        r.creditor_tower_lat = parse_double(f[i++]);
        r.creditor_tower_lon = parse_double(f[i++]);
        r.creditor_account_type = account_type_from_string(f[i++]);
        r.creditor_account_create_ts = parse_iso8601_utc(f[i++]);
        r.creditor_last_activity_ts = parse_iso8601_utc(f[i++]);
        r.creditor_activity_events_30d = parse_i64(f[i++]);
        r.creditor_amount = parse_double(f[i++]);
        r.creditor_currency = f[i++];
        records.push_back(std::move(r));
    }
    return records;
}

SiteStats compute_site_stats(const DatasetPartitions& parts) {
    SiteStats stats;
    auto count = [](const std::vector<TransactionRecord>& v) {
        PartitionStats p;
        p.rows = v.size();
        for (const auto& r : v) p.fraud += static_cast<std::size_t>(r.fraud_flag);
        return p;
    };
    stats.partitions["scaling"] = count(parts.scaling);
    stats.partitions["train"] = count(parts.train);
    stats.partitions["test"] = count(parts.test);
    const auto& tr = stats.partitions["train"];
    const auto& te = stats.partitions["test"];
    const std::size_t rows = tr.rows + te.rows;
    stats.fraud_rate_train_test =
        rows == 0 ? 0.0 : static_cast<double>(tr.fraud + te.fraud) / static_cast<double>(rows);
    return stats;
}

void write_manifest(const std::string& path, const std::string& config_hash, std::uint64_t seed,
                    std::int64_t clock_now, const std::map<std::string, SiteStats>& sites,
                    const std::string& dataset_hash) {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["clock_now"] = iso8601_utc(clock_now);
    j["dataset_hash"] = dataset_hash;
    for (const auto& [site, stats] : sites) {
        nlohmann::json s;
        for (const auto& [name, p] : stats.partitions) {
            s["partitions"][name] = {{"rows", p.rows}, {"fraud", p.fraud}};
        }
        s["fraud_rate_train_test"] = stats.fraud_rate_train_test;
        j["sites"][site] = s;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace fedfraud::datagen

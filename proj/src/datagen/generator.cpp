#include "fedfraud/datagen/generator.hpp"

#include <algorithm>
#include <cmath>

#include "fedfraud/datagen/lognormal.hpp"
#include "fedfraud/datagen/reference_data.hpp"

namespace fedfraud::datagen {

namespace {

constexpr std::int64_t kWeek = 7 * 86400;
constexpr std::int64_t kTwelveWeeks = 12 * kWeek;
constexpr std::int64_t kYearApprox = 31557600;  // 365.25 days

constexpr double kLatMin = -90.0, kLatMax = 90.0;
constexpr double kLonMin = -180.0, kLonMax = 180.0;

double clamp_with_diag(double v, double lo, double hi, DiagCounters& diags, const char* counter) {
    if (v < lo) {
        diags.bump(counter);
        return lo;
    }
    if (v > hi) {
        diags.bump(counter);
        return hi;
    }
    return v;
}

const LogNormalSpec& spec_for(const std::map<AccountType, LogNormalSpec>& specs, AccountType t,
                              const char* which) {
    auto it = specs.find(t);
    if (it == specs.end())
        throw std::invalid_argument(std::string("SiteConfig: missing ") + which +
                                    " amount spec for account type " + to_string(t));
    return it->second;
}

// Type 1 candidate range on one side of the coordinate's valid interval.
// High side: (c - p, c_max); low side is its mirror (c_min, -(c - p)), which
// is the paper rule specialized to the symmetric lat/lon bounds.
bool side_range(double c, double p, double c_min, double c_max, bool high, double& lo,
                double& hi) {
    if (high) {
        lo = c - p;
        hi = c_max;
    } else {
        lo = c_min;
        hi = -(c - p);
    }
    return lo < hi;
}

double displace_coordinate(double c, double p, double c_min, double c_max, Rng& rng,
                           DiagCounters& diags) {
    const bool prefer_high = rng.bernoulli(0.5);
    double lo, hi;
    if (!side_range(c, p, c_min, c_max, prefer_high, lo, hi) &&
        !side_range(c, p, c_min, c_max, !prefer_high, lo, hi)) {
        diags.bump("type1_range_empty");
        return std::clamp(c, c_min, c_max);
    }
    const double v = rng.uniform(lo, hi);
    return clamp_with_diag(v, c_min, c_max, diags, "type1_coordinate_clamped");
}

struct ParticipantDraw {
    std::string id, name, city_name, currency;
    double geo_lat, geo_lon, tower_lat, tower_lon;
    std::int64_t dob, create_ts, last_activity_ts;
    AccountType type;
    std::int64_t activity_events;
};

ParticipantDraw draw_participant(const SiteConfig& cfg, std::int64_t payment_init,
                                 const std::string& id, Rng& rng, DiagCounters& diags) {
    ParticipantDraw p;
    p.id = id;
    p.name = rng.pick(first_names()) + " " + rng.pick(last_names());
    const City& city = rng.pick(cities());
    p.city_name = city.name;
    p.currency = city.currency;
    p.geo_lat = city.lat + rng.uniform(-0.5, 0.5);
    p.geo_lon = city.lon + rng.uniform(-0.5, 0.5);
    p.tower_lat = clamp_with_diag(p.geo_lat + rng.uniform(cfg.tower_perturbation.first,
                                                          cfg.tower_perturbation.second),
                                  kLatMin, kLatMax, diags, "base_tower_clamped");
    p.tower_lon = clamp_with_diag(p.geo_lon + rng.uniform(cfg.tower_perturbation.first,
                                                          cfg.tower_perturbation.second),
                                  kLonMin, kLonMax, diags, "base_tower_clamped");
    p.dob = payment_init - rng.uniform_int(18 * kYearApprox, 80 * kYearApprox + 1);
    p.create_ts = rng.uniform_int(p.dob + 1, payment_init - kTwelveWeeks + 1);
    p.last_activity_ts =
        rng.uniform_int(std::max(p.create_ts, payment_init - kWeek), payment_init + 1);
    p.type = all_account_types()[rng.uniform_index(3)];
    const auto [lo, hi] = normal_activity_range(p.type);
    p.activity_events = rng.uniform_int(lo, hi);
    return p;
}

}  // namespace

void SiteConfig::validate() const {
    if (site_id.empty()) throw std::invalid_argument("SiteConfig: empty site_id");
    if (n_records == 0) throw std::invalid_argument("SiteConfig: n_records must be positive");
    for (AccountType t : all_account_types()) {
        spec_for(amount_normal, t, "normal").validate();
        spec_for(amount_anomalous, t, "anomalous").validate();
    }
    if (!(tower_perturbation.first < tower_perturbation.second))
        throw std::invalid_argument("SiteConfig: tower_perturbation interval must be well-ordered");
    if (anomaly_types_train.empty())
        throw std::invalid_argument("SiteConfig: anomaly_types_train must be nonempty");
    for (const auto* types : {&anomaly_types_train, &anomaly_types_eval}) {
        for (int t : *types)
            if (t < 1 || t > 4)
                throw std::invalid_argument("SiteConfig: anomaly types must be in {1,2,3,4}");
    }
    if (!(fraud_fraction >= 0.001 && fraud_fraction < 0.01))
        throw std::invalid_argument("SiteConfig: fraud_fraction must be in [0.001, 0.01)");
    if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0))
        throw std::invalid_argument("SiteConfig: overlap_fraction must be in [0, 1]");
    if (!(label_apply_prob > 0.0 && label_apply_prob <= 1.0))
        throw std::invalid_argument("SiteConfig: label_apply_prob must be in (0, 1]");
}

std::pair<std::int64_t, std::int64_t> normal_activity_range(AccountType t) {
    switch (t) {
        case AccountType::Business: return {50, 1500000};
        case AccountType::Checking: return {2, 500};
        case AccountType::Savings: return {2, 50};
    }
    throw std::logic_error("unreachable");
}

std::pair<std::int64_t, std::int64_t> anomalous_activity_range(AccountType t) {
    switch (t) {
        case AccountType::Business: return {1000000, 5000000};
        case AccountType::Checking: return {525, 2000};
        case AccountType::Savings: return {75, 2000};
    }
    throw std::logic_error("unreachable");
}

std::int64_t type2_age_seconds(int h, int m, int s) { return h * 3600 + m * 60 + s; }

bool is_valid_type2_age(std::int64_t age_seconds) {
    // m*60 + s < 3600 and s < 60, so the decomposition below is unique.
    const std::int64_t h = age_seconds / 3600;
    const std::int64_t m = (age_seconds % 3600) / 60;
    const std::int64_t s = age_seconds % 60;
    static const std::set<std::int64_t> kM = {0, 1, 4, 9, 16, 25};
    static const std::set<std::int64_t> kS = {1, 10, 20, 30, 40, 50};
    return h >= 0 && h <= 5 && kM.count(m) && kS.count(s);
}

std::vector<TransactionRecord> generate_base_records(const SiteConfig& config,
                                                     std::int64_t clock_now, Rng& rng,
                                                     DiagCounters& diags) {
    config.validate();
    std::vector<TransactionRecord> records;
    records.reserve(config.n_records);
    for (std::size_t i = 0; i < config.n_records; ++i) {
        TransactionRecord r;
        // Each record's payment moment is its own temporal anchor.
        r.payment_init_ts = clock_now - rng.uniform_int(0, kWeek);

        const auto d = draw_participant(config, r.payment_init_ts,
                                        config.site_id + "-D" + std::to_string(i), rng, diags);
        const auto c = draw_participant(config, r.payment_init_ts,
                                        config.site_id + "-C" + std::to_string(i), rng, diags);

        r.debitor_id = d.id;
        r.debitor_name = d.name;
        r.debitor_city = d.city_name;
        r.debitor_currency = d.currency;
        r.debitor_geo_lat = d.geo_lat;
        r.debitor_geo_lon = d.geo_lon;
        r.debitor_tower_lat = d.tower_lat;
        r.debitor_tower_lon = d.tower_lon;
        r.debitor_dob_ts = d.dob;
        r.debitor_account_create_ts = d.create_ts;
        r.debitor_last_activity_ts = d.last_activity_ts;
        r.debitor_account_type = d.type;
        r.debitor_activity_events_30d = d.activity_events;

        r.creditor_id = c.id;
        r.creditor_name = c.name;
        r.creditor_city = c.city_name;
        r.creditor_currency = c.currency;
        r.creditor_geo_lat = c.geo_lat;
        r.creditor_geo_lon = c.geo_lon;
        r.creditor_tower_lat = c.tower_lat;
        r.creditor_tower_lon = c.tower_lon;
        r.creditor_dob_ts = c.dob;
        r.creditor_account_create_ts = c.create_ts;
        r.creditor_last_activity_ts = c.last_activity_ts;
        r.creditor_account_type = c.type;
        r.creditor_activity_events_30d = c.activity_events;

        r.debitor_amount =
            sample_lognormal(rng, spec_for(config.amount_normal, d.type, "normal"));
        r.creditor_amount = r.debitor_amount * exchange_rate(d.currency, c.currency);

        r.fraud_flag = 0;
        records.push_back(std::move(r));
    }
    return records;
}

void inject_anomaly(TransactionRecord& record, int anomaly_type, const SiteConfig& config,
                    Rng& rng, DiagCounters& diags) {
    switch (anomaly_type) {
        case 1: {
            const double p = config.type1_push_factor;
            record.debitor_tower_lat =
                displace_coordinate(record.debitor_tower_lat, p, kLatMin, kLatMax, rng, diags);
            record.debitor_tower_lon =
                displace_coordinate(record.debitor_tower_lon, p, kLonMin, kLonMax, rng, diags);
            record.creditor_tower_lat =
                displace_coordinate(record.creditor_tower_lat, p, kLatMin, kLatMax, rng, diags);
            record.creditor_tower_lon =
                displace_coordinate(record.creditor_tower_lon, p, kLonMin, kLonMax, rng, diags);
            break;
        }
        case 2: {
            const int h = static_cast<int>(rng.uniform_int(0, 6));
            static const std::vector<int> kM = {0, 1, 4, 9, 16, 25};
            static const std::vector<int> kS = {1, 10, 20, 30, 40, 50};
            const int m = rng.pick(kM);
            const int s = rng.pick(kS);
            record.debitor_account_create_ts =
                record.payment_init_ts - type2_age_seconds(h, m, s);
            if (record.debitor_last_activity_ts < record.debitor_account_create_ts) {
                record.debitor_last_activity_ts = rng.uniform_int(
                    record.debitor_account_create_ts, record.payment_init_ts + 1);
            }
            record.debitor_amount = sample_lognormal(
                rng, spec_for(config.amount_anomalous, record.debitor_account_type, "anomalous"));
            record.creditor_amount =
                record.debitor_amount *
                exchange_rate(record.debitor_currency, record.creditor_currency);
            break;
        }
        case 3: {
            static const std::vector<int> kDays = {90, 120, 150, 180};
            const std::int64_t d = rng.pick(kDays);
            const std::int64_t jitter = rng.uniform_int(0, 86400);
            const std::int64_t last = record.payment_init_ts - d * 86400 - jitter;
            record.debitor_last_activity_ts = last;
            // Dormancy is the signal; pull creation back if needed to keep
            // create <= last_activity.
            if (record.debitor_account_create_ts > last) record.debitor_account_create_ts = last;
            break;
        }
        case 4: {
            const auto [lo, hi] = anomalous_activity_range(record.debitor_account_type);
            record.debitor_activity_events_30d = rng.uniform_int(lo, hi);
            break;
        }
        default:
            throw std::invalid_argument("inject_anomaly: unknown anomaly type " +
                                        std::to_string(anomaly_type));
    }
    record.fraud_flag = 1;
    record.anomaly_types_applied.insert(anomaly_type);
}

FraudSelection select_fraud_rows(std::size_t dataset_size, double alpha, double beta,
                                 const std::set<std::size_t>& flagged_indices, Rng& rng,
                                 DiagCounters* diags) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("select_fraud_rows: beta out of range");
    if (!flagged_indices.empty() && *flagged_indices.rbegin() >= dataset_size)
        throw std::invalid_argument("select_fraud_rows: flagged index out of range");

    const auto n_total =
        static_cast<std::size_t>(std::ceil(static_cast<double>(dataset_size) * alpha));
    const auto n_f_requested =
        static_cast<std::size_t>(std::ceil(static_cast<double>(n_total) * beta));
    const std::size_t n_f = std::min(n_f_requested, flagged_indices.size());
    const std::size_t n_n = n_total - n_f_requested;

    FraudSelection sel;
    sel.degraded = n_f < n_f_requested;
    if (sel.degraded && diags) diags->bump("select_fraud_rows_degraded");

    std::vector<std::size_t> flagged(flagged_indices.begin(), flagged_indices.end());
    std::vector<std::size_t> clean;
    clean.reserve(dataset_size - flagged.size());
    for (std::size_t i = 0; i < dataset_size; ++i)
        if (!flagged_indices.count(i)) clean.push_back(i);

    if (n_n > clean.size())
        throw std::invalid_argument("select_fraud_rows: not enough clean rows for n_N");

    for (std::size_t i : rng.sample_indices(flagged.size(), n_f))
        sel.from_flagged.push_back(flagged[i]);
    for (std::size_t i : rng.sample_indices(clean.size(), n_n))
        sel.from_clean.push_back(clean[i]);
    return sel;
}

void apply_label_noise(std::vector<TransactionRecord*>& records, double p_apply, Rng& rng) {
    if (!(p_apply > 0.0 && p_apply <= 1.0))
        throw std::invalid_argument("apply_label_noise: p_apply must be in (0, 1]");
    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i]->fraud_flag == 1) flagged.push_back(i);
    const auto n_flip = static_cast<std::size_t>(
        std::floor((1.0 - p_apply) * static_cast<double>(flagged.size())));
    for (std::size_t i : rng.sample_indices(flagged.size(), n_flip))
        records[flagged[i]]->fraud_flag = 0;
}

void apply_label_noise(std::vector<TransactionRecord>& records, double p_apply, Rng& rng) {
    std::vector<TransactionRecord*> ptrs;
    ptrs.reserve(records.size());
    for (auto& r : records) ptrs.push_back(&r);
    apply_label_noise(ptrs, p_apply, rng);
}

DatasetPartitions partition_dataset(std::vector<TransactionRecord> records,
                                    const PartitionRatios& ratios, std::uint64_t seed) {
    const double sum = ratios.scaling + ratios.train + ratios.test;
    if (!(ratios.scaling > 0.0 && ratios.train > 0.0 && ratios.test > 0.0) ||
        std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("partition_dataset: ratios must be positive and sum to 1");

    Rng rng(seed);
    rng.shuffle(records);

    const std::size_t n = records.size();
    const auto n_scaling = static_cast<std::size_t>(std::floor(ratios.scaling * static_cast<double>(n)));
    const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(n)));
    const std::size_t n_test = n - n_scaling - n_train;
    if (n_scaling == 0 || n_train == 0 || n_test == 0)
        throw std::invalid_argument("partition_dataset: a partition would be empty");

    DatasetPartitions parts;
    auto it = std::make_move_iterator(records.begin());
    parts.scaling.assign(it, it + static_cast<std::ptrdiff_t>(n_scaling));
    it += static_cast<std::ptrdiff_t>(n_scaling);
    parts.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
    it += static_cast<std::ptrdiff_t>(n_train);
    parts.test.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
    return parts;
}

namespace {

void run_injection_passes(std::vector<TransactionRecord*>& pool, const std::set<int>& types,
                          const SiteConfig& cfg, Rng& rng, DiagCounters& diags) {
    std::set<std::size_t> flagged;
    for (int t : types) {
        auto sel = select_fraud_rows(pool.size(), cfg.fraud_fraction, cfg.overlap_fraction,
                                     flagged, rng, &diags);
        for (std::size_t idx : sel.from_flagged) {
            inject_anomaly(*pool[idx], t, cfg, rng, diags);
            flagged.insert(idx);
        }
        for (std::size_t idx : sel.from_clean) {
            inject_anomaly(*pool[idx], t, cfg, rng, diags);
            flagged.insert(idx);
        }
    }
}

}  // namespace

SiteDataset generate_site_dataset(const SiteConfig& config, const PartitionRatios& ratios,
                                  std::int64_t clock_now) {
    config.validate();
    SiteDataset out;
    Rng root(config.seed);

    Rng base_rng = root.fork("base");
    auto records = generate_base_records(config, clock_now, base_rng, out.diags);
    out.partitions =
        partition_dataset(std::move(records), ratios, derive_seed(config.seed, "partition"));

    std::vector<TransactionRecord*> train_pool;
    train_pool.reserve(out.partitions.scaling.size() + out.partitions.train.size());
    for (auto& r : out.partitions.scaling) train_pool.push_back(&r);
    for (auto& r : out.partitions.train) train_pool.push_back(&r);
    Rng train_rng = root.fork("inject-train");
    run_injection_passes(train_pool, config.anomaly_types_train, config, train_rng, out.diags);

    std::vector<TransactionRecord*> test_pool;
    test_pool.reserve(out.partitions.test.size());
    for (auto& r : out.partitions.test) test_pool.push_back(&r);
    Rng eval_rng = root.fork("inject-eval");
    run_injection_passes(test_pool, config.anomaly_types_eval, config, eval_rng, out.diags);

    Rng noise_rng = root.fork("label-noise");
    apply_label_noise(train_pool, config.label_apply_prob, noise_rng);
    apply_label_noise(test_pool, config.label_apply_prob, noise_rng);
    return out;
}

}  // namespace fedfraud::datagen

#include "fedfraud/cli/experiment.hpp"

#include <cmath>
#include <fstream>

#include "fedfraud/common/hash.hpp"
#include "fedfraud/common/rng.hpp"
#include "fedfraud/common/timefmt.hpp"

namespace fedfraud::cli {

namespace {

using nlohmann::json;

json to_json(const datagen::LogNormalSpec& s) { return {{"mean", s.mean_arith}, {"sd", s.sd_arith}}; }

datagen::LogNormalSpec lognormal_from_json(const json& j) {
    return {j.at("mean").get<double>(), j.at("sd").get<double>()};
}

json amounts_to_json(const std::map<datagen::AccountType, datagen::LogNormalSpec>& m) {
    json out = json::object();
    for (const auto& [type, spec] : m) out[datagen::to_string(type)] = to_json(spec);
    return out;
}

std::map<datagen::AccountType, datagen::LogNormalSpec> amounts_from_json(const json& j) {
    std::map<datagen::AccountType, datagen::LogNormalSpec> out;
    for (const auto& [key, value] : j.items())
        out[datagen::account_type_from_string(key)] = lognormal_from_json(value);
    return out;
}

json site_to_json(const datagen::SiteConfig& s) {
    json j;
    j["site_id"] = s.site_id;
    j["n_records"] = s.n_records;
    j["seed"] = s.seed;
    j["amount_normal"] = amounts_to_json(s.amount_normal);
    j["amount_anomalous"] = amounts_to_json(s.amount_anomalous);
    j["tower_perturbation"] = {s.tower_perturbation.first, s.tower_perturbation.second};
    j["type1_push_factor"] = s.type1_push_factor;
    j["anomaly_types_train"] = s.anomaly_types_train;
    j["anomaly_types_eval"] = s.anomaly_types_eval;
    j["fraud_fraction"] = s.fraud_fraction;
    j["overlap_fraction"] = s.overlap_fraction;
    j["label_apply_prob"] = s.label_apply_prob;
    return j;
}

datagen::SiteConfig site_from_json(const json& j, std::uint64_t master_seed) {
    datagen::SiteConfig s;
    s.site_id = j.at("site_id").get<std::string>();
    s.n_records = j.at("n_records").get<std::size_t>();
    s.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>()
                                : derive_seed(master_seed, s.site_id);
    s.amount_normal = amounts_from_json(j.at("amount_normal"));
    s.amount_anomalous = amounts_from_json(j.at("amount_anomalous"));
    const auto tp = j.at("tower_perturbation");
    s.tower_perturbation = {tp.at(0).get<double>(), tp.at(1).get<double>()};
    s.type1_push_factor = j.at("type1_push_factor").get<double>();
    s.anomaly_types_train = j.at("anomaly_types_train").get<std::set<int>>();
    s.anomaly_types_eval = j.at("anomaly_types_eval").get<std::set<int>>();
    s.fraud_fraction = j.value("fraud_fraction", s.fraud_fraction);
    s.overlap_fraction = j.value("overlap_fraction", s.overlap_fraction);
    s.label_apply_prob = j.value("label_apply_prob", s.label_apply_prob);
    return s;
}

json train_to_json(const fedcore::TrainConfig& t) {
    json j;
    j["learning_rate"] = t.learning_rate;
    j["epochs_per_round"] = t.epochs_per_round;
    j["batch_size"] = t.batch_size;
    j["focal_gamma"] = t.focal_gamma;
    if (t.focal_alpha) j["focal_alpha"] = {t.focal_alpha->first, t.focal_alpha->second};
    j["optimizer"] = t.optimizer == nn::OptimizerKind::Adam ? "adam" : "sgd";
    j["round_lr_decay"] = t.round_lr_decay;
    return j;
}

fedcore::TrainConfig train_from_json(const json& j) {
    fedcore::TrainConfig t;
    t.learning_rate = j.value("learning_rate", t.learning_rate);
    t.epochs_per_round = j.value("epochs_per_round", t.epochs_per_round);
    t.batch_size = j.value("batch_size", t.batch_size);
    t.focal_gamma = j.value("focal_gamma", t.focal_gamma);
    if (j.contains("focal_alpha")) {
        const auto& a = j.at("focal_alpha");
        t.focal_alpha = std::make_pair(a.at(0).get<double>(), a.at(1).get<double>());
    }
    t.round_lr_decay = j.value("round_lr_decay", t.round_lr_decay);
    const std::string opt = j.value("optimizer", "adam");
    if (opt == "adam") t.optimizer = nn::OptimizerKind::Adam;
    else if (opt == "sgd") t.optimizer = nn::OptimizerKind::Sgd;
    else throw std::invalid_argument("unknown optimizer: " + opt);
    return t;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (output_dir.empty()) throw std::invalid_argument("ExperimentConfig: empty output_dir");
    federation.validate();
    const double sum = ratios.scaling + ratios.train + ratios.test;
    if (!(ratios.scaling > 0 && ratios.train > 0 && ratios.test > 0) ||
        std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("ExperimentConfig: partition ratios must be positive and sum to 1");
}

nlohmann::json to_json(const ExperimentConfig& c) {
    json j;
    j["output_dir"] = c.output_dir;
    j["transport"] = c.transport == TransportMode::InProcess ? "inprocess" : "tcp";
    j["clock_now"] = iso8601_utc(c.clock_now);
    j["partition_ratios"] = {
        {"scaling", c.ratios.scaling}, {"train", c.ratios.train}, {"test", c.ratios.test}};
    json fed;
    fed["algorithm"] = fedcore::to_string(c.federation.algorithm);
    fed["rounds"] = c.federation.rounds;
    fed["server_lr"] = c.federation.server_lr;
    fed["server_momentum"] = c.federation.server_momentum;
    fed["prox_mu"] = c.federation.prox_mu;
    fed["seed"] = c.federation.seed;
    fed["train"] = train_to_json(c.federation.train);
    if (c.federation.dp) {
        fed["dp"] = {{"target_epsilon", c.federation.dp->target_epsilon},
                     {"target_delta", c.federation.dp->target_delta},
                     {"max_grad_norm", c.federation.dp->max_grad_norm}};
    }
    j["federation"] = fed;
    json sites = json::array();
    for (const auto& s : c.federation.sites) sites.push_back(site_to_json(s));
    j["sites"] = sites;
    return j;
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.output_dir = j.value("output_dir", c.output_dir);
    const std::string mode = j.value("transport", "inprocess");
    if (mode == "inprocess") c.transport = TransportMode::InProcess;
    else if (mode == "tcp") c.transport = TransportMode::Tcp;
    else throw std::invalid_argument("unknown transport mode: " + mode);
    c.clock_now = parse_iso8601_utc(j.value("clock_now", "2026-01-01T00:00:00Z"));
    if (j.contains("partition_ratios")) {
        const auto& r = j.at("partition_ratios");
        c.ratios.scaling = r.at("scaling").get<double>();
        c.ratios.train = r.at("train").get<double>();
        c.ratios.test = r.at("test").get<double>();
    }
    const auto& fed = j.at("federation");
    c.federation.algorithm = fedcore::algorithm_from_string(fed.value("algorithm", "fedavg"));
    c.federation.rounds = fed.value("rounds", c.federation.rounds);
    c.federation.server_lr = fed.value("server_lr", c.federation.server_lr);
    c.federation.server_momentum = fed.value("server_momentum", c.federation.server_momentum);
    c.federation.prox_mu = fed.value("prox_mu", c.federation.prox_mu);
    c.federation.seed = fed.value("seed", c.federation.seed);
    if (fed.contains("train")) c.federation.train = train_from_json(fed.at("train"));
    if (fed.contains("dp")) {
        fedcore::DpConfig dp;
        dp.target_epsilon = fed.at("dp").at("target_epsilon").get<double>();
        dp.target_delta = fed.at("dp").value("target_delta", dp.target_delta);
        dp.max_grad_norm = fed.at("dp").value("max_grad_norm", dp.max_grad_norm);
        c.federation.dp = dp;
    }
    for (const auto& sj : j.at("sites"))
        c.federation.sites.push_back(site_from_json(sj, c.federation.seed));
    c.config_hash = config_fingerprint(c);
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return experiment_from_json(j);
}

void save_experiment_config(const std::string& path, const ExperimentConfig& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config: " + path);
    out << to_json(config).dump(2) << "\n";
}

std::string config_fingerprint(const ExperimentConfig& config) {
    json j = to_json(config);
    j.erase("output_dir");
    return hash_hex(j.dump());
}

ExperimentConfig default_experiment(std::size_t records_per_site, std::uint64_t seed,
                                    double fraud_fraction) {
    ExperimentConfig c;
    c.clock_now = parse_iso8601_utc("2026-01-01T00:00:00Z");
    c.federation.seed = seed;

    struct SiteSeed {
        const char* id;
        double normal_mean;  // CHECKING anchor
        double perturb_lo, perturb_hi;
        double push;
        std::set<int> train_types;
    };
    const std::vector<SiteSeed> suite = {
        {"site-a", 20000.0, -0.75, 1.25, -2.0, {1, 3}},
        {"site-b", 35000.0, -1.5, 1.5, -3.0, {2, 4}},
        {"site-c", 60000.0, -2.0, 2.0, -4.0, {1, 4}},
        {"site-d", 100000.0, -5.0, 5.0, -5.0, {2, 3}},
        {"site-e", 150000.0, -10.0, 10.0, -8.0, {1, 2}},
    };

    for (const auto& s : suite) {
        datagen::SiteConfig site;
        site.site_id = s.id;
        site.n_records = records_per_site;
        site.seed = derive_seed(seed, s.id);
        // Account-type structure: business books run an order of magnitude
        // larger, savings half the checking scale; sd = mean/2 throughout.
        const std::map<datagen::AccountType, double> scale = {
            {datagen::AccountType::Business, 10.0},
            {datagen::AccountType::Checking, 1.0},
            {datagen::AccountType::Savings, 0.5},
        };
        for (const auto& [type, mult] : scale) {
            const double mean = s.normal_mean * mult;
            site.amount_normal[type] = {mean, 0.5 * mean};
            site.amount_anomalous[type] = {5.0 * mean, 2.5 * mean};
        }
        site.tower_perturbation = {s.perturb_lo, s.perturb_hi};
        site.type1_push_factor = s.push;
        site.anomaly_types_train = s.train_types;
        site.anomaly_types_eval = {1, 2, 3, 4};
        site.fraud_fraction = fraud_fraction;
        site.overlap_fraction = 0.5;
        site.label_apply_prob = 0.9;
        c.federation.sites.push_back(std::move(site));
    }
    c.config_hash = config_fingerprint(c);
    return c;
}

}  // namespace fedfraud::cli

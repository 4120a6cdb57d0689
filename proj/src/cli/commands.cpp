#include "fedfraud/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "fedfraud/common/csv.hpp"
#include "fedfraud/common/hash.hpp"
#include "fedfraud/datagen/csv_io.hpp"
#include "fedfraud/datagen/generator.hpp"
#include "fedfraud/attribution/shap.hpp"
#include "fedfraud/eval/report_io.hpp"
#include "fedfraud/fedcore/runner.hpp"
#include "fedfraud/nn/loss.hpp"
#include "fedfraud/nn/network.hpp"
#include "fedfraud/nn/serialize.hpp"
#include "fedfraud/transport/client.hpp"
#include "fedfraud/transport/server.hpp"

namespace fedfraud::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json round_to_json(const fedcore::RoundRecord& r, const std::string& algorithm) {
    json j;
    j["round"] = r.round_index;
    j["algorithm"] = algorithm;
    j["global_params_hash"] = r.global_params_hash;
    j["mean_f1"] = r.mean_f1;
    j["duration_s"] = r.duration_s;
    json per_site = json::object();
    for (const auto& [site, report] : r.per_site) per_site[site] = eval::to_json(report);
    j["per_site"] = per_site;
    if (!r.epsilon_by_site.empty()) {
        json eps = json::object();
        for (const auto& [site, e] : r.epsilon_by_site) eps[site] = e;
        j["epsilon_by_site"] = eps;
    }
    return j;
}

void write_history_jsonl(const std::string& path, const std::vector<fedcore::RoundRecord>& history,
                         const std::string& algorithm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write history: " + path);
    for (const auto& r : history) out << round_to_json(r, algorithm).dump() << "\n";
}

std::vector<datagen::DatasetPartitions> load_all_partitions(const ExperimentConfig& config) {
    std::vector<datagen::DatasetPartitions> parts(config.federation.sites.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        workers.emplace_back([&, i] {
            parts[i] = fedcore::load_site_partitions(config.data_dir(),
                                                     config.federation.sites[i].site_id);
        });
    }
    for (auto& w : workers) w.join();
    return parts;
}

std::vector<fedcore::SiteData> prepare_all_sites(const ExperimentConfig& config,
                                                 const std::vector<datagen::DatasetPartitions>& parts) {
    std::vector<fedcore::SiteData> sites(parts.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        workers.emplace_back([&, i] {
            sites[i] =
                fedcore::prepare_site_data(config.federation.sites[i].site_id, parts[i]);
        });
    }
    for (auto& w : workers) w.join();
    return sites;
}

double final_epsilon(const std::vector<fedcore::RoundRecord>& history) {
    if (history.empty() || history.back().epsilon_by_site.empty()) return 0.0;
    double eps = 0.0;
    for (const auto& [site, e] : history.back().epsilon_by_site) eps = std::max(eps, e);
    return eps;
}

void write_summary(const std::string& path, const json& summary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary: " + path);
    out << summary.dump(2) << "\n";
}

json checkpoint_meta(const ExperimentConfig& config, const std::string& algorithm,
                     double final_f1, double epsilon, const std::string& site = "") {
    json meta;
    meta["config_hash"] = config_fingerprint(config);
    meta["algorithm"] = algorithm;
    meta["rounds"] = config.federation.rounds;
    meta["seed"] = config.federation.seed;
    meta["final_mean_f1"] = final_f1;
    if (epsilon > 0.0) meta["epsilon"] = epsilon;
    if (!site.empty()) meta["site"] = site;
    return meta;
}

struct EvalContext {
    std::vector<std::string> site_ids;
    std::vector<features::FeaturizedSet> tests;  // scaled per the checkpoint's regime
};

// Rebuilds the evaluation inputs exactly as the checkpointed regime saw
// them: pooled scaler for central, per-site scalers otherwise.
EvalContext build_eval_context(const ExperimentConfig& config, const json& meta,
                               const std::string& scaler_dir) {
    EvalContext ctx;
    const std::string algorithm = meta.at("algorithm").get<std::string>();
    const auto parts = load_all_partitions(config);

    if (algorithm == "central") {
        const auto scaler = features::load_scaler(scaler_dir + "/scaler_pooled.json");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            auto test = features::featurize(parts[i].test);
            features::apply_scaler(test.x, scaler);
            ctx.site_ids.push_back(config.federation.sites[i].site_id);
            ctx.tests.push_back(std::move(test));
        }
        return ctx;
    }

    const std::string only_site = meta.contains("site") ? meta.at("site").get<std::string>() : "";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& site = config.federation.sites[i].site_id;
        if (!only_site.empty() && site != only_site) continue;
        const auto scaler = features::load_scaler(scaler_dir + "/scaler_" + site + ".json");
        auto test = features::featurize(parts[i].test);
        features::apply_scaler(test.x, scaler);
        ctx.site_ids.push_back(site);
        ctx.tests.push_back(std::move(test));
    }
    if (ctx.tests.empty()) throw std::runtime_error("no evaluable sites for this checkpoint");
    return ctx;
}

void require_matching_hash(const ExperimentConfig& config, const json& meta,
                           const std::string& checkpoint_path) {
    const std::string expected = config_fingerprint(config);
    const std::string got = meta.value("config_hash", "");
    if (expected != got)
        throw std::invalid_argument("checkpoint " + checkpoint_path +
                                    " was produced by a different config (hash " + got +
                                    " != " + expected + "); refusing to evaluate");
}

}  // namespace

void cmd_generate(const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.data_dir());
    save_experiment_config(config.output_dir + "/config.json", config);

    const auto& sites = config.federation.sites;
    std::vector<datagen::SiteDataset> datasets(sites.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        workers.emplace_back([&, i] {
            datasets[i] = datagen::generate_site_dataset(sites[i], config.ratios, config.clock_now);
        });
    }
    for (auto& w : workers) w.join();

    Fnv1a dataset_hash;
    std::map<std::string, datagen::SiteStats> stats;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const std::string& id = sites[i].site_id;
        const auto& parts = datasets[i].partitions;
        const std::string base = config.data_dir() + "/" + id;
        datagen::write_records_csv(base + "_scaling.csv", parts.scaling);
        datagen::write_records_csv(base + "_train.csv", parts.train);
        datagen::write_records_csv(base + "_test.csv", parts.test);
        for (const char* part : {"_scaling.csv", "_train.csv", "_test.csv"}) {
            std::ifstream in(base + part, std::ios::binary);
            std::string bytes((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
            dataset_hash.update(bytes);
        }
        stats[id] = datagen::compute_site_stats(parts);
    }

    datagen::write_manifest(config.data_dir() + "/manifest.json", config_fingerprint(config),
                            config.federation.seed, config.clock_now, stats, dataset_hash.hex());

    std::cout << "generated " << sites.size() << " site datasets under " << config.data_dir()
              << "\n";
    for (const auto& [site, s] : stats) {
        std::cout << "  " << site << ": fraud rate (train+test, post label-noise) "
                  << s.fraud_rate_train_test * 100.0 << "%\n";
    }
}

void cmd_train(const ExperimentConfig& config) {
    config.validate();
    const std::string algorithm = fedcore::to_string(config.federation.algorithm);
    const std::string dir = config.train_dir();
    fs::create_directories(dir);

    const auto parts = load_all_partitions(config);

    json summary;
    summary["config_hash"] = config_fingerprint(config);
    summary["algorithm"] = algorithm;
    summary["rounds"] = config.federation.rounds;

    if (config.federation.algorithm == fedcore::Algorithm::Central) {
        std::vector<std::string> ids;
        std::vector<const datagen::DatasetPartitions*> part_ptrs;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            ids.push_back(config.federation.sites[i].site_id);
            part_ptrs.push_back(&parts[i]);
        }
        const auto central = fedcore::prepare_central_data(ids, part_ptrs);
        features::save_scaler(dir + "/scaler_pooled.json", central.scaler);

        const auto result = fedcore::run_central(config.federation, central);
        write_history_jsonl(dir + "/history.jsonl", result.history, algorithm);
        const double f1 = result.history.empty() ? 0.0 : result.history.back().mean_f1;
        const double eps = final_epsilon(result.history);
        nn::save_checkpoint(dir + "/checkpoint.bin", result.final_model,
                            checkpoint_meta(config, algorithm, f1, eps));
        summary["final_mean_f1"] = f1;
        if (eps > 0.0) summary["epsilon"] = eps;
        std::cout << algorithm << ": final mean per-type F1 = " << f1 << "\n";
    } else if (config.federation.algorithm == fedcore::Algorithm::Local) {
        auto sites = prepare_all_sites(config, parts);
        for (const auto& s : sites) features::save_scaler(dir + "/scaler_" + s.site_id + ".json", s.scaler);

        const auto result = fedcore::run_local(config.federation, sites);
        json rows = json::object();
        for (const auto& [site, history] : result.history_by_site) {
            write_history_jsonl(dir + "/history_" + site + ".jsonl", history, algorithm);
            const double f1 = history.empty() ? 0.0 : history.back().mean_f1;
            const double eps = final_epsilon(history);
            nn::save_checkpoint(dir + "/checkpoint_" + site + ".bin",
                                result.final_models.at(site),
                                checkpoint_meta(config, algorithm, f1, eps, site));
            rows[site] = f1;
            std::cout << algorithm << " " << site << ": final mean per-type F1 = " << f1 << "\n";
        }
        summary["final_mean_f1_by_site"] = rows;
    } else {
        auto sites = prepare_all_sites(config, parts);
        for (const auto& s : sites) features::save_scaler(dir + "/scaler_" + s.site_id + ".json", s.scaler);

        fedcore::InProcessChannel channel(config.federation, std::move(sites));
        const auto result = fedcore::run_federation(config.federation, channel);
        write_history_jsonl(dir + "/history.jsonl", result.history, algorithm);
        const double f1 = result.history.empty() ? 0.0 : result.history.back().mean_f1;
        const double eps = final_epsilon(result.history);
        nn::save_checkpoint(dir + "/checkpoint.bin", result.final_model,
                            checkpoint_meta(config, algorithm, f1, eps));
        summary["final_mean_f1"] = f1;
        if (eps > 0.0) summary["epsilon"] = eps;

        std::vector<double> f1_history;
        for (const auto& r : result.history) f1_history.push_back(r.mean_f1);
        if (const auto conv = eval::convergence_round(f1_history, 0.005, 3))
            summary["convergence_round"] = *conv;
        std::cout << algorithm << ": final mean per-type F1 = " << f1;
        if (eps > 0.0) std::cout << " (epsilon spent = " << eps << ")";
        std::cout << "\n";
    }

    write_summary(dir + "/summary.json", summary);
}

void cmd_evaluate(const ExperimentConfig& config, const std::string& checkpoint_path) {
    config.validate();
    const auto ck = nn::load_checkpoint(checkpoint_path);
    require_matching_hash(config, ck.meta, checkpoint_path);

    const std::string algorithm = ck.meta.at("algorithm").get<std::string>();
    const std::string scaler_dir = fs::path(checkpoint_path).parent_path().string();
    const std::string dir = config.output_dir + "/eval_" + algorithm;
    fs::create_directories(dir);

    const EvalContext ctx = build_eval_context(config, ck.meta, scaler_dir);

    json evaluation;
    evaluation["config_hash"] = config_fingerprint(config);
    evaluation["algorithm"] = algorithm;
    for (std::size_t i = 0; i < ctx.tests.size(); ++i) {
        const std::string& site = ctx.site_ids[i];
        const auto& test = ctx.tests[i];
        const Matrix logits = nn::forward_logits(ck.model, test.x);
        std::vector<int> predicted(logits.rows);
        for (std::size_t r = 0; r < logits.rows; ++r)
            predicted[r] = logits.at(r, 1) > logits.at(r, 0) ? 1 : 0;
        const auto scores = nn::fraud_scores(logits);

        const auto report = eval::evaluate_predictions(predicted, scores, test.labels, test.type_tags);
        evaluation["sites"][site] = eval::to_json(report);

        eval::write_pr_curve_csv(dir + "/pr_" + site + ".csv", eval::pr_curve(scores, test.labels));

        fedfraud::CsvWriter cm_csv(dir + "/confusion_" + site + ".csv");
        cm_csv.write_row({"subset", "tp", "fp", "fn", "tn"});
        const auto& cm = report.cm;
        cm_csv.write_row({"all", std::to_string(cm.tp), std::to_string(cm.fp),
                          std::to_string(cm.fn), std::to_string(cm.tn)});
        for (const auto& [t, tcm] :
             eval::per_type_confusion(predicted, test.labels, test.type_tags)) {
            cm_csv.write_row({"type" + std::to_string(t), std::to_string(tcm.tp),
                              std::to_string(tcm.fp), std::to_string(tcm.fn),
                              std::to_string(tcm.tn)});
        }

        std::cout << "eval " << site << ": mean per-type F1 = " << report.mean_per_type_f1
                  << ", AUPRC = " << report.auprc << "\n";
    }
    write_summary(dir + "/evaluation.json", evaluation);
}

void cmd_attribute(const ExperimentConfig& config, const std::string& checkpoint_path,
                   std::size_t n_baselines, std::size_t k_samples) {
    config.validate();
    const auto ck = nn::load_checkpoint(checkpoint_path);
    require_matching_hash(config, ck.meta, checkpoint_path);

    const std::string algorithm = ck.meta.at("algorithm").get<std::string>();
    const std::string scaler_dir = fs::path(checkpoint_path).parent_path().string();
    const std::string dir = config.output_dir + "/attribution_" + algorithm;
    fs::create_directories(dir);

    const EvalContext ctx = build_eval_context(config, ck.meta, scaler_dir);

    // Pool the scaled test rows from every evaluable site.
    std::size_t total_rows = 0;
    for (const auto& t : ctx.tests) total_rows += t.x.rows;
    Matrix pooled(total_rows, features::feature_count());
    std::vector<int> labels;
    std::vector<std::set<int>> tags;
    std::size_t at = 0;
    for (const auto& t : ctx.tests) {
        std::copy(t.x.data.begin(), t.x.data.end(), pooled.data.begin() + at * pooled.cols);
        at += t.x.rows;
        labels.insert(labels.end(), t.labels.begin(), t.labels.end());
        tags.insert(tags.end(), t.type_tags.begin(), t.type_tags.end());
    }

    Rng rng(derive_seed(config.federation.seed, "attribution"));
    const std::size_t n_base = std::min<std::size_t>(n_baselines, pooled.rows);
    if (n_base == 0) throw std::runtime_error("cmd_attribute: no test rows available");
    Matrix baselines(n_base, pooled.cols);
    const auto base_idx = rng.sample_indices(pooled.rows, n_base);
    for (std::size_t r = 0; r < n_base; ++r) {
        const auto src = pooled.row(base_idx[r]);
        std::copy(src.begin(), src.end(), baselines.row(r).begin());
    }

    const auto subset_inputs = [&](auto&& keep) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < pooled.rows; ++i)
            if (keep(i)) idx.push_back(i);
        Matrix m(idx.size(), pooled.cols);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const auto src = pooled.row(idx[r]);
            std::copy(src.begin(), src.end(), m.row(r).begin());
        }
        return m;
    };

    const Matrix fraud_inputs = subset_inputs([&](std::size_t i) { return labels[i] == 1; });
    if (fraud_inputs.rows == 0) throw std::runtime_error("cmd_attribute: no fraud rows to attribute");
    auto all_report = attribution::gradient_shap(ck.model, fraud_inputs, baselines, k_samples, rng);
    attribution::write_report(dir, "all", all_report);
    std::cout << "attribution (all fraud): top feature = " << all_report.ranking.front().first
              << "\n";

    for (int t = 1; t <= 4; ++t) {
        const Matrix inputs = subset_inputs(
            [&](std::size_t i) { return labels[i] == 1 && tags[i].count(t) > 0; });
        if (inputs.rows == 0) continue;
        auto report = attribution::gradient_shap(ck.model, inputs, baselines, k_samples, rng);
        attribution::write_report(dir, "type" + std::to_string(t), report);
        std::cout << "attribution (type " << t << "): top feature = " << report.ranking.front().first
                  << "\n";
    }
}

void cmd_account(double q, double sigma, std::size_t steps, double delta) {
    const auto grid = dp::default_order_grid();
    const auto res = dp::epsilon_for(q, sigma, steps, delta, grid);
    json out;
    out["q"] = q;
    out["sigma"] = sigma;
    out["steps"] = steps;
    out["delta"] = delta;
    out["epsilon"] = res.epsilon;
    out["best_order"] = res.best_order;
    std::cout << out.dump() << "\n";
}

void cmd_serve(const ExperimentConfig& config, std::uint16_t port) {
    config.validate();
    const std::string algorithm = fedcore::to_string(config.federation.algorithm);
    const std::string dir = config.train_dir();
    fs::create_directories(dir);

    transport::TcpListener listener(port);
    std::cout << "serving " << algorithm << " on 127.0.0.1:" << listener.bound_port() << " for "
              << config.federation.sites.size() << " sites\n";
    const auto result = transport::serve(config.federation, listener);

    write_history_jsonl(dir + "/history.jsonl", result.history, algorithm);
    const double f1 = result.history.empty() ? 0.0 : result.history.back().mean_f1;
    nn::save_checkpoint(dir + "/checkpoint.bin", result.final_model,
                        checkpoint_meta(config, algorithm, f1, final_epsilon(result.history)));

    // Scalers live client-side; refit them here only when the data is local,
    // so a later evaluate step can run.
    if (fs::exists(config.data_dir())) {
        const auto parts = load_all_partitions(config);
        const auto sites = prepare_all_sites(config, parts);
        for (const auto& s : sites)
            features::save_scaler(dir + "/scaler_" + s.site_id + ".json", s.scaler);
    }

    json summary;
    summary["config_hash"] = config_fingerprint(config);
    summary["algorithm"] = algorithm;
    summary["rounds"] = config.federation.rounds;
    summary["final_mean_f1"] = f1;
    write_summary(dir + "/summary.json", summary);
    std::cout << algorithm << " (tcp): final mean per-type F1 = " << f1 << "\n";
}

int cmd_client(const ExperimentConfig& config, const std::string& site_id,
               const std::string& host, std::uint16_t port) {
    config.validate();
    const auto parts = fedcore::load_site_partitions(config.data_dir(), site_id);
    auto site = fedcore::prepare_site_data(site_id, parts);

    transport::ClientOptions options;
    options.host = host;
    options.port = port;
    const auto outcome = transport::run_client(config.federation, std::move(site), options);
    switch (outcome) {
        case transport::ClientOutcome::Completed:
            std::cout << site_id << ": run complete\n";
            return 0;
        case transport::ClientOutcome::ServerError:
            std::cerr << site_id << ": server reported an error\n";
            return 3;
        case transport::ClientOutcome::ConnectionLost:
            std::cerr << site_id << ": connection lost\n";
            return 3;
    }
    return 2;
}

}  // namespace fedfraud::cli

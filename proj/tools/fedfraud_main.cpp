#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fedfraud/cli/commands.hpp"
#include "fedfraud/transport/frame.hpp"

namespace {

// Exit codes: 0 success, 1 validation, 2 runtime, 3 protocol.
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitProtocol = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    std::int64_t seed_override = -1;
    std::string mode_override;
};

fedfraud::cli::ExperimentConfig load_config(const CommonArgs& args) {
    auto config = fedfraud::cli::load_experiment_config(args.config_path);
    if (!args.out_override.empty()) config.output_dir = args.out_override;
    if (args.seed_override >= 0) {
        config.federation.seed = static_cast<std::uint64_t>(args.seed_override);
        config.config_hash = fedfraud::cli::config_fingerprint(config);
    }
    if (!args.mode_override.empty()) {
        if (args.mode_override == "inprocess")
            config.transport = fedfraud::cli::TransportMode::InProcess;
        else if (args.mode_override == "tcp")
            config.transport = fedfraud::cli::TransportMode::Tcp;
        else
            throw std::invalid_argument("unknown --mode: " + args.mode_override);
    }
    return config;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config JSON")->required();
    cmd->add_option("--out", args.out_override, "override output directory");
    cmd->add_option("--seed", args.seed_override, "override master seed");
    cmd->add_option("--mode", args.mode_override, "transport mode: inprocess|tcp");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"federated fraud-detection laboratory"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* generate = app.add_subcommand("generate", "generate per-site datasets");
    add_common(generate, args);

    auto* train = app.add_subcommand("train", "train the configured regime");
    add_common(train, args);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on the test partitions");
    add_common(evaluate, args);
    std::string checkpoint;
    evaluate->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

    auto* attribute = app.add_subcommand("attribute", "GradientShap feature attribution");
    add_common(attribute, args);
    std::string attr_checkpoint;
    std::size_t n_baselines = 500;
    std::size_t k_samples = 50;
    attribute->add_option("--checkpoint", attr_checkpoint, "checkpoint file")->required();
    attribute->add_option("--baselines", n_baselines, "baseline sample count");
    attribute->add_option("--k", k_samples, "interpolation samples per input");

    auto* account = app.add_subcommand("account", "offline (epsilon, delta) budget query");
    double q = 0.0, sigma = 0.0, delta = 1e-5;
    std::size_t steps = 1;
    account->add_option("--q", q, "sampling rate")->required();
    account->add_option("--sigma", sigma, "noise multiplier")->required();
    account->add_option("--steps", steps, "composed step count")->required();
    account->add_option("--delta", delta, "target delta");

    auto* serve = app.add_subcommand("serve", "run the federation server over TCP");
    add_common(serve, args);
    std::uint16_t port = 7311;
    serve->add_option("--port", port, "listen port (0 = ephemeral)");

    auto* client = app.add_subcommand("client", "run one federated client over TCP");
    add_common(client, args);
    std::string site_id, host = "127.0.0.1";
    std::uint16_t client_port = 7311;
    client->add_option("--site", site_id, "site id")->required();
    client->add_option("--host", host, "server host");
    client->add_option("--port", client_port, "server port");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) fedfraud::cli::cmd_generate(load_config(args));
        else if (*train) fedfraud::cli::cmd_train(load_config(args));
        else if (*evaluate) fedfraud::cli::cmd_evaluate(load_config(args), checkpoint);
        else if (*attribute)
            fedfraud::cli::cmd_attribute(load_config(args), attr_checkpoint, n_baselines, k_samples);
        else if (*account) fedfraud::cli::cmd_account(q, sigma, steps, delta);
        else if (*serve) fedfraud::cli::cmd_serve(load_config(args), port);
        else if (*client)
            return fedfraud::cli::cmd_client(load_config(args), site_id, host, client_port);
    } catch (const fedfraud::transport::ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qread/cli.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<int> n;
    std::optional<double> prior;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out_dir;
};

void add_common_flags(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config_path, "experiment config JSON file");
    sub->add_option("--n", flags.n, "polarization level (block length 2^n)");
    sub->add_option("--prior", flags.prior, "cell prior P_X(0)");
    sub->add_option("--seed", flags.seed, "override every seed in the config");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials");
    sub->add_option("--out-dir", flags.out_dir, "output directory");
}

qread::ExperimentConfig resolve_config(const CommonFlags& flags) {
    qread::ExperimentConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = qread::load_config_file(flags.config_path);
    }
    // flags win over the file
    if (flags.n) {
        cfg.n = *flags.n;
    }
    if (flags.prior) {
        cfg.cell.prior_p = *flags.prior;
    }
    if (flags.seed) {
        cfg.frozen_seed = *flags.seed;
        cfg.master_seed = *flags.seed;
        cfg.probe_seed = *flags.seed;
        cfg.verify_seed = *flags.seed;
    }
    if (flags.trials) {
        cfg.trials = *flags.trials;
    }
    if (flags.out_dir) {
        cfg.out_dir = *flags.out_dir;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar coding analysis for quantum reading"};
    app.require_subcommand(1);

    int transform_n = 0;
    CLI::App* transform = app.add_subcommand("transform", "print the combining matrix G_N");
    transform->add_option("n", transform_n, "level (N = 2^n)")->required();

    CommonFlags polarize_flags, construct_flags, simulate_flags, probe_flags, verify_flags;
    CLI::App* polarize =
        app.add_subcommand("polarize", "rate/reliability profile of the synthesized channels");
    add_common_flags(polarize, polarize_flags);
    CLI::App* construct = app.add_subcommand("construct", "select the information set");
    add_common_flags(construct, construct_flags);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo block-error simulation");
    add_common_flags(simulate, simulate_flags);
    CLI::App* probe_opt = app.add_subcommand("probe-opt", "optimize the probe state");
    add_common_flags(probe_opt, probe_flags);
    CLI::App* verify = app.add_subcommand("verify", "check every proposition's inequality");
    add_common_flags(verify, verify_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (transform->parsed()) {
            return qread::cmd_transform(transform_n, std::cout);
        }
        if (polarize->parsed()) {
            return qread::cmd_polarize(resolve_config(polarize_flags), std::cout);
        }
        if (construct->parsed()) {
            return qread::cmd_construct(resolve_config(construct_flags), std::cout);
        }
        if (simulate->parsed()) {
            return qread::cmd_simulate(resolve_config(simulate_flags), std::cout);
        }
        if (probe_opt->parsed()) {
            return qread::cmd_probe_opt(resolve_config(probe_flags), std::cout);
        }
        if (verify->parsed()) {
            return qread::cmd_verify(resolve_config(verify_flags), std::cout);
        }
    } catch (const std::exception& ex) {
        nlohmann::ordered_json failure;
        failure["error"] = ex.what();
        std::cerr << failure.dump() << "\n";
        return 2;
    }
    return 0;
}

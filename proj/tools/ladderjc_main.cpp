#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "ladderjc/scenario.hpp"

namespace sc = ladderjc::scenario;

namespace {

std::filesystem::path output_dir(const std::string& flag, const sc::ScenarioConfig& config) {
    if (!flag.empty()) return flag;
    if (config.outputs) return *config.outputs;
    if (const char* env = std::getenv("LADDERJC_OUT"); env && *env) return env;
    return "ladderjc_out";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-level ladder Jaynes-Cummings scenario runner"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_flag;
    bool strict = false;
    int threads = 1;
    long long seed = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario JSON file")->required();
        cmd->add_option("--out", out_flag, "output directory (overrides config and LADDERJC_OUT)");
        cmd->add_flag("--strict", strict, "treat truncation-tail warnings as errors (exit 3)");
        cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "reserved; the dynamics is deterministic");
    };
    CLI::App* evolve = app.add_subcommand("evolve", "populations.csv and photon_stats.csv over the time grid");
    CLI::App* wigner = app.add_subcommand("wigner", "Wigner grids at the requested times");
    CLI::App* verify = app.add_subcommand("verify", "block propagator against the full-space oracle");
    CLI::App* sweep = app.add_subcommand("sweep", "evolve over every alpha/level/detuning combination");
    for (CLI::App* cmd : {evolve, wigner, verify, sweep}) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : sc::kExitConfigError;
    }

    try {
        const sc::ScenarioConfig config = sc::load_config(config_path);
        sc::RunOptions opts;
        opts.out_dir = output_dir(out_flag, config);
        opts.strict = strict;
        opts.threads = threads;

        if (*evolve) return sc::run_evolve(config, opts, std::cerr);
        if (*wigner) return sc::run_wigner(config, opts, std::cerr);
        if (*verify) return sc::run_verify(config, opts, std::cout, std::cerr);
        return sc::run_sweep(config, opts, std::cerr);
    } catch (const sc::ConfigError& e) {
        std::cerr << "config error in " << config_path << ": " << e.what() << "\n";
        return sc::kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error in " << config_path << ": " << e.what() << "\n";
        return sc::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

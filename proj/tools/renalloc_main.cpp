#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "renalloc/config.hpp"
#include "renalloc/csv.hpp"
#include "renalloc/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStrictFallback = 3;
constexpr int kExitVerifyFailure = 4;

int cmd_allocate(const std::string& config_path, const std::string& out_path,
                 bool strict) {
    const renalloc::ExperimentConfig config = renalloc::parse_config(config_path);
    const renalloc::AllocateRun run = renalloc::run_allocate(config);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    renalloc::write_allocation_csv(out, run.instance, run.allocation);
    if (strict && run.allocation.scarcity_fallback) {
        std::cerr << "scarcity fallback fired: budget below the best user's rmid_k\n";
        return kExitStrictFallback;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, int figure, const std::string& out_dir) {
    const renalloc::ExperimentConfig config = renalloc::parse_config(config_path);
    renalloc::run_sweep(config, figure, out_dir);
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool per_user) {
    const renalloc::ExperimentConfig config = renalloc::parse_config(config_path);
    renalloc::run_simulate(config, out_dir, per_user);
    return kExitOk;
}

int cmd_verify(int n, int trials, int resolution, std::uint64_t seed,
               const std::string& out_path) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    const renalloc::VerifySummary summary =
        renalloc::run_verify(n, trials, resolution, seed, out);
    std::cout << "verify: " << summary.trials << " trials, " << summary.failures
              << " failures, max gap " << renalloc::format_number(summary.max_gap)
              << "\n";
    return summary.failures == 0 ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renewable-energy allocation for an OFDMA base station"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string out_dir;
    bool strict = false;
    bool per_user = false;
    int figure = 0;
    int n = 3;
    int trials = 100;
    int resolution = 2000;
    std::uint64_t seed = 1;

    CLI::App* allocate = app.add_subcommand("allocate", "Solve one allocation instance");
    allocate->add_option("--config", config_path, "Config file (JSON)")->required();
    allocate->add_option("--out", out_path, "Output CSV path")->required();
    allocate->add_flag("--strict", strict, "Exit 3 when the scarcity fallback fires");

    CLI::App* sweep = app.add_subcommand("sweep", "Reproduce a figure scenario");
    sweep->add_option("--config", config_path, "Config file (JSON)")->required();
    sweep->add_option("--figure", figure, "Figure id: 3, 4, 6, 7 or 8")->required();
    sweep->add_option("--out", out_dir, "Output directory")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "Run the slotted simulation");
    simulate->add_option("--config", config_path, "Config file (JSON)")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_flag("--per-user", per_user, "Also write per_user.csv");

    CLI::App* verify = app.add_subcommand("verify", "Check the heuristic against the grid oracle");
    verify->add_option("--n", n, "Users per instance (<= 4)");
    verify->add_option("--trials", trials, "Number of random instances");
    verify->add_option("--resolution", resolution, "Grid quanta (>= 100)");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--out", out_path, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*allocate) return cmd_allocate(config_path, out_path, strict);
        if (*sweep) return cmd_sweep(config_path, figure, out_dir);
        if (*simulate) return cmd_simulate(config_path, out_dir, per_user);
        if (*verify) return cmd_verify(n, trials, resolution, seed, out_path);
    } catch (const renalloc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

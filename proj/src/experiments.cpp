#include "renalloc/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "renalloc/csv.hpp"
#include "renalloc/oracle.hpp"

namespace renalloc {

namespace {

constexpr double kFigureSlopes[] = {0.1, 0.8, 3.2, 14.0};   // figure 3
constexpr double kScenarioSlopes[] = {0.1, 0.8, 14.0};      // figures 7, 8
constexpr int kCurveSamples = 401;

AllocationInstance instance_from_config(const ExperimentConfig& config, double r_tot) {
    const std::vector<double> q = materialize_q(config);
    Eigen::ArrayXd qa =
        Eigen::Map<const Eigen::ArrayXd>(q.data(), static_cast<long>(q.size()));
    return AllocationInstance(std::move(qa), config.utility.p, config.utility.rmid,
                              r_tot);
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

void allocation_rows(CsvWriter& writer, const AllocationInstance& instance,
                     const Allocation& allocation,
                     const std::string& row_prefix = {}) {
    for (int i = 0; i < instance.n(); ++i) {
        const int user = allocation.order[i];
        const UserProfile profile = instance.profile(user);
        const double r = allocation.r[user];
        std::vector<std::string> cells;
        if (!row_prefix.empty()) cells.push_back(row_prefix);
        cells.push_back(std::to_string(user));
        cells.push_back(format_number(instance.q[user]));
        cells.push_back(format_number(profile.rmid_raw));
        cells.push_back(format_number(r));
        cells.push_back(format_number(instance.q[user] * r));
        cells.push_back(format_number(eval_user(profile, r)));
        cells.push_back(format_number(marginal_user(profile, r)));
        writer.row(cells);
    }
}

void allocation_summary(CsvWriter& writer, const Allocation& allocation) {
    std::ostringstream summary;
    summary << "summary K=" << allocation.admitted << " u_a=";
    if (const auto level = allocation.water_level())
        summary << format_number(*level);
    else
        summary << "none";
    summary << " total_utility=" << format_number(allocation.total_utility)
            << " fallback=" << (allocation.scarcity_fallback ? 1 : 0);
    writer.comment(summary.str());
}

void write_figure3(const ExperimentConfig& config, std::ostream& out) {
    const double rmid = config.utility.rmid;
    CsvWriter writer(out);
    std::vector<std::string> header{"x"};
    for (double p : kFigureSlopes) header.push_back("p" + format_number(p));
    writer.header(header);
    for (int i = 0; i < kCurveSamples; ++i) {
        const double x = 2.0 * rmid * i / (kCurveSamples - 1);
        std::vector<std::string> cells{format_number(x)};
        for (double p : kFigureSlopes)
            cells.push_back(format_number(eval_base(SigmoidUtility(0.5, p, rmid), x)));
        writer.row(cells);
    }
}

void write_single_slope_figure(const ExperimentConfig& config, double p, double r_tot,
                               std::ostream& out) {
    ExperimentConfig pinned = config;
    pinned.utility.p = p;
    const AllocationInstance instance = instance_from_config(pinned, r_tot);
    const Allocation allocation = allocate(instance);
    write_allocation_csv(out, instance, allocation);
}

void write_slope_sweep_figure(const ExperimentConfig& config, double r_tot,
                              std::ostream& out) {
    CsvWriter writer(out);
    writer.header({"p", "user", "q", "rmid_k", "r", "effective", "utility", "marginal"});
    for (double p : kScenarioSlopes) {
        ExperimentConfig pinned = config;
        pinned.utility.p = p;
        const AllocationInstance instance = instance_from_config(pinned, r_tot);
        const Allocation allocation = allocate(instance);
        allocation_rows(writer, instance, allocation, format_number(p));
    }
}

SimConfig sim_config_from(const ExperimentConfig& config) {
    const SimSection& section = *config.sim;
    SimConfig sim;
    sim.p = config.utility.p;
    sim.rmid = config.utility.rmid;
    sim.tau = section.tau;
    sim.p_max = section.p_max;
    sim.battery = Battery(section.battery.initial, section.battery.capacity);
    if (section.harvest.has_trace) {
        sim.harvest = HarvestModel::from_trace(section.harvest.trace);
    } else {
        const DiurnalConfig& d = *section.harvest.diurnal;
        sim.harvest = HarvestModel::diurnal(
            {d.h_peak, d.day_length, d.daylight_fraction, d.noise_amplitude, d.seed});
    }
    const std::vector<double> q = materialize_q(config);
    sim.channel = birth_death_channel(section.channel.states,
                                      static_cast<int>(q.size()), section.channel.rho,
                                      config.q_min);
    sim.seed = section.channel.seed;
    return sim;
}

}  // namespace

AllocateRun run_allocate(const ExperimentConfig& config) {
    if (!config.budget.r_tot)
        throw ConfigError("budget.r_tot: allocate requires a single budget");
    AllocationInstance instance = instance_from_config(config, *config.budget.r_tot);
    Allocation allocation = allocate(instance);
    return AllocateRun{std::move(instance), std::move(allocation)};
}

void write_allocation_csv(std::ostream& out, const AllocationInstance& instance,
                          const Allocation& allocation) {
    CsvWriter writer(out);
    writer.header({"user", "q", "rmid_k", "r", "effective", "utility", "marginal"});
    allocation_rows(writer, instance, allocation);
    allocation_summary(writer, allocation);
}

void run_sweep(const ExperimentConfig& config, int figure, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::ofstream out = open_output(dir / ("figure" + std::to_string(figure) + ".csv"));
    switch (figure) {
        case 3: write_figure3(config, out); break;
        case 4: write_single_slope_figure(config, 0.1, 400.0, out); break;
        case 6: write_single_slope_figure(config, 14.0, 400.0, out); break;
        case 7: write_slope_sweep_figure(config, 1200.0, out); break;
        case 8: write_slope_sweep_figure(config, 100.0, out); break;
        default:
            throw ConfigError("figure: must be one of {3, 4, 6, 7, 8}");
    }
}

std::string slots_csv_text(const std::vector<SlotResult>& results) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.header({"slot", "harvest", "budget", "admitted", "total_utility",
                   "battery_after"});
    for (const SlotResult& slot : results) {
        writer.row({std::to_string(slot.slot), format_number(slot.harvested),
                    format_number(slot.budget), std::to_string(slot.admitted),
                    format_number(slot.total_utility),
                    format_number(slot.battery_after)});
    }
    return out.str();
}

void run_simulate(const ExperimentConfig& config, const std::string& out_dir,
                  bool force_per_user) {
    if (!config.sim) throw ConfigError("sim: section is required for simulate");
    const SimConfig sim = sim_config_from(config);
    const std::vector<SlotResult> results = sim_run(sim, config.sim->slots);

    const std::filesystem::path dir(out_dir);
    std::ofstream slots = open_output(dir / "slots.csv");
    slots << slots_csv_text(results);

    if (force_per_user || config.sim->per_user_output) {
        std::ofstream per_user = open_output(dir / "per_user.csv");
        CsvWriter writer(per_user);
        writer.header({"slot", "user", "q", "r", "effective", "utility"});
        for (const SlotResult& slot : results) {
            for (int k = 0; k < slot.r.size(); ++k) {
                const UserProfile profile(slot.q[k], sim.p, sim.rmid);
                writer.row({std::to_string(slot.slot), std::to_string(k),
                            format_number(slot.q[k]), format_number(slot.r[k]),
                            format_number(slot.q[k] * slot.r[k]),
                            format_number(eval_user(profile, slot.r[k]))});
            }
        }
    }
}

VerifySummary run_verify(int n, int trials, int resolution, std::uint64_t seed,
                         std::ostream& out) {
    if (n < 1 || n > 4)
        throw ConfigError("verify: n must be in [1, 4]");
    if (trials < 1) throw ConfigError("verify: trials must be >= 1");
    const GridSpec grid(resolution);

    CsvWriter writer(out);
    writer.header({"instance", "n", "p", "r_tot", "heuristic_utility", "grid_utility",
                   "gap", "constrained_utility", "constrained_gap", "concave",
                   "fallback", "budget_ok", "equal_marginal_ok", "prefix_ok",
                   "branch_ok", "pass"});

    std::mt19937_64 rng(seed);
    RandomInstanceOptions opts;
    opts.n = n;
    VerifySummary summary;
    summary.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        const AllocationInstance instance = random_instance(rng, opts);
        const VerificationReport report = verify_instance(instance, grid);
        writer.row({std::to_string(trial), std::to_string(n),
                    format_number(instance.p), format_number(instance.r_tot),
                    format_number(report.heuristic_utility),
                    format_number(report.grid_optimum_utility),
                    format_number(report.gap),
                    format_number(report.constrained_grid_optimum),
                    format_number(report.constrained_gap),
                    std::to_string(report.concave_regime ? 1 : 0),
                    std::to_string(report.scarcity_fallback ? 1 : 0),
                    std::to_string(report.budget_ok ? 1 : 0),
                    std::to_string(report.equal_marginal_ok ? 1 : 0),
                    std::to_string(report.prefix_ok ? 1 : 0),
                    std::to_string(report.branch_ok ? 1 : 0),
                    std::to_string(report.passed() ? 1 : 0)});
        if (!report.passed()) ++summary.failures;
        if (report.concave_regime) ++summary.concave_count;
        if (report.scarcity_fallback) ++summary.fallback_count;
        summary.max_gap = std::max(summary.max_gap, report.gap);
        summary.max_constrained_gap =
            std::max(summary.max_constrained_gap, report.constrained_gap);
    }
    std::ostringstream line;
    line << "summary trials=" << summary.trials << " failures=" << summary.failures
         << " concave=" << summary.concave_count
         << " fallback=" << summary.fallback_count
         << " max_gap=" << format_number(summary.max_gap) << " max_constrained_gap="
         << format_number(summary.max_constrained_gap);
    writer.comment(line.str());
    return summary;
}

}  // namespace renalloc

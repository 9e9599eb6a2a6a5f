#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "renalloc/allocator.hpp"
#include "renalloc/config.hpp"
#include "renalloc/harvest.hpp"

namespace renalloc {

struct AllocateRun {
    AllocationInstance instance;
    Allocation allocation;
};

// Solve the configured single-budget instance.
AllocateRun run_allocate(const ExperimentConfig& config);

// Rows sorted by q descending, one per user, plus a trailing summary
// comment (K, u_a, total utility, fallback flag).
void write_allocation_csv(std::ostream& out, const AllocationInstance& instance,
                          const Allocation& allocation);

// Figure presets. 3: base utility curves over four slopes; 4 and 6:
// per-user allocations at r_tot = 400 with p = 0.1 and p = 14; 7 and 8:
// allocations across p in {0.1, 0.8, 14} at r_tot = 1200 and 100.
// Writes figure<id>.csv into out_dir; throws ConfigError on unknown ids.
void run_sweep(const ExperimentConfig& config, int figure, const std::string& out_dir);

// Slotted simulation; writes slots.csv and, when enabled, per_user.csv.
void run_simulate(const ExperimentConfig& config, const std::string& out_dir,
                  bool force_per_user = false);

// Render a simulation to CSV text (used for byte-identity checks).
std::string slots_csv_text(const std::vector<SlotResult>& results);

struct VerifySummary {
    int trials = 0;
    int failures = 0;
    int concave_count = 0;
    int fallback_count = 0;
    double max_gap = 0.0;
    double max_constrained_gap = 0.0;
};

// Seeded random instances through verify_instance, one CSV row each.
VerifySummary run_verify(int n, int trials, int resolution, std::uint64_t seed,
                         std::ostream& out);

}  // namespace renalloc

#pragma once

#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "renalloc/allocator.hpp"

namespace renalloc {

// Budget discretization for the brute-force search.
struct GridSpec {
    int resolution;  // number of budget quanta, >= 100

    explicit GridSpec(int resolution);
};

struct GridResult {
    Eigen::ArrayXd r;  // grid allocation, multiples of r_tot/resolution
    double utility;    // eq6_utility of r
};

struct VerificationReport {
    double heuristic_utility;         // eq6_utility of the heuristic allocation
    double grid_optimum_utility;      // unrestricted grid maximum
    double gap;                       // grid_optimum_utility - heuristic_utility
    double constrained_grid_optimum;  // r_k in {0} u [rmid_raw_k, inf)
    double constrained_gap;
    bool concave_regime;    // grid optimum funds every user at >= rmid_raw
    bool scarcity_fallback;
    bool budget_ok;
    bool equal_marginal_ok;
    bool prefix_ok;
    bool branch_ok;
    bool concave_gap_ok;    // heuristic >= grid optimum - quantum*max peak_marginal

    bool passed() const {
        return budget_ok && equal_marginal_ok && prefix_ok && branch_ok && concave_gap_ok;
    }
};

// Reference water level found by bracketing + bisection on the monotone
// surplus sum, independent of the closed form. tol is relative on u_a,
// i.e. absolute on its log.
double bisect_log_water_level(std::span<const UserProfile> admitted, double res,
                              double tol = 1e-12);
double bisect_water_level(std::span<const UserProfile> admitted, double res,
                          double tol = 1e-12);

// Exhaustive search over all compositions of the budget into n parts at
// quantum granularity (n <= 4). Ties resolve to the lexicographically
// smallest allocation.
GridResult grid_search(const AllocationInstance& instance, const GridSpec& grid);

// Same search restricted to r_k = 0 or r_k >= rmid_raw_k.
GridResult grid_search_constrained(const AllocationInstance& instance,
                                   const GridSpec& grid);

// Allocation invariants, checked on any (instance, allocation) pair.
bool check_budget_exhaustion(const AllocationInstance& instance, const Allocation& a,
                             double rel_tol = 1e-9);
bool check_equal_marginal(const AllocationInstance& instance, const Allocation& a,
                          double rel_tol = 1e-6);
bool check_prefix_structure(const AllocationInstance& instance, const Allocation& a);
bool check_branch_discipline(const AllocationInstance& instance, const Allocation& a);

// Run the heuristic against both grid searches and every invariant.
VerificationReport verify_instance(const AllocationInstance& instance,
                                   const GridSpec& grid);

struct RandomInstanceOptions {
    int n = 3;
    double q_min = 0.05;
    double q_max = 1.0;
    std::vector<double> p_choices{0.1, 0.8, 3.2, 14.0};
    double rmid = 10.0;
    double budget_factor_min = 0.05;  // r_tot as a multiple of sum(rmid_raw)
    double budget_factor_max = 3.0;
};

AllocationInstance random_instance(std::mt19937_64& rng,
                                   const RandomInstanceOptions& opts);

}  // namespace renalloc

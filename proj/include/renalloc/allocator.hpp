#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "renalloc/utility.hpp"

namespace renalloc {

// One per-slot allocation problem: N users sharing slope p and preferred
// effective energy rmid, competing for a raw-energy budget r_tot.
struct AllocationInstance {
    double p;
    double rmid;
    double r_tot;
    Eigen::ArrayXd q;              // per-user channel quality, (0, 1]
    Eigen::ArrayXd rmid_raw;       // rmid / q
    Eigen::ArrayXd peak_marginal;  // p*q*(1-q)

    AllocationInstance(Eigen::ArrayXd q, double p, double rmid, double r_tot);
    int n() const { return static_cast<int>(q.size()); }
    UserProfile profile(int k) const { return UserProfile(q[k], p, rmid); }
};

// Solution of one instance. Users keep their original indices; `order`
// is the quality-descending permutation and the funded users are its
// first `admitted` entries.
struct Allocation {
    Eigen::ArrayXd r;        // raw energy per user, >= 0
    Eigen::ArrayXd surplus;  // r - rmid_raw for admitted users, else 0
    std::vector<int> order;  // q-descending stable permutation
    int admitted = 0;        // K: funded prefix length in `order`
    std::optional<double> log_water;  // log u_a; absent if no user rides the water level
    double total_utility = 0.0;       // sum of U_k(r_k) over funded users
    double residual = 0.0;            // r_tot - sum of admitted rmid_raw
    bool scarcity_fallback = false;   // single increasing-branch user funded
    std::vector<double> prefix_utility;  // U(R_K) for every feasible prefix K = 1..

    std::optional<double> water_level() const;  // exp(log_water); may underflow to 0
};

// Indices ordered by channel quality descending, ties by original index.
std::vector<int> sort_users(const AllocationInstance& instance);

// log of the level u_a at which the admitted users' decreasing-branch
// surpluses sum to res:  sum_k (log m_k - log u_a)/(p*q_k) = res.
// Requires every peak_marginal > 0; may exceed some log m_k (negative
// surplus), which refine_active_set repairs.
double log_water_level(std::span<const UserProfile> admitted, double res);
double water_level(std::span<const UserProfile> admitted, double res);

struct ActiveSetResult {
    std::vector<double> surplus;       // per admitted user, >= 0
    std::optional<double> log_water;   // absent when every user is pinned
};

// Water level with nonnegativity repair: users whose peak marginal falls
// below the level are pinned at zero surplus and the remaining users are
// re-solved with the same res. Users with peak_marginal = 0 start pinned.
ActiveSetResult refine_active_set(std::span<const UserProfile> admitted, double res);

// Water-filled allocation funding exactly the first K users of the sorted
// order; nullopt when the budget cannot cover their rmid_raw sum.
std::optional<Allocation> allocate_prefix(const AllocationInstance& instance, int k);

// Full heuristic: grow the funded prefix while feasible and while the
// total utility does not strictly drop; fall back to funding the single
// best user on the increasing branch when even K = 1 is infeasible.
Allocation allocate(const AllocationInstance& instance);

// Literal objective value sum_k U_k(r_k) over all users, counting unfunded
// users at U_k(0). The brute-force oracle maximizes this quantity.
double eq6_utility(const AllocationInstance& instance, const Eigen::ArrayXd& r);

}  // namespace renalloc

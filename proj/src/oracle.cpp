#include "renalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "renalloc/rng.hpp"

namespace renalloc {

GridSpec::GridSpec(int resolution) : resolution(resolution) {
    if (resolution < 100) throw std::invalid_argument("grid: resolution must be >= 100");
}

double bisect_log_water_level(std::span<const UserProfile> admitted, double res,
                              double tol) {
    if (admitted.empty()) throw std::domain_error("bisect: empty admitted set");
    if (!(res >= 0.0)) throw std::domain_error("bisect: res must be >= 0");
    if (!(tol > 0.0)) throw std::domain_error("bisect: tol must be > 0");

    // g(L) = sum_k branch_inverse(exp(L)) - res, strictly decreasing in L.
    const auto g = [&](double level) {
        double sum = 0.0;
        for (const UserProfile& u : admitted) sum += branch_inverse_log(u, level);
        return sum - res;
    };

    double lo = std::log(admitted[0].peak_marginal);
    double hi = lo;
    for (const UserProfile& u : admitted) {
        if (!(u.peak_marginal > 0.0))
            throw std::domain_error("bisect: peak_marginal must be > 0");
        lo = std::min(lo, std::log(u.peak_marginal));
        hi = std::max(hi, std::log(u.peak_marginal));
    }
    // g(hi) <= 0 already; expand downward until the root is bracketed.
    for (double step = 1.0; g(lo) < 0.0; step *= 2.0) lo -= step;

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bisect_water_level(std::span<const UserProfile> admitted, double res,
                          double tol) {
    return std::exp(bisect_log_water_level(admitted, res, tol));
}

namespace {

// Per-user utility lookup tables over c = 0..resolution quanta.
std::vector<std::vector<double>> utility_tables(const AllocationInstance& instance,
                                                double quantum, int resolution) {
    std::vector<std::vector<double>> tables(instance.n());
    for (int k = 0; k < instance.n(); ++k) {
        const UserProfile user = instance.profile(k);
        tables[k].resize(resolution + 1);
        for (int c = 0; c <= resolution; ++c)
            tables[k][c] = eval_user(user, c * quantum);
    }
    return tables;
}

struct GridSearchState {
    const std::vector<std::vector<double>>& tables;
    const std::vector<int>& min_counts;  // minimum nonzero quanta per user (0 = any)
    int n;
    std::vector<int> current;
    std::vector<int> best;
    double best_utility = -1.0;
};

// Lexicographic enumeration of compositions; the first maximum wins ties.
void search(GridSearchState& state, int k, int remaining, double partial) {
    if (k == state.n - 1) {
        if (state.min_counts[k] != 0 && remaining != 0 && remaining < state.min_counts[k])
            return;
        state.current[k] = remaining;
        const double total = partial + state.tables[k][remaining];
        if (total > state.best_utility) {
            state.best_utility = total;
            state.best = state.current;
        }
        return;
    }
    for (int c = 0; c <= remaining; ++c) {
        if (c != 0 && c < state.min_counts[k]) continue;
        state.current[k] = c;
        search(state, k + 1, remaining - c, partial + state.tables[k][c]);
    }
}

GridResult run_grid(const AllocationInstance& instance, const GridSpec& grid,
                    bool constrained) {
    if (instance.n() > 4)
        throw std::invalid_argument("grid_search: supports at most 4 users");
    if (!(instance.r_tot > 0.0))
        throw std::invalid_argument("grid_search: r_tot must be > 0");

    const double quantum = instance.r_tot / grid.resolution;
    const auto tables = utility_tables(instance, quantum, grid.resolution);

    std::vector<int> min_counts(instance.n(), 0);
    if (constrained) {
        for (int k = 0; k < instance.n(); ++k)
            min_counts[k] =
                static_cast<int>(std::ceil(instance.rmid_raw[k] / quantum - 1e-12));
    }

    GridSearchState state{tables, min_counts, instance.n(),
                          std::vector<int>(instance.n(), 0),
                          std::vector<int>(instance.n(), 0)};
    search(state, 0, grid.resolution, 0.0);

    GridResult out;
    out.r = Eigen::ArrayXd::Zero(instance.n());
    for (int k = 0; k < instance.n(); ++k) out.r[k] = state.best[k] * quantum;
    out.utility = state.best_utility;
    return out;
}

}  // namespace

GridResult grid_search(const AllocationInstance& instance, const GridSpec& grid) {
    return run_grid(instance, grid, false);
}

GridResult grid_search_constrained(const AllocationInstance& instance,
                                   const GridSpec& grid) {
    return run_grid(instance, grid, true);
}

bool check_budget_exhaustion(const AllocationInstance& instance, const Allocation& a,
                             double rel_tol) {
    if (a.admitted < 1) return a.r.sum() == 0.0;
    const double spent = a.r.sum();
    return std::abs(spent - instance.r_tot) <= rel_tol * instance.r_tot;
}

bool check_equal_marginal(const AllocationInstance& instance, const Allocation& a,
                          double rel_tol) {
    if (!a.log_water) return true;
    for (int i = 0; i < a.admitted; ++i) {
        const int user = a.order[i];
        if (!(a.surplus[user] > 0.0)) continue;
        if (!(instance.peak_marginal[user] > 0.0)) continue;
        const double log_marginal = log_marginal_user(instance.profile(user), a.r[user]);
        if (std::abs(log_marginal - *a.log_water) > rel_tol) return false;
    }
    return true;
}

bool check_prefix_structure(const AllocationInstance& instance, const Allocation& a) {
    // Funded users must be exactly the first `admitted` entries of the order.
    std::vector<char> funded(instance.n(), 0);
    for (int k = 0; k < instance.n(); ++k) funded[k] = a.r[k] > 0.0;
    for (int i = 0; i < static_cast<int>(a.order.size()); ++i) {
        const bool expect = i < a.admitted;
        if (funded[a.order[i]] != expect) return false;
    }
    return true;
}

bool check_branch_discipline(const AllocationInstance& instance, const Allocation& a) {
    int below = 0;
    for (int i = 0; i < a.admitted; ++i) {
        const int user = a.order[i];
        if (a.r[user] < instance.rmid_raw[user] * (1.0 - 1e-12)) ++below;
    }
    if (below == 0) return true;
    return below == 1 && a.scarcity_fallback;
}

VerificationReport verify_instance(const AllocationInstance& instance,
                                   const GridSpec& grid) {
    const Allocation a = allocate(instance);
    const GridResult unrestricted = grid_search(instance, grid);
    const GridResult constrained = grid_search_constrained(instance, grid);
    const double quantum = instance.r_tot / grid.resolution;

    VerificationReport report;
    report.heuristic_utility = eq6_utility(instance, a.r);
    report.grid_optimum_utility = unrestricted.utility;
    report.gap = report.grid_optimum_utility - report.heuristic_utility;
    report.constrained_grid_optimum = constrained.utility;
    report.constrained_gap = report.constrained_grid_optimum - report.heuristic_utility;
    report.concave_regime = (unrestricted.r >= instance.rmid_raw).all();
    report.scarcity_fallback = a.scarcity_fallback;
    report.budget_ok = check_budget_exhaustion(instance, a);
    report.equal_marginal_ok = check_equal_marginal(instance, a);
    report.prefix_ok = check_prefix_structure(instance, a);
    report.branch_ok = check_branch_discipline(instance, a);
    report.concave_gap_ok =
        !report.concave_regime ||
        report.heuristic_utility >=
            report.grid_optimum_utility - quantum * instance.peak_marginal.maxCoeff();
    return report;
}

AllocationInstance random_instance(std::mt19937_64& rng,
                                   const RandomInstanceOptions& opts) {
    if (opts.n < 1) throw std::invalid_argument("random_instance: n must be >= 1");
    Eigen::ArrayXd q(opts.n);
    for (int k = 0; k < opts.n; ++k)
        q[k] = uniform_range(rng, opts.q_min, opts.q_max);
    const double p = opts.p_choices[next_index(rng, opts.p_choices.size())];
    const double rmid_raw_sum = (opts.rmid / q).sum();
    const double r_tot =
        uniform_range(rng, opts.budget_factor_min, opts.budget_factor_max) * rmid_raw_sum;
    return AllocationInstance(std::move(q), p, opts.rmid, r_tot);
}

}  // namespace renalloc

#include "renalloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace renalloc {

AllocationInstance::AllocationInstance(Eigen::ArrayXd q_in, double p, double rmid,
                                       double r_tot)
    : p(p), rmid(rmid), r_tot(r_tot), q(std::move(q_in)) {
    if (q.size() == 0) throw std::invalid_argument("instance: users must be nonempty");
    if (!(q > 0.0).all() || !(q <= 1.0).all())
        throw std::invalid_argument("instance: q must be in (0, 1]");
    if (!(p > 0.0)) throw std::invalid_argument("instance: p must be > 0");
    if (!(rmid > 0.0)) throw std::invalid_argument("instance: rmid must be > 0");
    if (!(r_tot >= 0.0)) throw std::invalid_argument("instance: r_tot must be >= 0");
    rmid_raw = rmid / q;
    peak_marginal = p * q * (1.0 - q);
}

std::optional<double> Allocation::water_level() const {
    if (!log_water) return std::nullopt;
    return std::exp(*log_water);
}

std::vector<int> sort_users(const AllocationInstance& instance) {
    std::vector<int> order(instance.n());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return instance.q[a] > instance.q[b]; });
    return order;
}

double log_water_level(std::span<const UserProfile> admitted, double res) {
    if (admitted.empty()) throw std::domain_error("water_level: empty admitted set");
    if (!(res >= 0.0)) throw std::domain_error("water_level: res must be >= 0");
    double weighted_log_m = 0.0;
    double weight = 0.0;
    for (const UserProfile& u : admitted) {
        if (!(u.peak_marginal > 0.0))
            throw std::domain_error("water_level: peak_marginal must be > 0 (pre-pin q = 1 users)");
        const double w = 1.0 / (u.p() * u.q());
        weighted_log_m += w * std::log(u.peak_marginal);
        weight += w;
    }
    return (weighted_log_m - res) / weight;
}

double water_level(std::span<const UserProfile> admitted, double res) {
    return std::exp(log_water_level(admitted, res));
}

ActiveSetResult refine_active_set(std::span<const UserProfile> admitted, double res) {
    if (admitted.empty()) throw std::domain_error("refine_active_set: empty admitted set");
    if (!(res >= 0.0)) throw std::domain_error("refine_active_set: res must be >= 0");

    const int k = static_cast<int>(admitted.size());
    std::vector<char> pinned(k, 0);
    std::vector<UserProfile> active;
    active.reserve(k);
    for (int i = 0; i < k; ++i)
        if (!(admitted[i].peak_marginal > 0.0)) pinned[i] = 1;

    ActiveSetResult out;
    out.surplus.assign(k, 0.0);

    // Each pass pins at least one user, so this terminates in <= k passes.
    // The last unpinned user always receives surplus res >= 0, hence the
    // active set only empties when every user started with zero marginal.
    for (;;) {
        active.clear();
        for (int i = 0; i < k; ++i)
            if (!pinned[i]) active.push_back(admitted[i]);
        if (active.empty()) break;

        const double level = log_water_level(active, res);
        bool repinned = false;
        for (int i = 0; i < k; ++i) {
            if (pinned[i]) continue;
            if (std::log(admitted[i].peak_marginal) < level) {
                pinned[i] = 1;
                repinned = true;
            }
        }
        if (!repinned) {
            out.log_water = level;
            for (int i = 0; i < k; ++i)
                if (!pinned[i]) out.surplus[i] = branch_inverse_log(admitted[i], level);
            break;
        }
    }
    return out;
}

namespace {

struct PrefixContext {
    std::vector<int> order;
    std::vector<UserProfile> sorted;  // profiles in `order` sequence
};

PrefixContext make_context(const AllocationInstance& instance) {
    PrefixContext ctx;
    ctx.order = sort_users(instance);
    ctx.sorted.reserve(instance.n());
    for (int idx : ctx.order) ctx.sorted.push_back(instance.profile(idx));
    return ctx;
}

Allocation empty_allocation(const AllocationInstance& instance, std::vector<int> order) {
    Allocation a;
    a.r = Eigen::ArrayXd::Zero(instance.n());
    a.surplus = Eigen::ArrayXd::Zero(instance.n());
    a.order = std::move(order);
    return a;
}

std::optional<Allocation> prefix_allocation(const AllocationInstance& instance,
                                            const PrefixContext& ctx, int k) {
    if (k < 1 || k > instance.n())
        throw std::domain_error("allocate_prefix: k out of range");

    double rmid_sum = 0.0;
    for (int i = 0; i < k; ++i) rmid_sum += ctx.sorted[i].rmid_raw;
    const double res = instance.r_tot - rmid_sum;
    if (res < 0.0) return std::nullopt;

    ActiveSetResult active = refine_active_set({ctx.sorted.data(), static_cast<size_t>(k)}, res);
    if (!active.log_water && res > 0.0) {
        // Every admitted user saturates at utility 1 (q = 1); the residual
        // changes no utility but must still be handed out. Park it on the
        // first user.
        active.surplus[0] = res;
    }

    Allocation a = empty_allocation(instance, ctx.order);
    a.admitted = k;
    a.log_water = active.log_water;
    a.residual = res;
    for (int i = 0; i < k; ++i) {
        const int user = ctx.order[i];
        a.surplus[user] = active.surplus[i];
        a.r[user] = ctx.sorted[i].rmid_raw + active.surplus[i];
        a.total_utility += eval_user(ctx.sorted[i], a.r[user]);
    }
    return a;
}

Allocation fallback_allocation(const AllocationInstance& instance,
                               const PrefixContext& ctx) {
    // Budget below even the best user's rmid_raw: fund the single user
    // with the highest utility at r_tot (the increasing-branch exception).
    int best = 0;
    double best_value = eval_user(ctx.sorted[0], instance.r_tot);
    for (int i = 1; i < instance.n(); ++i) {
        const double value = eval_user(ctx.sorted[i], instance.r_tot);
        if (value > best_value) {
            best = i;
            best_value = value;
        }
    }
    Allocation a = empty_allocation(instance, ctx.order);
    a.admitted = 1;
    a.scarcity_fallback = true;
    a.residual = instance.r_tot - ctx.sorted[best].rmid_raw;
    a.total_utility = best_value;
    a.r[ctx.order[best]] = instance.r_tot;
    if (best != 0) {
        // Keep the funded user first so the funded set stays a prefix.
        std::swap(a.order[0], a.order[best]);
    }
    return a;
}

}  // namespace

std::optional<Allocation> allocate_prefix(const AllocationInstance& instance, int k) {
    return prefix_allocation(instance, make_context(instance), k);
}

Allocation allocate(const AllocationInstance& instance) {
    const PrefixContext ctx = make_context(instance);

    if (instance.r_tot == 0.0) return empty_allocation(instance, ctx.order);
    if (instance.r_tot < ctx.sorted[0].rmid_raw) return fallback_allocation(instance, ctx);

    Allocation chosen;
    bool stopped = false;
    double prev_utility = 0.0;  // U(R_0) = 0
    std::vector<double> prefix_utility;

    for (int k = 1; k <= instance.n(); ++k) {
        std::optional<Allocation> candidate = prefix_allocation(instance, ctx, k);
        if (!candidate) break;
        prefix_utility.push_back(candidate->total_utility);
        if (!stopped) {
            if (candidate->total_utility - prev_utility < 0.0) {
                // Delta U_K < 0: keep R_{K-1}. Later prefixes are still
                // evaluated above so prefix_utility covers every feasible K.
                stopped = true;
            } else {
                chosen = std::move(*candidate);
            }
        }
        prev_utility = prefix_utility.back();
    }
    chosen.prefix_utility = std::move(prefix_utility);
    return chosen;
}

double eq6_utility(const AllocationInstance& instance, const Eigen::ArrayXd& r) {
    if (r.size() != instance.q.size())
        throw std::invalid_argument("eq6_utility: allocation length mismatch");
    return eval_users(instance.p, instance.rmid, instance.q, r).sum();
}

}  // namespace renalloc

#include "renalloc/harvest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "renalloc/rng.hpp"

namespace renalloc {

Battery::Battery(double level, double capacity) : level(level), capacity(capacity) {
    if (!(capacity > 0.0)) throw std::invalid_argument("battery: capacity must be > 0");
    if (!(level >= 0.0) || level > capacity)
        throw std::invalid_argument("battery: level must be in [0, capacity]");
}

HarvestModel HarvestModel::from_trace(std::vector<double> joules_per_slot) {
    for (double h : joules_per_slot)
        if (!(h >= 0.0))
            throw std::invalid_argument("harvest trace: amounts must be >= 0");
    HarvestModel m;
    m.model_ = std::move(joules_per_slot);
    return m;
}

HarvestModel HarvestModel::diurnal(const DiurnalParams& params) {
    if (!(params.h_peak_watts >= 0.0))
        throw std::invalid_argument("diurnal: h_peak must be >= 0");
    if (params.day_length < 1)
        throw std::invalid_argument("diurnal: day_length must be >= 1");
    if (!(params.daylight_fraction > 0.0) || params.daylight_fraction > 1.0)
        throw std::invalid_argument("diurnal: daylight_fraction must be in (0, 1]");
    if (!(params.noise_amplitude >= 0.0) || params.noise_amplitude >= 1.0)
        throw std::invalid_argument("diurnal: noise_amplitude must be in [0, 1)");
    HarvestModel m;
    m.model_ = params;
    return m;
}

double HarvestModel::at(long t, double tau) const {
    if (t < 0) throw std::domain_error("harvest: slot must be >= 0");
    if (const auto* trace = std::get_if<std::vector<double>>(&model_)) {
        return t < static_cast<long>(trace->size()) ? (*trace)[t] : 0.0;
    }
    const DiurnalParams& d = std::get<DiurnalParams>(model_);
    const double phase = static_cast<double>(t % d.day_length) / d.day_length;
    if (phase >= d.daylight_fraction) return 0.0;  // night
    const double base =
        d.h_peak_watts * tau * std::sin(std::numbers::pi * phase / d.daylight_fraction);
    const double unit = to_unit_interval(splitmix64(d.seed ^ splitmix64(t)));
    const double noise = (2.0 * unit - 1.0) * d.noise_amplitude;
    return std::max(0.0, base * (1.0 + noise));
}

MarkovChannel::MarkovChannel(Eigen::MatrixXd transition_in, Eigen::ArrayXd q_levels_in,
                             std::vector<int> state_in)
    : transition(std::move(transition_in)),
      q_levels(std::move(q_levels_in)),
      state(std::move(state_in)) {
    const int levels = static_cast<int>(q_levels.size());
    if (levels < 2) throw std::invalid_argument("channel: need >= 2 states");
    if (transition.rows() != levels || transition.cols() != levels)
        throw std::invalid_argument("channel: transition must be L x L");
    for (int i = 0; i < levels; ++i) {
        if ((transition.row(i).array() < 0.0).any())
            throw std::invalid_argument("channel: negative transition probability");
        if (std::abs(transition.row(i).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("channel: rows must sum to 1");
    }
    for (int i = 1; i < levels; ++i)
        if (!(q_levels[i] > q_levels[i - 1]))
            throw std::invalid_argument("channel: q_levels must be strictly increasing");
    if (!(q_levels[0] > 0.0) || q_levels[levels - 1] > 1.0)
        throw std::invalid_argument("channel: q_levels must lie in (0, 1]");
    for (int s : state)
        if (s < 0 || s >= levels)
            throw std::invalid_argument("channel: state index out of range");
}

Eigen::ArrayXd MarkovChannel::current_q() const {
    Eigen::ArrayXd q(users());
    for (int u = 0; u < users(); ++u) q[u] = q_levels[state[u]];
    return q;
}

MarkovChannel birth_death_channel(int levels, int users, double rho, double q_min) {
    if (levels < 2) throw std::invalid_argument("channel: need >= 2 states");
    if (users < 1) throw std::invalid_argument("channel: need >= 1 user");
    if (!(rho >= 0.0) || rho > 1.0)
        throw std::invalid_argument("channel: rho must be in [0, 1]");

    Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(levels, levels);
    for (int i = 0; i < levels; ++i) {
        double stay = 1.0;
        if (i > 0) {
            transition(i, i - 1) = rho / 2.0;
            stay -= rho / 2.0;
        }
        if (i < levels - 1) {
            transition(i, i + 1) = rho / 2.0;
            stay -= rho / 2.0;
        }
        transition(i, i) = stay;
    }
    Eigen::ArrayXd q_levels =
        Eigen::ArrayXd::LinSpaced(levels, q_min, 1.0);
    std::vector<int> state(users);
    for (int u = 0; u < users; ++u) state[u] = u % levels;
    return MarkovChannel(std::move(transition), std::move(q_levels), std::move(state));
}

void channel_step(MarkovChannel& channel, std::mt19937_64& rng) {
    for (int u = 0; u < channel.users(); ++u) {
        const double draw = uniform01(rng);
        double cumulative = 0.0;
        int next = channel.levels() - 1;
        for (int j = 0; j < channel.levels(); ++j) {
            cumulative += channel.transition(channel.state[u], j);
            if (draw < cumulative) {
                next = j;
                break;
            }
        }
        channel.state[u] = next;
    }
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
    const int n = static_cast<int>(transition.rows());
    if (n < 1 || transition.cols() != n)
        throw std::invalid_argument("stationary_distribution: square matrix required");
    // Solve pi^T P = pi^T with sum(pi) = 1: replace one balance equation by
    // the normalization row.
    Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[n - 1] = 1.0;
    return a.fullPivLu().solve(b);
}

Simulator::Simulator(SimConfig config)
    : config_(std::move(config)),
      battery_(config_.battery),
      channel_(config_.channel),
      rng_(config_.seed) {}

SlotResult Simulator::step() {
    const double cap = config_.p_max >= 0.0 ? config_.p_max * config_.tau
                                            : battery_.level;
    const double budget = std::min(battery_.level, cap);

    const Eigen::ArrayXd q = channel_.current_q();
    const AllocationInstance instance(q, config_.p, config_.rmid, budget);
    const Allocation allocation = allocate(instance);
    const double spent = allocation.r.sum();

    const double harvested = config_.harvest.at(t_, config_.tau);
    battery_.level =
        std::min(std::max(0.0, battery_.level - spent) + harvested, battery_.capacity);

    SlotResult result{t_,
                      harvested,
                      budget,
                      allocation.admitted,
                      allocation.total_utility,
                      q,
                      allocation.r,
                      battery_.level};
    channel_step(channel_, rng_);
    ++t_;
    return result;
}

std::vector<SlotResult> sim_run(const SimConfig& config, long slots) {
    if (slots < 1) throw std::invalid_argument("sim_run: slots must be >= 1");
    Simulator sim(config);
    std::vector<SlotResult> results;
    results.reserve(slots);
    for (long t = 0; t < slots; ++t) results.push_back(sim.step());
    return results;
}

}  // namespace renalloc

#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "renalloc/allocator.hpp"

namespace renalloc {

struct Battery {
    double level;     // J, 0 <= level <= capacity
    double capacity;  // J, > 0

    Battery(double level, double capacity);
};

// Sinusoidal day/night supply: slots [0, daylight_fraction) of each day
// follow a half-sine peaking at h_peak_watts * tau, the rest harvest
// nothing. Per-slot multiplicative noise is a pure function of (seed, t).
struct DiurnalParams {
    double h_peak_watts = 20.0;
    long day_length = 288;            // slots per day
    double daylight_fraction = 0.5;   // (0, 1]
    double noise_amplitude = 0.0;     // [0, 1)
    std::uint64_t seed = 0;
};

class HarvestModel {
  public:
    static HarvestModel from_trace(std::vector<double> joules_per_slot);
    static HarvestModel diurnal(const DiurnalParams& params);

    // Energy harvested during slot t (J). Trace replay returns 0 past the
    // end of the trace.
    double at(long t, double tau) const;

  private:
    HarvestModel() = default;
    std::variant<std::vector<double>, DiurnalParams> model_;
};

// Finite-state Markov fading: every user walks the same chain over the
// shared quality ladder q_levels.
struct MarkovChannel {
    Eigen::MatrixXd transition;  // L x L, rows sum to 1
    Eigen::ArrayXd q_levels;     // strictly increasing, within (0, 1]
    std::vector<int> state;      // per-user current state

    MarkovChannel(Eigen::MatrixXd transition, Eigen::ArrayXd q_levels,
                  std::vector<int> state);

    int levels() const { return static_cast<int>(q_levels.size()); }
    int users() const { return static_cast<int>(state.size()); }
    Eigen::ArrayXd current_q() const;
};

// Birth-death default: hop to an adjacent state with probability rho/2
// each way, otherwise hold. Users start spread over the ladder.
MarkovChannel birth_death_channel(int levels, int users, double rho,
                                  double q_min = 0.05);

// Advance every user by one transition, consuming one draw per user.
void channel_step(MarkovChannel& channel, std::mt19937_64& rng);

// Stationary distribution of a row-stochastic matrix via linear solve.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

struct SimConfig {
    double p = 0.8;
    double rmid = 10.0;
    double tau = 1.0;
    double p_max = 60.0;  // transmit ceiling, W; 0 forbids transmission, < 0 uncaps
    Battery battery{0.0, 1000.0};
    HarvestModel harvest = HarvestModel::from_trace({});
    MarkovChannel channel = birth_death_channel(8, 1, 0.5);
    std::uint64_t seed = 0;  // channel transition stream
};

struct SlotResult {
    long slot;
    double harvested;      // J arriving at the end of the slot
    double budget;         // r_tot offered to the allocator
    int admitted;
    double total_utility;
    Eigen::ArrayXd q;      // channel qualities used this slot
    Eigen::ArrayXd r;      // per-user allocation
    double battery_after;
};

class Simulator {
  public:
    explicit Simulator(SimConfig config);

    SlotResult step();
    const Battery& battery() const { return battery_; }
    long slot() const { return t_; }

  private:
    SimConfig config_;
    Battery battery_;
    MarkovChannel channel_;
    std::mt19937_64 rng_;
    long t_ = 0;
};

std::vector<SlotResult> sim_run(const SimConfig& config, long slots);

}  // namespace renalloc

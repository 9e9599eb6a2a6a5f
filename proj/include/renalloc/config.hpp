#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace renalloc {

// Raised for any malformed, missing, or out-of-range configuration value;
// the message names the offending field.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct UtilityConfig {
    double p = 0.8;
    double rmid = 10.0;
};

enum class QDistribution { kUniform, kEvenlySpaced };

struct UserGenerator {
    int count = 20;
    QDistribution distribution = QDistribution::kEvenlySpaced;
    std::uint64_t seed = 0;
};

// Exactly one of `q` (explicit list) or `generator` is set.
struct UsersConfig {
    std::vector<double> q;
    std::optional<UserGenerator> generator;
};

struct BudgetConfig {
    std::optional<double> r_tot;
    std::vector<double> sweep;
};

struct LinkConfig {
    double w_total = 20e6;
    int n_sub = 20;
    double n0 = 4e-21;
    std::vector<double> gains;
    double tau = 1.0;
};

struct BatteryConfig {
    double capacity = 1000.0;
    double initial = 0.0;
};

struct DiurnalConfig {
    double h_peak = 20.0;          // W
    long day_length = 288;         // slots
    double daylight_fraction = 0.5;
    double noise_amplitude = 0.0;
    std::uint64_t seed = 0;
};

// Exactly one of `trace` or `diurnal` is set.
struct HarvestConfig {
    std::vector<double> trace;
    std::optional<DiurnalConfig> diurnal;
    bool has_trace = false;
};

struct ChannelConfig {
    int states = 8;
    double rho = 0.5;
    std::uint64_t seed = 0;
};

struct SimSection {
    long slots = 1;
    BatteryConfig battery;
    HarvestConfig harvest;
    ChannelConfig channel;
    double p_max = 60.0;  // W; 0 forbids transmission, < 0 uncaps
    double tau = 1.0;
    bool per_user_output = false;
};

struct ExperimentConfig {
    UtilityConfig utility;
    UsersConfig users;
    BudgetConfig budget;
    std::optional<LinkConfig> link;
    std::optional<SimSection> sim;
    double q_min = 0.05;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

// Resolve the users section to concrete channel qualities, clamped into
// [q_min, 1] before any profile is built.
std::vector<double> materialize_q(const ExperimentConfig& config);

}  // namespace renalloc

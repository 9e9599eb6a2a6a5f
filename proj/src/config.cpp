#include "renalloc/config.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <json.hpp>

#include "renalloc/rng.hpp"

namespace renalloc {

namespace {

using nlohmann::json;

double require_positive(const json& node, const std::string& field, double fallback) {
    if (!node.contains(field)) return fallback;
    const double v = node.at(field).get<double>();
    if (!(v > 0.0)) throw ConfigError(field + ": must be > 0");
    return v;
}

UtilityConfig parse_utility(const json& root) {
    UtilityConfig u;
    if (!root.contains("utility")) return u;
    const json& node = root.at("utility");
    u.p = require_positive(node, "p", u.p);
    u.rmid = require_positive(node, "rmid", u.rmid);
    return u;
}

UsersConfig parse_users(const json& root) {
    if (!root.contains("users")) throw ConfigError("users: section is required");
    const json& node = root.at("users");
    UsersConfig users;
    const bool has_q = node.contains("q");
    const bool has_gen = node.contains("generator");
    if (has_q == has_gen)
        throw ConfigError("users: exactly one of q / generator is required");
    if (has_q) {
        users.q = node.at("q").get<std::vector<double>>();
        if (users.q.empty()) throw ConfigError("users.q: must be nonempty");
        for (double q : users.q)
            if (!(q > 0.0) || q > 1.0)
                throw ConfigError("users.q: values must be in (0, 1]");
        return users;
    }
    const json& gen = node.at("generator");
    UserGenerator g;
    g.count = gen.value("count", g.count);
    if (g.count < 1) throw ConfigError("users.generator.count: must be >= 1");
    const std::string dist = gen.value("distribution", std::string("evenly-spaced"));
    if (dist == "uniform")
        g.distribution = QDistribution::kUniform;
    else if (dist == "evenly-spaced")
        g.distribution = QDistribution::kEvenlySpaced;
    else
        throw ConfigError("users.generator.distribution: unknown value '" + dist + "'");
    g.seed = gen.value("seed", std::uint64_t{0});
    users.generator = g;
    return users;
}

BudgetConfig parse_budget(const json& root) {
    if (!root.contains("budget")) throw ConfigError("budget: section is required");
    const json& node = root.at("budget");
    BudgetConfig budget;
    const bool has_rtot = node.contains("r_tot");
    const bool has_sweep = node.contains("sweep");
    if (has_rtot == has_sweep)
        throw ConfigError("budget: exactly one of r_tot / sweep is required");
    if (has_rtot) {
        budget.r_tot = node.at("r_tot").get<double>();
        if (!(*budget.r_tot >= 0.0)) throw ConfigError("budget.r_tot: must be >= 0");
    } else {
        budget.sweep = node.at("sweep").get<std::vector<double>>();
        if (budget.sweep.empty()) throw ConfigError("budget.sweep: must be nonempty");
        for (double b : budget.sweep)
            if (!(b >= 0.0)) throw ConfigError("budget.sweep: values must be >= 0");
    }
    return budget;
}

LinkConfig parse_link(const json& node) {
    LinkConfig link;
    link.w_total = require_positive(node, "w_total", link.w_total);
    link.n_sub = node.value("n_sub", link.n_sub);
    if (link.n_sub < 1) throw ConfigError("link.n_sub: must be >= 1");
    link.n0 = require_positive(node, "n0", link.n0);
    link.tau = require_positive(node, "tau", link.tau);
    if (node.contains("gains")) {
        link.gains = node.at("gains").get<std::vector<double>>();
        if (static_cast<int>(link.gains.size()) != link.n_sub)
            throw ConfigError("link.gains: one gain per subchannel required");
        for (double g : link.gains)
            if (!(g > 0.0)) throw ConfigError("link.gains: values must be > 0");
    }
    return link;
}

HarvestConfig parse_harvest(const json& node) {
    HarvestConfig harvest;
    const bool has_trace = node.contains("trace");
    const bool has_diurnal = node.contains("diurnal");
    if (has_trace == has_diurnal)
        throw ConfigError("sim.harvest: exactly one of trace / diurnal is required");
    if (has_trace) {
        harvest.trace = node.at("trace").get<std::vector<double>>();
        harvest.has_trace = true;
        for (double h : harvest.trace)
            if (!(h >= 0.0)) throw ConfigError("sim.harvest.trace: values must be >= 0");
        return harvest;
    }
    const json& d = node.at("diurnal");
    DiurnalConfig diurnal;
    diurnal.h_peak = d.value("h_peak", diurnal.h_peak);
    if (!(diurnal.h_peak >= 0.0)) throw ConfigError("sim.harvest.diurnal.h_peak: must be >= 0");
    diurnal.day_length = d.value("day_length", diurnal.day_length);
    if (diurnal.day_length < 1)
        throw ConfigError("sim.harvest.diurnal.day_length: must be >= 1");
    diurnal.daylight_fraction = d.value("daylight_fraction", diurnal.daylight_fraction);
    if (!(diurnal.daylight_fraction > 0.0) || diurnal.daylight_fraction > 1.0)
        throw ConfigError("sim.harvest.diurnal.daylight_fraction: must be in (0, 1]");
    diurnal.noise_amplitude = d.value("noise_amplitude", diurnal.noise_amplitude);
    if (!(diurnal.noise_amplitude >= 0.0) || diurnal.noise_amplitude >= 1.0)
        throw ConfigError("sim.harvest.diurnal.noise_amplitude: must be in [0, 1)");
    diurnal.seed = d.value("seed", std::uint64_t{0});
    harvest.diurnal = diurnal;
    return harvest;
}

SimSection parse_sim(const json& node) {
    SimSection sim;
    sim.slots = node.value("slots", sim.slots);
    if (sim.slots < 1) throw ConfigError("sim.slots: must be >= 1");
    if (node.contains("battery")) {
        const json& b = node.at("battery");
        sim.battery.capacity = require_positive(b, "capacity", sim.battery.capacity);
        sim.battery.initial = b.value("initial", sim.battery.initial);
        if (!(sim.battery.initial >= 0.0) || sim.battery.initial > sim.battery.capacity)
            throw ConfigError("sim.battery.initial: must be in [0, capacity]");
    }
    if (!node.contains("harvest"))
        throw ConfigError("sim.harvest: section is required");
    sim.harvest = parse_harvest(node.at("harvest"));
    if (node.contains("channel")) {
        const json& c = node.at("channel");
        sim.channel.states = c.value("states", sim.channel.states);
        if (sim.channel.states < 2) throw ConfigError("sim.channel.states: must be >= 2");
        sim.channel.rho = c.value("rho", sim.channel.rho);
        if (!(sim.channel.rho >= 0.0) || sim.channel.rho > 1.0)
            throw ConfigError("sim.channel.rho: must be in [0, 1]");
        sim.channel.seed = c.value("seed", std::uint64_t{0});
    }
    if (node.contains("p_max")) sim.p_max = node.at("p_max").get<double>();
    sim.tau = require_positive(node, "tau", sim.tau);
    sim.per_user_output = node.value("per_user_output", sim.per_user_output);
    return sim;
}

ExperimentConfig parse_root(const json& root) {
    ExperimentConfig config;
    config.utility = parse_utility(root);
    config.users = parse_users(root);
    config.budget = parse_budget(root);
    if (root.contains("q_min")) {
        config.q_min = root.at("q_min").get<double>();
        if (!(config.q_min > 0.0) || config.q_min > 1.0)
            throw ConfigError("q_min: must be in (0, 1]");
    }
    if (root.contains("link")) config.link = parse_link(root.at("link"));
    if (root.contains("sim")) config.sim = parse_sim(root.at("sim"));
    return config;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        return parse_root(root);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::vector<double> materialize_q(const ExperimentConfig& config) {
    std::vector<double> q;
    if (!config.users.q.empty()) {
        q = config.users.q;
    } else {
        const UserGenerator& gen = *config.users.generator;
        q.resize(gen.count);
        if (gen.distribution == QDistribution::kEvenlySpaced) {
            for (int k = 0; k < gen.count; ++k)
                q[k] = static_cast<double>(k + 1) / gen.count;
        } else {
            std::mt19937_64 rng(gen.seed);
            for (int k = 0; k < gen.count; ++k)
                q[k] = uniform_range(rng, config.q_min, 1.0);
        }
    }
    for (double& value : q) value = std::clamp(value, config.q_min, 1.0);
    return q;
}

}  // namespace renalloc

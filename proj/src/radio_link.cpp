#include "renalloc/radio_link.hpp"

#include <cmath>
#include <stdexcept>

namespace renalloc {

LinkParams::LinkParams(double w_total, int n_sub, double n0,
                       Eigen::ArrayXd channel_gains, double tau)
    : w_total(w_total),
      n_sub(n_sub),
      w_sub(w_total / n_sub),
      n0(n0),
      channel_gains(std::move(channel_gains)),
      tau(tau) {
    if (!(w_total > 0.0)) throw std::invalid_argument("link: w_total must be > 0");
    if (n_sub < 1) throw std::invalid_argument("link: n_sub must be >= 1");
    if (!(n0 > 0.0)) throw std::invalid_argument("link: n0 must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("link: tau must be > 0");
    if (this->channel_gains.size() != n_sub)
        throw std::invalid_argument("link: one gain per subchannel required");
    if (!(this->channel_gains > 0.0).all())
        throw std::invalid_argument("link: channel gains must be > 0");
}

namespace {

void check_user(const LinkParams& params, int k) {
    if (k < 0 || k >= params.n_sub)
        throw std::out_of_range("link: user index out of range");
}

}  // namespace

double rate_from_power(const LinkParams& params, int k, double p_k) {
    check_user(params, k);
    if (!(p_k >= 0.0)) throw std::domain_error("rate_from_power: power must be >= 0");
    const double snr = p_k * params.channel_gains[k] / (params.n0 * params.w_sub);
    return params.w_sub * std::log2(1.0 + snr);
}

double power_from_rate(const LinkParams& params, int k, double d_k) {
    check_user(params, k);
    if (!(d_k >= 0.0)) throw std::domain_error("power_from_rate: rate must be >= 0");
    return params.n0 * params.w_sub * std::expm1(d_k / params.w_sub * M_LN2) /
           params.channel_gains[k];
}

double energy_for_rate(const LinkParams& params, int k, double d_k) {
    return power_from_rate(params, k, d_k) * params.tau;
}

double total_energy(const LinkParams& params, const Eigen::ArrayXd& rates) {
    if (rates.size() != params.n_sub)
        throw std::invalid_argument("total_energy: one rate per subchannel required");
    double sum = 0.0;
    for (int k = 0; k < params.n_sub; ++k) sum += energy_for_rate(params, k, rates[k]);
    return sum;
}

Eigen::ArrayXd q_from_gains(const Eigen::ArrayXd& gains, double q_min) {
    if (gains.size() == 0) throw std::invalid_argument("q_from_gains: empty gains");
    if (!(gains > 0.0).all())
        throw std::invalid_argument("q_from_gains: gains must be > 0");
    return (gains / gains.maxCoeff()).max(q_min).min(1.0);
}

}  // namespace renalloc

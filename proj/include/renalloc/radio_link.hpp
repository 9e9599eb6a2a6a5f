#pragma once

#include <Eigen/Dense>

namespace renalloc {

// OFDMA downlink constants. Each of the N users owns one subchannel of
// width W_sub = W_total / N.
struct LinkParams {
    double w_total;               // total bandwidth, Hz
    int n_sub;                    // subchannel count, >= 1
    double w_sub;                 // w_total / n_sub, Hz
    double n0;                    // single-sided noise density, W/Hz
    Eigen::ArrayXd channel_gains; // per-user |h_k|^2, > 0
    double tau;                   // slot duration, s

    LinkParams(double w_total, int n_sub, double n0,
               Eigen::ArrayXd channel_gains, double tau = 1.0);
};

// Equipment defaults (20 MHz carrier, 60 W transmit ceiling, thermal
// noise floor at 290 K).
inline constexpr double kDefaultBandwidthHz = 20e6;
inline constexpr double kDefaultMaxTransmitPowerW = 60.0;
inline constexpr double kDefaultNoiseDensity = 4e-21;
inline constexpr double kDefaultSolarPeakPowerW = 20.0;

// Shannon rate of user k at transmit power p_k (W):
//   d_k = W_sub * log2(1 + p_k*|h_k|^2 / (N0*W_sub))
double rate_from_power(const LinkParams& params, int k, double p_k);

// Inverse of rate_from_power:
//   p_k = N0*W_sub * (2^(d_k/W_sub) - 1) / |h_k|^2
double power_from_rate(const LinkParams& params, int k, double d_k);

// Slot energy for sustaining rate d_k: power_from_rate * tau.
double energy_for_rate(const LinkParams& params, int k, double d_k);

// Total slot energy over all subchannels; rates must have length n_sub.
double total_energy(const LinkParams& params, const Eigen::ArrayXd& rates);

// Normalization convention mapping gains to allocator channel qualities:
// q_k = |h_k|^2 / max_j |h_j|^2, clamped below at q_min.
Eigen::ArrayXd q_from_gains(const Eigen::ArrayXd& gains, double q_min = 0.05);

}  // namespace renalloc

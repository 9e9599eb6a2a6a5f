#pragma once

#include <Eigen/Dense>

namespace renalloc {

// Sigmoid soft-QoS utility in effective-energy coordinates:
//
//   U(x) = q * exp(p*(x - rmid))           x <  rmid
//        = 1 - (1-q) * exp(-p*(x - rmid))  x >= rmid
//
// Both branches meet at U(rmid) = q. U is strictly increasing, bounded
// by 1, and approaches q*exp(-p*rmid) at x = 0.
struct SigmoidUtility {
    double q;     // channel quality, (0, 1]; also the utility at rmid
    double p;     // slope, per unit effective energy, > 0
    double rmid;  // preferred effective energy, > 0

    SigmoidUtility(double q, double p, double rmid);
};

// Per-user view in raw-energy coordinates. The user's channel delivers
// only a fraction q of the allocated raw energy, so U_k(r) = U(q*r)
// with the same q acting as the utility's quality parameter.
struct UserProfile {
    SigmoidUtility base;
    double rmid_raw;       // rmid / q: raw energy that delivers rmid
    double peak_marginal;  // p*q*(1-q): marginal just above rmid_raw

    UserProfile(double q, double p, double rmid);
    double q() const { return base.q; }
    double p() const { return base.p; }
    double rmid() const { return base.rmid; }
};

// U at effective energy x >= 0.
double eval_base(const SigmoidUtility& u, double x);

// U_k at raw energy r >= 0.
double eval_user(const UserProfile& user, double r);

// dU_k/dr at raw energy r. At the kink r = rmid_raw the two one-sided
// derivatives differ unless q = 1/2; the decreasing-branch (right-hand)
// value is returned there, which is the branch the allocator works on.
double marginal_user(const UserProfile& user, double r);

// log(marginal_user). Exact for arguments whose marginal underflows a
// double; -inf when q = 1 on the decreasing branch.
double log_marginal_user(const UserProfile& user, double r);

// Decreasing-branch marginal as a function of surplus s = r - rmid_raw:
//   ubar(s) = peak_marginal * exp(-p*q*s), s >= 0.
double branch_eval(const UserProfile& user, double s);
double log_branch_eval(const UserProfile& user, double s);

// Inverse of branch_eval on (0, peak_marginal]. Throws std::domain_error
// outside that interval (users with peak_marginal = 0 have an empty
// domain and must be pinned at rmid_raw by the caller).
double branch_inverse(const UserProfile& user, double u);

// Inverse taking log(u) directly; valid for log_u <= log(peak_marginal).
double branch_inverse_log(const UserProfile& user, double log_u);

// Elementwise U_k(r_k) for per-user arrays sharing p and rmid.
Eigen::ArrayXd eval_users(double p, double rmid, const Eigen::ArrayXd& q,
                          const Eigen::ArrayXd& r);

}  // namespace renalloc

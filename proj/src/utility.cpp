#include "renalloc/utility.hpp"

#include <cmath>
#include <stdexcept>

namespace renalloc {

namespace {

void check_params(double q, double p, double rmid) {
    if (!(q > 0.0) || q > 1.0)
        throw std::invalid_argument("sigmoid utility: q must be in (0, 1]");
    if (!(p > 0.0))
        throw std::invalid_argument("sigmoid utility: p must be > 0");
    if (!(rmid > 0.0))
        throw std::invalid_argument("sigmoid utility: rmid must be > 0");
}

}  // namespace

SigmoidUtility::SigmoidUtility(double q, double p, double rmid)
    : q(q), p(p), rmid(rmid) {
    check_params(q, p, rmid);
}

UserProfile::UserProfile(double q, double p, double rmid)
    : base(q, p, rmid),
      rmid_raw(rmid / q),
      peak_marginal(p * q * (1.0 - q)) {}

double eval_base(const SigmoidUtility& u, double x) {
    if (!(x >= 0.0)) throw std::domain_error("eval_base: x must be >= 0");
    const double t = u.p * (x - u.rmid);
    // Each branch has a non-positive exponent, so exp never overflows.
    return x < u.rmid ? u.q * std::exp(t) : 1.0 - (1.0 - u.q) * std::exp(-t);
}

double eval_user(const UserProfile& user, double r) {
    if (!(r >= 0.0)) throw std::domain_error("eval_user: r must be >= 0");
    return eval_base(user.base, user.q() * r);
}

double marginal_user(const UserProfile& user, double r) {
    if (!(r >= 0.0)) throw std::domain_error("marginal_user: r must be >= 0");
    const double q = user.q();
    const double t = user.p() * (q * r - user.rmid());
    if (r < user.rmid_raw) return user.p() * q * q * std::exp(t);
    return user.peak_marginal * std::exp(-t);
}

double log_marginal_user(const UserProfile& user, double r) {
    if (!(r >= 0.0)) throw std::domain_error("log_marginal_user: r must be >= 0");
    const double q = user.q();
    const double t = user.p() * (q * r - user.rmid());
    if (r < user.rmid_raw) return std::log(user.p()) + 2.0 * std::log(q) + t;
    return std::log(user.peak_marginal) - t;
}

double branch_eval(const UserProfile& user, double s) {
    if (!(s >= 0.0)) throw std::domain_error("branch_eval: s must be >= 0");
    return user.peak_marginal * std::exp(-user.p() * user.q() * s);
}

double log_branch_eval(const UserProfile& user, double s) {
    if (!(s >= 0.0)) throw std::domain_error("log_branch_eval: s must be >= 0");
    return std::log(user.peak_marginal) - user.p() * user.q() * s;
}

double branch_inverse(const UserProfile& user, double u) {
    if (!(u > 0.0) || u > user.peak_marginal)
        throw std::domain_error("branch_inverse: u must be in (0, peak_marginal]");
    return std::log(user.peak_marginal / u) / (user.p() * user.q());
}

double branch_inverse_log(const UserProfile& user, double log_u) {
    const double log_m = std::log(user.peak_marginal);
    if (!(log_u <= log_m))
        throw std::domain_error("branch_inverse_log: log_u must be <= log(peak_marginal)");
    return (log_m - log_u) / (user.p() * user.q());
}

Eigen::ArrayXd eval_users(double p, double rmid, const Eigen::ArrayXd& q,
                          const Eigen::ArrayXd& r) {
    if (q.size() != r.size())
        throw std::invalid_argument("eval_users: q and r must have equal length");
    const Eigen::ArrayXd x = q * r;
    const Eigen::ArrayXd t = p * (x - rmid);
    return (x < rmid).select(q * t.exp(), 1.0 - (1.0 - q) * (-t).exp());
}

}  // namespace renalloc

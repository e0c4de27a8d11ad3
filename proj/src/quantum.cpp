#include "bell/quantum.hpp"

#include <cmath>

namespace bell::quantum {

double singles_probability(Side /*side*/, Outcome /*outcome*/, Angle /*theta*/) {
    // Angle validity is enforced by the Angle type itself.
    return 0.5;
}

double joint_probability(Outcome out_l, Outcome out_r, Angle theta_l, Angle theta_r) {
    const double delta = theta_l - theta_r;
    const double s = std::sin(delta);
    const double c = std::cos(delta);
    return (out_l == out_r) ? s * s / 2.0 : c * c / 2.0;
}

JointDistribution exact_distribution(Angle theta_l, Angle theta_r) {
    const double delta = theta_l - theta_r;
    const double same = std::sin(delta) * std::sin(delta) / 2.0;
    const double diff = std::cos(delta) * std::cos(delta) / 2.0;
    return JointDistribution::exact(same, diff, diff, same);
}

double correlation(Angle theta_l, Angle theta_r) {
    const JointDistribution d = exact_distribution(theta_l, theta_r);
    return (d.p_pp + d.p_mm) - (d.p_pm + d.p_mp);
}

double correlation_closed_form(double delta) { return -std::cos(2.0 * delta); }

double chsh_value(const chsh::ChshSettings& s) {
    return correlation(s.theta_a, s.theta_b) - correlation(s.theta_a, s.theta_b_prime) +
           correlation(s.theta_a_prime, s.theta_b) +
           correlation(s.theta_a_prime, s.theta_b_prime);
}

}  // namespace bell::quantum

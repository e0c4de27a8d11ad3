#pragma once

#include "bell/chsh.hpp"
#include "bell/types.hpp"

namespace bell::quantum {

enum class Side { left, right };

/// Single-photon probability of measuring `outcome` behind a polarizer at
/// `theta`. Both outcomes are equally likely at every angle, so this is
/// identically 1/2.
double singles_probability(Side side, Outcome outcome, Angle theta);

/// Joint probability of (out_l, out_r) at angles (theta_l, theta_r):
/// sin^2(theta_l - theta_r)/2 for equal outcomes, cos^2(theta_l - theta_r)/2
/// for opposite ones.
double joint_probability(Outcome out_l, Outcome out_r, Angle theta_l, Angle theta_r);

/// All four joint probabilities at one angle pair. Exact; no standard errors.
JointDistribution exact_distribution(Angle theta_l, Angle theta_r);

/// E(theta_l, theta_r) = p_pp + p_mm - p_pm - p_mp, computed from the exact
/// distribution. Equal to -cos 2(theta_l - theta_r); see
/// correlation_closed_form.
double correlation(Angle theta_l, Angle theta_r);

/// -cos(2 delta), the closed form of correlation() as a function of the
/// angle difference.
double correlation_closed_form(double delta);

/// The exact S statistic at the given settings.
double chsh_value(const chsh::ChshSettings& settings);

}  // namespace bell::quantum

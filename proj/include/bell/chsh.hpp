#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "bell/types.hpp"

namespace bell::chsh {

/// The four detector-angle pairs entering the S statistic.
enum class SettingPair : int { ab = 0, ab_prime = 1, a_prime_b = 2, a_prime_b_prime = 3 };

inline constexpr std::array<SettingPair, 4> kAllPairs{
    SettingPair::ab, SettingPair::ab_prime, SettingPair::a_prime_b,
    SettingPair::a_prime_b_prime};

std::string_view pair_label(SettingPair pair);                       // "ab", "abp", "apb", "apbp"
std::optional<SettingPair> pair_from_label(std::string_view label);

/// The four detector angles of a CHSH run.
struct ChshSettings {
    Angle theta_a;
    Angle theta_a_prime;
    Angle theta_b;
    Angle theta_b_prime;

    [[nodiscard]] std::pair<Angle, Angle> angles(SettingPair pair) const;
};

/// A value with an optional standard error.
struct Estimate {
    double value = 0.0;
    std::optional<double> se;
};

enum class Verdict { satisfies_bound, violates_bound, inconclusive };

std::string_view verdict_label(Verdict verdict);

/// S = E_ab - E_ab' + E_a'b + E_a'b' with per-term correlations and the
/// bound verdict.
///
/// Verdict rules: with a standard error, violates_bound needs |S| - 2 > 3 se,
/// satisfies_bound needs |S| <= 2, and anything in between is inconclusive;
/// without one, the split is |S| > 2 + 1e-12.
struct ChshResult {
    double s_value = 0.0;
    std::optional<double> standard_error;
    std::array<Estimate, 4> correlations{};  // indexed by SettingPair
    Verdict verdict = Verdict::satisfies_bound;
};

/// E = p_pp + p_mm - p_pm - p_mp. When the distribution carries sample
/// errors, the returned se is sqrt((1 - E^2)/n), exact for products of
/// +1/-1 outcomes.
Estimate correlation_from_distribution(const JointDistribution& dist);

/// Combines four correlations (indexed by SettingPair) into S. Standard
/// errors combine as the root of summed squares and must be present on all
/// four terms or on none.
ChshResult chsh_from_correlations(const std::array<Estimate, 4>& correlations);

/// (|S| - 2) / se. Negative when the bound is satisfied with room to spare.
double violation_sigmas(double s_value, double standard_error);

}  // namespace bell::chsh

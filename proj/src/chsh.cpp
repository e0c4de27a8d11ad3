#include "bell/chsh.hpp"

#include <cmath>
#include <stdexcept>

namespace bell::chsh {

namespace {
constexpr double kExactTolerance = 1e-12;
constexpr double kCorrelationSlack = 1e-9;
}  // namespace

std::string_view pair_label(SettingPair pair) {
    switch (pair) {
        case SettingPair::ab: return "ab";
        case SettingPair::ab_prime: return "abp";
        case SettingPair::a_prime_b: return "apb";
        case SettingPair::a_prime_b_prime: return "apbp";
    }
    throw std::invalid_argument("bad setting pair");
}

std::optional<SettingPair> pair_from_label(std::string_view label) {
    for (SettingPair pair : kAllPairs) {
        if (label == pair_label(pair)) return pair;
    }
    return std::nullopt;
}

std::pair<Angle, Angle> ChshSettings::angles(SettingPair pair) const {
    switch (pair) {
        case SettingPair::ab: return {theta_a, theta_b};
        case SettingPair::ab_prime: return {theta_a, theta_b_prime};
        case SettingPair::a_prime_b: return {theta_a_prime, theta_b};
        case SettingPair::a_prime_b_prime: return {theta_a_prime, theta_b_prime};
    }
    throw std::invalid_argument("bad setting pair");
}

std::string_view verdict_label(Verdict verdict) {
    switch (verdict) {
        case Verdict::satisfies_bound: return "satisfies_bound";
        case Verdict::violates_bound: return "violates_bound";
        case Verdict::inconclusive: return "inconclusive";
    }
    throw std::invalid_argument("bad verdict");
}

Estimate correlation_from_distribution(const JointDistribution& dist) {
    if (std::abs(dist.sum() - 1.0) > kCorrelationSlack) {
        throw std::invalid_argument("distribution is not normalized");
    }
    Estimate e;
    e.value = (dist.p_pp + dist.p_mm) - (dist.p_pm + dist.p_mp);
    if (dist.n_samples && *dist.n_samples > 0) {
        // The per-trial outcome product is +1/-1, so var = 1 - E^2 exactly.
        e.se = std::sqrt((1.0 - e.value * e.value) /
                         static_cast<double>(*dist.n_samples));
    }
    return e;
}

ChshResult chsh_from_correlations(const std::array<Estimate, 4>& correlations) {
    std::size_t with_se = 0;
    for (const Estimate& e : correlations) {
        if (!(std::abs(e.value) <= 1.0 + kCorrelationSlack)) {
            throw std::invalid_argument("correlation magnitude exceeds 1");
        }
        if (e.se) {
            if (!(std::isfinite(*e.se) && *e.se >= 0.0)) {
                throw std::invalid_argument("standard error must be finite and >= 0");
            }
            ++with_se;
        }
    }
    if (with_se != 0 && with_se != 4) {
        throw std::invalid_argument("standard errors must be present on all correlations or none");
    }

    ChshResult result;
    result.correlations = correlations;
    const auto& e = correlations;
    result.s_value = e[0].value - e[1].value + e[2].value + e[3].value;
    if (with_se == 4) {
        double var = 0.0;
        for (const Estimate& term : correlations) var += *term.se * *term.se;
        result.standard_error = std::sqrt(var);
    }

    const double excess = std::abs(result.s_value) - 2.0;
    if (result.standard_error) {
        if (excess > 3.0 * *result.standard_error) {
            result.verdict = Verdict::violates_bound;
        } else if (excess <= 0.0) {
            result.verdict = Verdict::satisfies_bound;
        } else {
            result.verdict = Verdict::inconclusive;
        }
    } else {
        result.verdict = excess > kExactTolerance ? Verdict::violates_bound
                                                  : Verdict::satisfies_bound;
    }
    return result;
}

double violation_sigmas(double s_value, double standard_error) {
    if (!(standard_error > 0.0) || !std::isfinite(standard_error)) {
        throw std::invalid_argument("standard error must be positive");
    }
    return (std::abs(s_value) - 2.0) / standard_error;
}

}  // namespace bell::chsh

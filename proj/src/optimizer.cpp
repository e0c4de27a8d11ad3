#include "bell/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "bell/rng.hpp"

namespace bell::optimizer {

namespace {

Outcome outcome_from_bit(unsigned bit) {
    return bit == 0 ? Outcome::plus() : Outcome::minus();
}

}  // namespace

std::array<StrategyReport, 16> enumerate_deterministic(const chsh::ChshSettings& /*settings*/) {
    // S = a1 b1 - a1 b2 + a2 b1 + a2 b2 = a1 (b1 - b2) + a2 (b1 + b2): one
    // parenthesis is always 0 and the other +2 or -2, so every vertex lands
    // on the bound. The angle values never enter.
    std::array<StrategyReport, 16> reports;
    for (unsigned bits = 0; bits < 16; ++bits) {
        DeterministicStrategy strat{
            outcome_from_bit(bits & 1u),
            outcome_from_bit((bits >> 1) & 1u),
            outcome_from_bit((bits >> 2) & 1u),
            outcome_from_bit((bits >> 3) & 1u),
        };
        const int a1 = strat.a_at_theta_a.sign();
        const int a2 = strat.a_at_theta_a_prime.sign();
        const int b1 = strat.b_at_theta_b.sign();
        const int b2 = strat.b_at_theta_b_prime.sign();
        const int s = a1 * b1 - a1 * b2 + a2 * b1 + a2 * b2;
        reports[bits] = StrategyReport{strat, static_cast<double>(s)};
    }
    return reports;
}

MixtureSearchResult max_mixture_chsh(const chsh::ChshSettings& settings,
                                     std::uint64_t n_random_mixtures, std::uint64_t seed) {
    if (n_random_mixtures < 1) {
        throw std::invalid_argument("mixture count must be >= 1");
    }
    const auto vertices = enumerate_deterministic(settings);

    MixtureSearchResult result;
    result.n_mixtures = n_random_mixtures;
    for (const StrategyReport& v : vertices) {
        result.max_abs_vertex_s = std::max(result.max_abs_vertex_s, std::abs(v.s_value));
    }

    Rng rng(seed);
    std::array<double, 16> weights{};
    for (std::uint64_t m = 0; m < n_random_mixtures; ++m) {
        // Dirichlet(1): normalized exponentials, uniform on the simplex.
        double total = 0.0;
        for (double& w : weights) {
            w = -std::log(1.0 - rng.uniform());
            total += w;
        }
        if (total == 0.0) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            s += weights[i] / total * vertices[i].s_value;
        }
        result.max_abs_mixture_s = std::max(result.max_abs_mixture_s, std::abs(s));
    }
    return result;
}

ParametricSearchResult optimize_parametric(std::string_view model_family,
                                           const chsh::ChshSettings& settings,
                                           std::uint64_t grid_or_iterations,
                                           std::uint64_t n_samples_per_eval, std::uint64_t seed,
                                           unsigned n_threads) {
    if (grid_or_iterations < 1) {
        throw std::invalid_argument("iteration count must be >= 1");
    }
    if (n_samples_per_eval < 1) {
        throw std::invalid_argument("samples per evaluation must be >= 1");
    }
    const lhv::ModelFamily& family = lhv::model_family(model_family);
    const std::size_t dims = family.params.size();

    // Axis-aligned grid with roughly grid_or_iterations candidates in total.
    std::uint64_t per_axis = grid_or_iterations;
    if (dims > 1) {
        per_axis = static_cast<std::uint64_t>(
            std::floor(std::pow(static_cast<double>(grid_or_iterations), 1.0 / dims)));
        per_axis = std::max<std::uint64_t>(per_axis, 2);
    }

    std::vector<std::vector<double>> axes(dims);
    for (std::size_t k = 0; k < dims; ++k) {
        const auto& spec = family.params[k];
        axes[k].reserve(per_axis);
        if (per_axis == 1) {
            axes[k].push_back((spec.lo + spec.hi) / 2.0);
            continue;
        }
        for (std::uint64_t i = 0; i < per_axis; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(per_axis - 1);
            axes[k].push_back(spec.lo + t * (spec.hi - spec.lo));
        }
    }

    ParametricSearchResult result;
    result.family = family.name;
    for (const auto& spec : family.params) result.param_names.push_back(spec.name);
    result.best_params.assign(dims, 0.0);

    std::vector<double> candidate(dims, 0.0);
    std::vector<std::uint64_t> index(dims, 0);
    bool first = true;
    bool done = false;
    while (!done) {
        for (std::size_t k = 0; k < dims; ++k) candidate[k] = axes[k][index[k]];

        const lhv::LhvModel model = family.make(candidate);
        std::array<chsh::Estimate, 4> correlations;
        for (chsh::SettingPair pair : chsh::kAllPairs) {
            const auto [tl, tr] = settings.angles(pair);
            // Distinct substream per (candidate, pair) keeps evaluations independent.
            const std::uint64_t eval_seed =
                splitmix64(seed ^ splitmix64(result.evaluations * 4 +
                                             static_cast<std::uint64_t>(pair)));
            const JointDistribution dist = lhv::estimate_distribution(
                model, tl, tr, n_samples_per_eval, eval_seed, n_threads);
            correlations[static_cast<std::size_t>(pair)] =
                chsh::correlation_from_distribution(dist);
        }
        const chsh::ChshResult chsh_result = chsh::chsh_from_correlations(correlations);
        const double abs_s = std::abs(chsh_result.s_value);
        if (first || abs_s > result.best_abs_s) {
            first = false;
            result.best_abs_s = abs_s;
            result.best_standard_error = chsh_result.standard_error.value_or(0.0);
            result.best_params = candidate;
        }
        ++result.evaluations;

        // Advance the mixed-radix counter over the grid.
        done = true;
        for (std::size_t k = 0; k < dims; ++k) {
            if (++index[k] < axes[k].size()) {
                done = false;
                break;
            }
            index[k] = 0;
        }
        if (dims == 0) done = true;
        if (result.evaluations >= grid_or_iterations && dims > 0) done = true;
    }
    return result;
}

}  // namespace bell::optimizer

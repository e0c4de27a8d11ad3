#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "bell/chsh.hpp"
#include "bell/lhv.hpp"
#include "bell/types.hpp"

namespace bell::optimizer {

/// A fixed +1/-1 assignment to each local setting: one vertex of the local
/// CHSH polytope. There are exactly 16.
struct DeterministicStrategy {
    Outcome a_at_theta_a = Outcome::plus();
    Outcome a_at_theta_a_prime = Outcome::plus();
    Outcome b_at_theta_b = Outcome::plus();
    Outcome b_at_theta_b_prime = Outcome::plus();
};

struct StrategyReport {
    DeterministicStrategy strategy;
    double s_value = 0.0;  // always exactly +2 or -2
};

/// All 16 deterministic strategies with their S values. Each correlation is
/// the product of the two fixed outcomes, so S never depends on the angle
/// values themselves.
std::array<StrategyReport, 16> enumerate_deterministic(const chsh::ChshSettings& settings);

struct MixtureSearchResult {
    double max_abs_mixture_s = 0.0;  // over the sampled convex mixtures
    double max_abs_vertex_s = 0.0;   // over the 16 vertices (always 2)
    std::uint64_t n_mixtures = 0;
};

/// Samples n_random_mixtures weight vectors over the 16 strategies
/// (Dirichlet(1), i.e. uniform on the simplex) and returns the largest |S|
/// of any mixture, together with the vertex maximum.
MixtureSearchResult max_mixture_chsh(const chsh::ChshSettings& settings,
                                     std::uint64_t n_random_mixtures, std::uint64_t seed);

struct ParametricSearchResult {
    std::string family;
    std::vector<std::string> param_names;
    std::vector<double> best_params;
    double best_abs_s = 0.0;
    double best_standard_error = 0.0;
    std::uint64_t evaluations = 0;
};

/// Grid search over a registered local family: every candidate model is
/// scored by a Monte Carlo |S| estimate with n_samples_per_eval lambda draws
/// per setting pair. grid_or_iterations caps the number of candidates.
ParametricSearchResult optimize_parametric(std::string_view model_family,
                                           const chsh::ChshSettings& settings,
                                           std::uint64_t grid_or_iterations,
                                           std::uint64_t n_samples_per_eval, std::uint64_t seed,
                                           unsigned n_threads = 0);

}  // namespace bell::optimizer

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bell/chsh.hpp"
#include "bell/lhv.hpp"
#include "bell/types.hpp"

namespace bell::sim {

/// One simulated run: which setting pair was active and what both detectors
/// reported.
struct TrialRecord {
    std::uint64_t trial_index = 0;
    chsh::SettingPair pair = chsh::SettingPair::ab;
    Outcome outcome_l = Outcome::plus();
    Outcome outcome_r = Outcome::plus();
};

struct PairStats {
    std::uint64_t count = 0;
    chsh::Estimate correlation;
};

struct ExperimentSummary {
    std::uint64_t n_trials = 0;
    std::array<PairStats, 4> pairs{};  // indexed by SettingPair; counts sum to n_trials
    chsh::ChshResult chsh;
    /// (|S| - 2) / se_S; absent in the degenerate case se_S = 0.
    std::optional<double> violation_sigmas;
    std::uint64_t seed = 0;
    std::string source;  // "qm" or the model name
    chsh::ChshSettings settings;
};

/// Simulates n_trials independent runs: each trial picks one of the four
/// setting pairs uniformly at random, then draws the outcome pair from the
/// exact quantum distribution at those angles. Fully deterministic for a
/// fixed seed, independent of n_threads. If `records` is non-null it
/// receives the full trial stream. Requires n_trials >= 4, and every pair
/// must end up with at least one trial.
ExperimentSummary run_experiment(const chsh::ChshSettings& settings, std::uint64_t n_trials,
                                 std::uint64_t seed, std::vector<TrialRecord>* records = nullptr,
                                 unsigned n_threads = 0);

/// Same, but outcomes come from the hidden-variable model: each trial draws
/// lambda and applies the model's responses at the chosen pair's angles.
ExperimentSummary run_experiment(const lhv::LhvModel& model, const chsh::ChshSettings& settings,
                                 std::uint64_t n_trials, std::uint64_t seed,
                                 std::vector<TrialRecord>* records = nullptr,
                                 unsigned n_threads = 0);

/// Recomputes the summary statistics from a stored trial stream. Shares the
/// tally arithmetic with run_experiment, so re-ingesting an exported stream
/// reproduces the original summary bit for bit. Throws if any setting pair
/// is missing, naming the pair.
ExperimentSummary estimate_from_records(std::span<const TrialRecord> records,
                                        const chsh::ChshSettings& settings,
                                        std::uint64_t seed = 0, std::string source = "records");

}  // namespace bell::sim

#include "bell/experiment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bell/quantum.hpp"
#include "bell/rng.hpp"

namespace bell::sim {

namespace {

struct PairTally {
    std::uint64_t n = 0;
    std::uint64_t product_plus = 0;  // trials whose outcome product is +1
};

struct TrialTally {
    std::array<PairTally, 4> pairs{};
};

void tally_trial(TrialTally& tally, chsh::SettingPair pair, Outcome l, Outcome r) {
    PairTally& p = tally.pairs[static_cast<std::size_t>(pair)];
    ++p.n;
    if (l * r > 0) ++p.product_plus;
}

/// Shared final arithmetic: both the generator and the record re-ingestion
/// path reduce to integer tallies first, so their summaries agree bit for
/// bit.
ExperimentSummary summarize(const TrialTally& tally, const chsh::ChshSettings& settings,
                            std::uint64_t seed, std::string source) {
    ExperimentSummary summary;
    summary.settings = settings;
    summary.seed = seed;
    summary.source = std::move(source);

    std::array<chsh::Estimate, 4> correlations;
    for (chsh::SettingPair pair : chsh::kAllPairs) {
        const auto idx = static_cast<std::size_t>(pair);
        const PairTally& p = tally.pairs[idx];
        if (p.n == 0) {
            throw std::invalid_argument("no trials for setting pair '" +
                                        std::string(chsh::pair_label(pair)) + "'");
        }
        summary.n_trials += p.n;
        const double n = static_cast<double>(p.n);
        const double e = (2.0 * static_cast<double>(p.product_plus) - n) / n;
        chsh::Estimate est;
        est.value = e;
        est.se = std::sqrt((1.0 - e * e) / n);
        correlations[idx] = est;
        summary.pairs[idx] = PairStats{p.n, est};
    }
    summary.chsh = chsh::chsh_from_correlations(correlations);
    if (summary.chsh.standard_error && *summary.chsh.standard_error > 0.0) {
        summary.violation_sigmas =
            chsh::violation_sigmas(summary.chsh.s_value, *summary.chsh.standard_error);
    }
    return summary;
}

/// One trial under the exact quantum distribution: the cumulative
/// probabilities of the chosen pair decide the outcome slot.
struct QmSampler {
    std::array<std::array<double, 3>, 4> cumulative{};

    explicit QmSampler(const chsh::ChshSettings& settings) {
        for (chsh::SettingPair pair : chsh::kAllPairs) {
            const auto [tl, tr] = settings.angles(pair);
            const JointDistribution d = quantum::exact_distribution(tl, tr);
            auto& c = cumulative[static_cast<std::size_t>(pair)];
            c[0] = d.p_pp;
            c[1] = d.p_pp + d.p_pm;
            c[2] = d.p_pp + d.p_pm + d.p_mp;
        }
    }

    std::pair<Outcome, Outcome> operator()(Rng& rng, chsh::SettingPair pair, Angle, Angle) const {
        const auto& c = cumulative[static_cast<std::size_t>(pair)];
        const double u = rng.uniform();
        if (u < c[0]) return {Outcome::plus(), Outcome::plus()};
        if (u < c[1]) return {Outcome::plus(), Outcome::minus()};
        if (u < c[2]) return {Outcome::minus(), Outcome::plus()};
        return {Outcome::minus(), Outcome::minus()};
    }
};

struct ModelSampler {
    explicit ModelSampler(const lhv::LhvModel* m) : model(m) {}

    std::pair<Outcome, Outcome> operator()(Rng& rng, chsh::SettingPair, Angle theta_l,
                                           Angle theta_r) {
        model->sample_into(rng, theta_l, theta_r, lambda);
        return model->respond(lambda, theta_l, theta_r);
    }

    const lhv::LhvModel* model;
    lhv::LambdaSample lambda;
};

template <typename OutcomeSampler>
ExperimentSummary run_generic(OutcomeSampler make_sampler, const chsh::ChshSettings& settings,
                              std::uint64_t n_trials, std::uint64_t seed, std::string source,
                              std::vector<TrialRecord>* records, unsigned n_threads) {
    if (n_trials < 4) {
        throw std::invalid_argument("need at least 4 trials to feed all four setting pairs");
    }
    if (records) {
        records->assign(static_cast<std::size_t>(n_trials), TrialRecord{});
    }

    const std::array<std::pair<Angle, Angle>, 4> pair_angles = {
        settings.angles(chsh::SettingPair::ab),
        settings.angles(chsh::SettingPair::ab_prime),
        settings.angles(chsh::SettingPair::a_prime_b),
        settings.angles(chsh::SettingPair::a_prime_b_prime),
    };

    auto tallies = run_chunked<TrialTally>(
        n_trials, seed,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end, Rng& rng, TrialTally& tally) {
            auto sampler = make_sampler();
            for (std::uint64_t i = begin; i < end; ++i) {
                const auto pair = static_cast<chsh::SettingPair>(rng.uniform_below(4));
                const auto [tl, tr] = pair_angles[static_cast<std::size_t>(pair)];
                const auto [l, r] = sampler(rng, pair, tl, tr);
                tally_trial(tally, pair, l, r);
                if (records) {
                    (*records)[static_cast<std::size_t>(i)] = TrialRecord{i, pair, l, r};
                }
            }
        },
        n_threads);

    TrialTally total;
    for (const TrialTally& t : tallies) {
        for (std::size_t i = 0; i < 4; ++i) {
            total.pairs[i].n += t.pairs[i].n;
            total.pairs[i].product_plus += t.pairs[i].product_plus;
        }
    }
    return summarize(total, settings, seed, std::move(source));
}

}  // namespace

ExperimentSummary run_experiment(const chsh::ChshSettings& settings, std::uint64_t n_trials,
                                 std::uint64_t seed, std::vector<TrialRecord>* records,
                                 unsigned n_threads) {
    const QmSampler shared(settings);
    return run_generic([&] { return shared; }, settings, n_trials, seed, "qm", records,
                       n_threads);
}

ExperimentSummary run_experiment(const lhv::LhvModel& model, const chsh::ChshSettings& settings,
                                 std::uint64_t n_trials, std::uint64_t seed,
                                 std::vector<TrialRecord>* records, unsigned n_threads) {
    return run_generic([&] { return ModelSampler(&model); }, settings, n_trials, seed,
                       model.name(), records, n_threads);
}

ExperimentSummary estimate_from_records(std::span<const TrialRecord> records,
                                        const chsh::ChshSettings& settings, std::uint64_t seed,
                                        std::string source) {
    TrialTally tally;
    for (const TrialRecord& record : records) {
        tally_trial(tally, record.pair, record.outcome_l, record.outcome_r);
    }
    return summarize(tally, settings, seed, std::move(source));
}

}  // namespace bell::sim

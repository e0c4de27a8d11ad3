#include "bell/lhv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bell::lhv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed boundary convention: a vanishing cosine counts as +1. The boundary
// set has probability zero, so the choice never shows up in estimates.
Outcome sign_of(double x) { return x >= 0.0 ? Outcome::plus() : Outcome::minus(); }

double frac(double x) { return x - std::floor(x); }

Outcome bell_sign_response(std::span<const double> photon, Angle theta, double analyzer_offset) {
    return sign_of(std::cos(2.0 * (photon[0] - theta.radians() - analyzer_offset)));
}

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

// Outcome pair -> tally slot {pp, pm, mp, mm}.
std::size_t outcome_slot(Outcome l, Outcome r) {
    return (l == Outcome::plus() ? 0u : 2u) + (r == Outcome::plus() ? 0u : 1u);
}

struct JointTally {
    std::array<std::uint64_t, 4> counts{};
};

JointTally sum_tallies(const std::vector<JointTally>& tallies) {
    JointTally total;
    for (const JointTally& t : tallies) {
        for (std::size_t i = 0; i < 4; ++i) total.counts[i] += t.counts[i];
    }
    return total;
}

}  // namespace

std::string_view locality_label(Locality locality) {
    return locality == Locality::local ? "local" : "nonlocal";
}

LhvModel::LhvModel(std::string name, std::size_t photon_dim, std::size_t detector_l_dim,
                   std::size_t detector_r_dim, PhotonSampler photon_sampler,
                   DetectorSampler detector_l_sampler, DetectorSampler detector_r_sampler,
                   std::variant<LocalResponses, NonlocalResponses> responses)
    : name_(std::move(name)),
      photon_dim_(photon_dim),
      detector_l_dim_(detector_l_dim),
      detector_r_dim_(detector_r_dim),
      photon_sampler_(std::move(photon_sampler)),
      detector_l_sampler_(std::move(detector_l_sampler)),
      detector_r_sampler_(std::move(detector_r_sampler)),
      responses_(std::move(responses)) {
    require(photon_dim_ == 0 || static_cast<bool>(photon_sampler_),
            "photon sampler required when photon_dim > 0");
    require(detector_l_dim_ == 0 || static_cast<bool>(detector_l_sampler_),
            "left detector sampler required when detector_l_dim > 0");
    require(detector_r_dim_ == 0 || static_cast<bool>(detector_r_sampler_),
            "right detector sampler required when detector_r_dim > 0");
}

Locality LhvModel::locality() const noexcept {
    return std::holds_alternative<LocalResponses>(responses_) ? Locality::local
                                                              : Locality::nonlocal;
}

LambdaSample LhvModel::sample(Rng& rng, Angle theta_l, Angle theta_r) const {
    LambdaSample out;
    sample_into(rng, theta_l, theta_r, out);
    return out;
}

void LhvModel::sample_into(Rng& rng, Angle theta_l, Angle theta_r, LambdaSample& out) const {
    out.photon_vars.resize(photon_dim_);
    if (photon_dim_ > 0) photon_sampler_(rng, out.photon_vars);
    resample_detectors(rng, theta_l, theta_r, out);
}

void LhvModel::resample_detectors(Rng& rng, Angle theta_l, Angle theta_r,
                                  LambdaSample& sample) const {
    sample.detector_l_vars.resize(detector_l_dim_);
    if (detector_l_dim_ > 0) detector_l_sampler_(rng, theta_l, sample.detector_l_vars);
    sample.detector_r_vars.resize(detector_r_dim_);
    if (detector_r_dim_ > 0) detector_r_sampler_(rng, theta_r, sample.detector_r_vars);
}

std::pair<Outcome, Outcome> LhvModel::respond(const LambdaSample& lambda, Angle theta_l,
                                              Angle theta_r) const {
    require(lambda.photon_vars.size() == photon_dim_ &&
                lambda.detector_l_vars.size() == detector_l_dim_ &&
                lambda.detector_r_vars.size() == detector_r_dim_,
            "lambda sample dimensions do not match the model");
    if (const auto* local = std::get_if<LocalResponses>(&responses_)) {
        return {local->left(lambda.photon_vars, lambda.detector_l_vars, theta_l),
                local->right(lambda.photon_vars, lambda.detector_r_vars, theta_r)};
    }
    const auto& nl = std::get<NonlocalResponses>(responses_);
    return {nl.left(lambda.photon_vars, lambda.detector_l_vars, lambda.detector_r_vars, theta_l,
                    theta_r),
            nl.right(lambda.photon_vars, lambda.detector_r_vars, lambda.detector_l_vars, theta_r,
                     theta_l)};
}

std::pair<Outcome, Outcome> respond(const LhvModel& model, const LambdaSample& lambda,
                                    Angle theta_l, Angle theta_r) {
    return model.respond(lambda, theta_l, theta_r);
}

namespace {

PhotonSampler uniform_angle_sampler() {
    return [](Rng& rng, std::span<double> out) { out[0] = rng.uniform() * kTwoPi; };
}

LhvModel make_bell_sign(std::string name, double right_offset) {
    LocalResponses responses;
    responses.left = [](std::span<const double> photon, std::span<const double>, Angle theta) {
        return bell_sign_response(photon, theta, 0.0);
    };
    responses.right = [right_offset](std::span<const double> photon, std::span<const double>,
                                     Angle theta) {
        const Outcome o = bell_sign_response(photon, theta, right_offset);
        return o == Outcome::plus() ? Outcome::minus() : Outcome::plus();
    };
    return LhvModel(std::move(name), 1, 0, 0, uniform_angle_sampler(), nullptr, nullptr,
                    responses);
}

LhvModel make_bell_sign_detector_noise(double epsilon) {
    require(epsilon >= 0.0 && epsilon <= 1.0 && std::isfinite(epsilon),
            "epsilon must be in [0, 1]");
    LocalResponses responses;
    responses.left = [](std::span<const double> photon, std::span<const double>, Angle theta) {
        return bell_sign_response(photon, theta, 0.0);
    };
    responses.right = [epsilon](std::span<const double> photon,
                                std::span<const double> detector, Angle theta) {
        Outcome o = bell_sign_response(photon, theta, 0.0) == Outcome::plus()
                        ? Outcome::minus()
                        : Outcome::plus();
        if (detector[0] < epsilon) {
            o = (o == Outcome::plus()) ? Outcome::minus() : Outcome::plus();
        }
        return o;
    };
    DetectorSampler noise = [](Rng& rng, Angle, std::span<double> out) {
        out[0] = rng.uniform();
    };
    return LhvModel("bell_sign_detector_noise", 1, 0, 1, uniform_angle_sampler(), nullptr,
                    std::move(noise), responses);
}

LhvModel make_qm_mimic() {
    PhotonSampler photon = [](Rng& rng, std::span<double> out) {
        out[0] = rng.uniform() * kTwoPi;  // phi
        out[1] = rng.uniform();           // u
    };
    NonlocalResponses responses;
    responses.left = [](std::span<const double> photon_vars, std::span<const double>,
                        std::span<const double>, Angle theta_own, Angle) {
        return bell_sign_response(photon_vars, theta_own, 0.0);
    };
    responses.right = [](std::span<const double> photon_vars, std::span<const double>,
                         std::span<const double>, Angle theta_own, Angle theta_other) {
        // Full information: reads the left angle to oppose the left outcome
        // with probability cos^2(theta_L - theta_R).
        const Outcome left = bell_sign_response(photon_vars, theta_other, 0.0);
        const double c = std::cos(theta_other - theta_own);
        const bool oppose = photon_vars[1] < c * c;
        const Outcome flipped = left == Outcome::plus() ? Outcome::minus() : Outcome::plus();
        return oppose ? flipped : left;
    };
    return LhvModel("qm_mimic_nonlocal", 2, 0, 0, std::move(photon), nullptr, nullptr,
                    responses);
}

}  // namespace

LhvModel builtin_model(std::string_view name, double epsilon) {
    if (name == "bell_sign") return make_bell_sign("bell_sign", 0.0);
    if (name == "bell_sign_detector_noise") return make_bell_sign_detector_noise(epsilon);
    if (name == "qm_mimic_nonlocal") return make_qm_mimic();
    throw not_found_error("unknown model: " + std::string(name));
}

std::vector<std::string> builtin_model_names() {
    return {"bell_sign", "bell_sign_detector_noise", "qm_mimic_nonlocal"};
}

JointDistribution estimate_distribution(const LhvModel& model, Angle theta_l, Angle theta_r,
                                        std::uint64_t n, std::uint64_t seed,
                                        unsigned n_threads) {
    require(n >= 1, "sample count must be >= 1");
    auto tallies = run_chunked<JointTally>(
        n, seed,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end, Rng& rng, JointTally& tally) {
            LambdaSample lambda;
            for (std::uint64_t i = begin; i < end; ++i) {
                model.sample_into(rng, theta_l, theta_r, lambda);
                const auto [l, r] = model.respond(lambda, theta_l, theta_r);
                ++tally.counts[outcome_slot(l, r)];
            }
        },
        n_threads);
    const JointTally total = sum_tallies(tallies);
    return JointDistribution::from_counts(total.counts[0], total.counts[1], total.counts[2],
                                          total.counts[3]);
}

namespace {

struct MarginalTally {
    std::uint64_t right_plus = 0;
};

double right_plus_marginal(const LhvModel& model, Angle theta_l, Angle theta_r, std::uint64_t n,
                           std::uint64_t seed, unsigned n_threads) {
    auto tallies = run_chunked<MarginalTally>(
        n, seed,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end, Rng& rng,
            MarginalTally& tally) {
            LambdaSample lambda;
            for (std::uint64_t i = begin; i < end; ++i) {
                model.sample_into(rng, theta_l, theta_r, lambda);
                const auto [l, r] = model.respond(lambda, theta_l, theta_r);
                if (r == Outcome::plus()) ++tally.right_plus;
            }
        },
        n_threads);
    std::uint64_t plus = 0;
    for (const MarginalTally& t : tallies) plus += t.right_plus;
    return static_cast<double>(plus) / static_cast<double>(n);
}

}  // namespace

CheckReport check_no_signaling(const LhvModel& model, Angle theta_r,
                               std::span<const Angle> theta_l_list, std::uint64_t n,
                               std::uint64_t seed, double sigma_threshold,
                               unsigned n_threads) {
    require(theta_l_list.size() >= 2, "need at least two left angles");
    require(n >= 1, "sample count must be >= 1");
    require(sigma_threshold > 0.0, "sigma threshold must be positive");

    // Same seed for every left angle: the lambda streams are common, so a
    // local model reproduces identical right marginals bit for bit.
    std::vector<double> marginals;
    marginals.reserve(theta_l_list.size());
    for (Angle theta_l : theta_l_list) {
        marginals.push_back(right_plus_marginal(model, theta_l, theta_r, n, seed, n_threads));
    }

    double max_z = 0.0;
    double max_diff = 0.0;
    const auto se = [n](double m) {
        return std::sqrt(m * (1.0 - m) / static_cast<double>(n));
    };
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        for (std::size_t j = i + 1; j < marginals.size(); ++j) {
            const double diff = std::abs(marginals[i] - marginals[j]);
            if (diff == 0.0) continue;
            const double pooled =
                std::sqrt(se(marginals[i]) * se(marginals[i]) + se(marginals[j]) * se(marginals[j]));
            const double z = pooled > 0.0 ? diff / pooled
                                          : std::numeric_limits<double>::infinity();
            max_z = std::max(max_z, z);
            max_diff = std::max(max_diff, diff);
        }
    }

    CheckReport report;
    report.check_name = "no_signaling";
    report.statistic = max_z;
    report.threshold = sigma_threshold;
    report.n_samples = n;
    report.passed = report.statistic <= report.threshold;
    std::ostringstream details;
    details << "max pairwise right-marginal difference " << max_diff << " (" << max_z
            << " pooled sigma) across " << theta_l_list.size()
            << " left angles at common seed. Passing does not certify locality: a nonlocal "
               "model can leave its marginals setting-independent.";
    report.details = details.str();
    return report;
}

CheckReport check_surface_coincidence(const LhvModel& model, Angle theta, std::uint64_t n,
                                      std::uint64_t seed, unsigned n_threads) {
    require(n >= 1, "sample count must be >= 1");
    auto tallies = run_chunked<JointTally>(
        n, seed,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end, Rng& rng, JointTally& tally) {
            LambdaSample lambda;
            for (std::uint64_t i = begin; i < end; ++i) {
                model.sample_into(rng, theta, theta, lambda);
                const auto [l, r] = model.respond(lambda, theta, theta);
                ++tally.counts[outcome_slot(l, r)];
            }
        },
        n_threads);
    const JointTally total = sum_tallies(tallies);
    const std::uint64_t equal = total.counts[0] + total.counts[3];

    CheckReport report;
    report.check_name = "surface_coincidence";
    report.statistic = static_cast<double>(equal) / static_cast<double>(n);
    report.threshold = 0.0;
    report.n_samples = n;
    report.passed = report.statistic <= report.threshold;
    std::ostringstream details;
    details << equal << " of " << n << " draws gave equal outcomes at equal angles; zero means "
            << "the sampled ++ and -- regions are empty and the two response boundaries "
            << "coincide.";
    report.details = details.str();
    return report;
}

CheckReport check_detector_independence(const LhvModel& model, Angle theta_l, Angle theta_r,
                                        std::uint64_t n, std::uint64_t resamples,
                                        std::uint64_t seed, unsigned n_threads) {
    require(n >= 1, "photon draw count must be >= 1");
    require(resamples >= 2, "need at least two detector resamples");

    struct ChangeTally {
        std::uint64_t changed = 0;
    };
    auto tallies = run_chunked<ChangeTally>(
        n, seed,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end, Rng& rng,
            ChangeTally& tally) {
            LambdaSample lambda;
            for (std::uint64_t i = begin; i < end; ++i) {
                model.sample_into(rng, theta_l, theta_r, lambda);
                const auto first = model.respond(lambda, theta_l, theta_r);
                bool changed = false;
                for (std::uint64_t r = 1; r < resamples; ++r) {
                    model.resample_detectors(rng, theta_l, theta_r, lambda);
                    if (model.respond(lambda, theta_l, theta_r) != first) changed = true;
                }
                if (changed) ++tally.changed;
            }
        },
        n_threads);
    std::uint64_t changed = 0;
    for (const auto& t : tallies) changed += t.changed;

    CheckReport report;
    report.check_name = "detector_independence";
    report.statistic = static_cast<double>(changed) / static_cast<double>(n);
    report.threshold = 0.0;
    report.n_samples = n;
    report.passed = report.statistic <= report.threshold;
    std::ostringstream details;
    details << changed << " of " << n << " photon draws changed outcome when the detector "
            << "variables were redrawn " << resamples
            << " times with the photon variables held fixed.";
    report.details = details.str();
    return report;
}

CheckReport check_velocity_independence(const std::function<LhvModel(double beta)>& family,
                                        Angle theta, double beta_a, double beta_b,
                                        std::uint64_t n, std::uint64_t seed,
                                        unsigned n_threads) {
    require(n >= 1, "sample count must be >= 1");
    const LhvModel model_a = family(beta_a);
    const LhvModel model_b = family(beta_b);
    require(model_a.photon_dim() == model_b.photon_dim() &&
                model_a.detector_l_dim() == model_b.detector_l_dim() &&
                model_a.detector_r_dim() == model_b.detector_r_dim(),
            "family must keep lambda dimensions fixed across velocities");

    struct VelocityTally {
        std::uint64_t equal_a = 0;    // equal outcomes under model_a
        std::uint64_t equal_b = 0;    // equal outcomes under model_b
        std::uint64_t mismatch = 0;   // partitions differ between velocities
    };
    auto tallies = run_chunked<VelocityTally>(
        n, seed,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end, Rng& rng,
            VelocityTally& tally) {
            LambdaSample lambda;
            for (std::uint64_t i = begin; i < end; ++i) {
                // One common lambda draw evaluated under both velocities.
                model_a.sample_into(rng, theta, theta, lambda);
                const auto oa = model_a.respond(lambda, theta, theta);
                const auto ob = model_b.respond(lambda, theta, theta);
                if (oa.first == oa.second) ++tally.equal_a;
                if (ob.first == ob.second) ++tally.equal_b;
                if (oa != ob) ++tally.mismatch;
            }
        },
        n_threads);
    VelocityTally total;
    for (const auto& t : tallies) {
        total.equal_a += t.equal_a;
        total.equal_b += t.equal_b;
        total.mismatch += t.mismatch;
    }

    const double nd = static_cast<double>(n);
    const double coincidence_a = static_cast<double>(total.equal_a) / nd;
    const double coincidence_b = static_cast<double>(total.equal_b) / nd;
    const double mismatch = static_cast<double>(total.mismatch) / nd;

    CheckReport report;
    report.check_name = "velocity_independence";
    report.statistic = std::max({coincidence_a, coincidence_b, mismatch});
    report.threshold = 0.0;
    report.n_samples = n;
    report.passed = report.statistic <= report.threshold;
    std::ostringstream details;
    details << "equal-angle coincidence " << coincidence_a << " at beta=" << beta_a << " and "
            << coincidence_b << " at beta=" << beta_b << "; outcome partitions differ on "
            << mismatch << " of the common lambda draws. Zero everywhere means the response "
            << "boundaries coincide at both velocities and are therefore velocity "
            << "independent on the sampled set.";
    report.details = details.str();
    return report;
}

namespace {

const std::vector<ModelFamily>& family_registry() {
    static const std::vector<ModelFamily> families = [] {
        std::vector<ModelFamily> f;

        f.push_back(ModelFamily{
            "bell_sign_offset",
            {{"delta", -std::numbers::pi / 4.0, std::numbers::pi / 4.0}},
            [](std::span<const double> p) {
                require(p.size() == 1, "bell_sign_offset takes one parameter");
                return make_bell_sign("bell_sign_offset", p[0]);
            }});

        f.push_back(ModelFamily{
            "threshold",
            {{"winding", 0.0, 8.0}, {"cut", 0.05, 0.95}},
            [](std::span<const double> p) {
                require(p.size() == 2, "threshold takes two parameters");
                const double winding = p[0];
                const double cut = p[1];
                LocalResponses responses;
                responses.left = [winding, cut](std::span<const double> photon,
                                                std::span<const double>, Angle theta) {
                    const double s = frac(photon[0] + winding * theta.radians() / kTwoPi);
                    return s < cut ? Outcome::plus() : Outcome::minus();
                };
                responses.right = [winding, cut](std::span<const double> photon,
                                                 std::span<const double>, Angle theta) {
                    const double s = frac(photon[0] + winding * theta.radians() / kTwoPi);
                    return s < cut ? Outcome::minus() : Outcome::plus();
                };
                PhotonSampler photon = [](Rng& rng, std::span<double> out) {
                    out[0] = rng.uniform();
                };
                return LhvModel("threshold", 1, 0, 0, std::move(photon), nullptr, nullptr,
                                responses);
            }});

        f.push_back(ModelFamily{
            "bell_sign_boosted",
            {{"beta", -0.99, 0.99}, {"coupling", 0.0, 1.0}},
            [](std::span<const double> p) {
                require(p.size() == 2, "bell_sign_boosted takes two parameters");
                // coupling = 0 is the physical case: a boost along the
                // flight axis does not rotate the analyzers.
                return make_bell_sign("bell_sign_boosted", p[1] * p[0]);
            }});

        return f;
    }();
    return families;
}

}  // namespace

const ModelFamily& model_family(std::string_view name) {
    for (const ModelFamily& family : family_registry()) {
        if (family.name == name) return family;
    }
    throw not_found_error("unknown model family: " + std::string(name));
}

std::vector<std::string> model_family_names() {
    std::vector<std::string> names;
    for (const ModelFamily& family : family_registry()) names.push_back(family.name);
    return names;
}

}  // namespace bell::lhv

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bell/rng.hpp"
#include "bell/types.hpp"

namespace bell::lhv {

/// One draw of hidden variables: the photon pair's variables plus each
/// detector's own variables.
struct LambdaSample {
    std::vector<double> photon_vars;
    std::vector<double> detector_l_vars;
    std::vector<double> detector_r_vars;
};

enum class Locality { local, nonlocal };

std::string_view locality_label(Locality locality);

/// Draws one block of hidden variables. The photon sampler sees no angle at
/// all; a detector sampler sees only its own side's angle, so the sampled
/// density always factorizes across the three subsystems.
using PhotonSampler = std::function<void(Rng&, std::span<double> out)>;
using DetectorSampler = std::function<void(Rng&, Angle theta_local, std::span<double> out)>;

/// Response of one side as a function of the photon variables, that side's
/// detector variables, and that side's angle. A model built from these
/// cannot read the remote setting: locality is enforced by the signature.
using LocalResponse = std::function<Outcome(
    std::span<const double> photon_vars, std::span<const double> detector_vars, Angle theta)>;

/// Unrestricted response: also sees the remote detector's variables and the
/// remote angle.
using NonlocalResponse = std::function<Outcome(
    std::span<const double> photon_vars, std::span<const double> detector_own,
    std::span<const double> detector_other, Angle theta_own, Angle theta_other)>;

struct LocalResponses {
    LocalResponse left;
    LocalResponse right;
};

struct NonlocalResponses {
    NonlocalResponse left;
    NonlocalResponse right;
};

/// A hidden-variable model: a factorized sampler over lambda space and a
/// deterministic +1/-1 response per side. The locality tag is derived from
/// which response signature the model holds, so a model tagged local has no
/// channel to the remote setting.
class LhvModel {
public:
    LhvModel(std::string name, std::size_t photon_dim, std::size_t detector_l_dim,
             std::size_t detector_r_dim, PhotonSampler photon_sampler,
             DetectorSampler detector_l_sampler, DetectorSampler detector_r_sampler,
             std::variant<LocalResponses, NonlocalResponses> responses);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t photon_dim() const noexcept { return photon_dim_; }
    [[nodiscard]] std::size_t detector_l_dim() const noexcept { return detector_l_dim_; }
    [[nodiscard]] std::size_t detector_r_dim() const noexcept { return detector_r_dim_; }
    [[nodiscard]] Locality locality() const noexcept;

    /// Draws lambda in the fixed order photon, left detector, right detector.
    [[nodiscard]] LambdaSample sample(Rng& rng, Angle theta_l, Angle theta_r) const;

    /// Same draw into preallocated storage (hot Monte Carlo loops).
    void sample_into(Rng& rng, Angle theta_l, Angle theta_r, LambdaSample& out) const;

    /// Redraws only the detector blocks of `sample`, keeping the photon
    /// variables fixed.
    void resample_detectors(Rng& rng, Angle theta_l, Angle theta_r, LambdaSample& sample) const;

    /// Evaluates both responses, routing each side only the arguments its
    /// signature admits. Throws if the sample dimensions do not match.
    [[nodiscard]] std::pair<Outcome, Outcome> respond(const LambdaSample& lambda, Angle theta_l,
                                                      Angle theta_r) const;

private:
    std::string name_;
    std::size_t photon_dim_;
    std::size_t detector_l_dim_;
    std::size_t detector_r_dim_;
    PhotonSampler photon_sampler_;
    DetectorSampler detector_l_sampler_;
    DetectorSampler detector_r_sampler_;
    std::variant<LocalResponses, NonlocalResponses> responses_;
};

/// Built-in models:
///  - "bell_sign": one photon angle phi uniform on [0, 2pi); left outcome
///    sign(cos 2(phi - theta_L)), right outcome -sign(cos 2(phi - theta_R)).
///    Local, perfectly anticorrelated at equal angles.
///  - "bell_sign_detector_noise": bell_sign plus one right-detector variable
///    u uniform on [0, 1) that flips the right outcome when u < epsilon.
///    Local; breaks surface coincidence on purpose.
///  - "qm_mimic_nonlocal": phi and u uniform; the right response reads the
///    left angle and opposes the left outcome with probability
///    cos^2(theta_L - theta_R). Reproduces the quantum distribution exactly,
///    but only by being nonlocal.
/// epsilon applies to bell_sign_detector_noise only. Unknown names raise
/// not_found_error.
LhvModel builtin_model(std::string_view name, double epsilon = 0.1);

std::vector<std::string> builtin_model_names();

/// Free-function form of LhvModel::respond.
std::pair<Outcome, Outcome> respond(const LhvModel& model, const LambdaSample& lambda,
                                    Angle theta_l, Angle theta_r);

/// Monte Carlo estimate of the joint distribution from n lambda draws.
/// Deterministic for a fixed seed, independent of n_threads.
JointDistribution estimate_distribution(const LhvModel& model, Angle theta_l, Angle theta_r,
                                        std::uint64_t n, std::uint64_t seed,
                                        unsigned n_threads = 0);

/// Outcome of one model checker. passed is exactly statistic <= threshold.
struct CheckReport {
    std::string check_name;
    double statistic = 0.0;
    double threshold = 0.0;
    std::uint64_t n_samples = 0;
    bool passed = false;
    std::string details;
};

/// Estimates the right-side +1 marginal under each left angle in
/// theta_l_list, all from the lambda stream of the same seed, and reports
/// the largest pairwise difference in units of its pooled standard error.
/// Requires at least two left angles. Note: a nonlocal model can pass this
/// check; distribution-level no-signaling does not certify locality.
CheckReport check_no_signaling(const LhvModel& model, Angle theta_r,
                               std::span<const Angle> theta_l_list, std::uint64_t n,
                               std::uint64_t seed, double sigma_threshold,
                               unsigned n_threads = 0);

/// Fraction of lambda draws that give equal outcomes at equal angles
/// (theta, theta). Passing requires exactly zero among all n samples: the
/// +1/-1 boundaries of the two sides coincide on the sampled set.
CheckReport check_surface_coincidence(const LhvModel& model, Angle theta, std::uint64_t n,
                                      std::uint64_t seed, unsigned n_threads = 0);

/// For each of n photon draws, redraws the detector variables `resamples`
/// times with the photon variables held fixed, and reports the fraction of
/// photon draws whose left or right outcome changes. Passing requires
/// exactly zero: the outcome partition depends only on the photon variables.
CheckReport check_detector_independence(const LhvModel& model, Angle theta_l, Angle theta_r,
                                        std::uint64_t n, std::uint64_t resamples,
                                        std::uint64_t seed, unsigned n_threads = 0);

/// Builds the model at two frame velocities and compares outcomes on a
/// common lambda stream at equal angles (theta, theta): the statistic is the
/// largest of the two coincidence statistics and the fraction of draws whose
/// outcome pair differs between the velocities. A zero statistic means the
/// +1/-1 partitions agree at both velocities, i.e. the response surfaces are
/// velocity independent on the sampled set.
CheckReport check_velocity_independence(const std::function<LhvModel(double beta)>& family,
                                        Angle theta, double beta_a, double beta_b,
                                        std::uint64_t n, std::uint64_t seed,
                                        unsigned n_threads = 0);

/// A named local-model family over a box of real parameters.
struct ParamSpec {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
};

struct ModelFamily {
    std::string name;
    std::vector<ParamSpec> params;
    std::function<LhvModel(std::span<const double> params)> make;
};

/// Registered families:
///  - "bell_sign_offset" (delta): bell_sign with the right analyzer rotated
///    by a fixed delta.
///  - "threshold" (winding, cut): one photon variable u uniform on [0, 1);
///    each side thresholds frac(u + winding * theta / (2pi)) against cut,
///    with the right side negated.
///  - "bell_sign_boosted" (beta, coupling): bell_sign whose right analyzer
///    is rotated by coupling * beta. beta stands for a frame velocity;
///    coupling = 0 is the physical case (boosts along the flight axis leave
///    the angles alone).
const ModelFamily& model_family(std::string_view name);

std::vector<std::string> model_family_names();

}  // namespace bell::lhv

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace bell::rel {

// Natural units throughout: c = 1, times in seconds, distances in
// light-seconds. Only boosts along the photon flight axis (x) are supported;
// they leave the detector angles untouched.

struct SpacetimeEvent {
    double t = 0.0;
    double x = 0.0;
    std::string label;
};

/// A frame velocity as a fraction of c; |beta| < 1.
class FrameVelocity {
public:
    constexpr FrameVelocity() = default;
    explicit FrameVelocity(double beta);
    [[nodiscard]] constexpr double beta() const noexcept { return beta_; }

private:
    double beta_ = 0.0;
};

/// Source-to-detector distance d > 0, both detectors at the same distance.
class ExperimentGeometry {
public:
    explicit ExperimentGeometry(double d);
    [[nodiscard]] constexpr double d() const noexcept { return d_; }

private:
    double d_ = 1.0;
};

enum class Frame { source, a, b };
enum class DetectionOrder { right_first, left_first, simultaneous };

std::string_view frame_label(Frame frame);
std::string_view order_label(DetectionOrder order);

/// Lorentz factor 1/sqrt(1 - beta^2).
double gamma(FrameVelocity beta);

/// Boost by beta along +x: t' = gamma (t - beta x), x' = gamma (x - beta t).
SpacetimeEvent lorentz_transform(const SpacetimeEvent& event, FrameVelocity beta);

/// The three events of the experiment in the source frame: emission at the
/// origin, right detection at (d, +d), left detection at (d, -d).
std::array<SpacetimeEvent, 3> experiment_events(ExperimentGeometry geometry);

/// Detection times of events 1 (right) and 2 (left) in frame A (boost +beta)
/// and frame B (boost -beta). By symmetry t_a_1 = t_b_2 and t_a_2 = t_b_1.
struct EventTimes {
    double t_a_1 = 0.0;
    double t_a_2 = 0.0;
    double t_b_1 = 0.0;
    double t_b_2 = 0.0;
};

EventTimes event_times(ExperimentGeometry geometry, FrameVelocity beta);

/// Time gap 2 gamma beta d between the two detections in frames A and B.
double time_gap(ExperimentGeometry geometry, FrameVelocity beta);

/// Order of the two detection events as seen from the given frame.
DetectionOrder detection_order(ExperimentGeometry geometry, FrameVelocity beta, Frame frame);

/// s^2 = (dt)^2 - (dx)^2; invariant under lorentz_transform of both events.
double invariant_interval(const SpacetimeEvent& e1, const SpacetimeEvent& e2);

}  // namespace bell::rel

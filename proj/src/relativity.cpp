#include "bell/relativity.hpp"

#include <cmath>
#include <stdexcept>

namespace bell::rel {

FrameVelocity::FrameVelocity(double beta) : beta_(beta) {
    if (!(std::isfinite(beta) && std::abs(beta) < 1.0)) {
        throw std::invalid_argument("|beta| must be < 1");
    }
}

ExperimentGeometry::ExperimentGeometry(double d) : d_(d) {
    if (!(std::isfinite(d) && d > 0.0)) {
        throw std::invalid_argument("detector distance must be positive");
    }
}

std::string_view frame_label(Frame frame) {
    switch (frame) {
        case Frame::source: return "source";
        case Frame::a: return "A";
        case Frame::b: return "B";
    }
    throw std::invalid_argument("bad frame");
}

std::string_view order_label(DetectionOrder order) {
    switch (order) {
        case DetectionOrder::right_first: return "right_first";
        case DetectionOrder::left_first: return "left_first";
        case DetectionOrder::simultaneous: return "simultaneous";
    }
    throw std::invalid_argument("bad detection order");
}

double gamma(FrameVelocity beta) {
    const double b = beta.beta();
    return 1.0 / std::sqrt(1.0 - b * b);
}

SpacetimeEvent lorentz_transform(const SpacetimeEvent& event, FrameVelocity beta) {
    const double g = gamma(beta);
    const double b = beta.beta();
    return SpacetimeEvent{g * (event.t - b * event.x), g * (event.x - b * event.t), event.label};
}

std::array<SpacetimeEvent, 3> experiment_events(ExperimentGeometry geometry) {
    const double d = geometry.d();
    return {SpacetimeEvent{0.0, 0.0, "emission"}, SpacetimeEvent{d, d, "detect_right"},
            SpacetimeEvent{d, -d, "detect_left"}};
}

EventTimes event_times(ExperimentGeometry geometry, FrameVelocity beta) {
    const double d = geometry.d();
    const double t0 = d;  // photons reach the detectors after d/c = d
    const double g = gamma(beta);
    const double early = g * (t0 - beta.beta() * d);
    const double late = g * (t0 + beta.beta() * d);
    // Frame A boosts by +beta, frame B by -beta; swapping the boost sign
    // swaps the roles of the two detections.
    return EventTimes{early, late, late, early};
}

double time_gap(ExperimentGeometry geometry, FrameVelocity beta) {
    return 2.0 * gamma(beta) * beta.beta() * geometry.d();
}

DetectionOrder detection_order(ExperimentGeometry geometry, FrameVelocity beta, Frame frame) {
    if (frame == Frame::source) return DetectionOrder::simultaneous;
    const EventTimes times = event_times(geometry, beta);
    const double t1 = frame == Frame::a ? times.t_a_1 : times.t_b_1;
    const double t2 = frame == Frame::a ? times.t_a_2 : times.t_b_2;
    if (t1 < t2) return DetectionOrder::right_first;
    if (t2 < t1) return DetectionOrder::left_first;
    return DetectionOrder::simultaneous;
}

double invariant_interval(const SpacetimeEvent& e1, const SpacetimeEvent& e2) {
    const double dt = e1.t - e2.t;
    const double dx = e1.x - e2.x;
    return dt * dt - dx * dx;
}

}  // namespace bell::rel

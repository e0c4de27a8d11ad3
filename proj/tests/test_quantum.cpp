#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"

#include "bell/quantum.hpp"
#include "bell/rng.hpp"

using namespace bell;
using quantum::Side;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;
}  // namespace

TEST_CASE("singles probability is 1/2 for every side, outcome and angle") {
    CHECK(quantum::singles_probability(Side::left, Outcome::plus(), Angle(0.0)) == 0.5);
    CHECK(quantum::singles_probability(Side::right, Outcome::minus(), Angle(1.234)) == 0.5);
    CHECK(quantum::singles_probability(Side::left, Outcome::plus(), Angle(-kPi / 8)) == 0.5);
}

TEST_CASE("non-finite angles are rejected at construction") {
    CHECK_THROWS_AS(Angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(Angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("joint probability closed forms") {
    const Angle theta(0.7);
    CHECK(quantum::joint_probability(Outcome::plus(), Outcome::plus(), theta, theta) == 0.0);
    CHECK(quantum::joint_probability(Outcome::plus(), Outcome::minus(), theta, theta) == 0.5);
    CHECK(quantum::joint_probability(Outcome::plus(), Outcome::plus(), Angle(kPi / 4), Angle(0.0)) ==
          doctest::Approx(0.25).epsilon(kTol));
}

TEST_CASE("exact distribution at pinned angle pairs") {
    const JointDistribution equal = quantum::exact_distribution(Angle(0.0), Angle(0.0));
    CHECK(equal.p_pp == 0.0);
    CHECK(equal.p_pm == 0.5);
    CHECK(equal.p_mp == 0.5);
    CHECK(equal.p_mm == 0.0);
    CHECK_FALSE(equal.has_errors());

    const JointDistribution eighth = quantum::exact_distribution(Angle(kPi / 8), Angle(0.0));
    CHECK(eighth.p_pp == doctest::Approx(0.07322330470336312).epsilon(kTol));
    CHECK(eighth.p_pm == doctest::Approx(0.42677669529663687).epsilon(kTol));
    CHECK(eighth.p_mp == doctest::Approx(0.42677669529663687).epsilon(kTol));
    CHECK(eighth.p_mm == doctest::Approx(0.07322330470336312).epsilon(kTol));

    const JointDistribution half = quantum::exact_distribution(Angle(kPi / 2), Angle(0.0));
    CHECK(half.p_pp == doctest::Approx(0.5).epsilon(kTol));
    CHECK(std::abs(half.p_pm) < kTol);
    CHECK(std::abs(half.p_mp) < kTol);
    CHECK(half.p_mm == doctest::Approx(0.5).epsilon(kTol));
}

TEST_CASE("correlation values and closed form") {
    CHECK(quantum::correlation(Angle(0.3), Angle(0.3)) == -1.0);
    CHECK(std::abs(quantum::correlation(Angle(kPi / 4), Angle(0.0))) < kTol);
    CHECK(quantum::correlation(Angle(kPi / 8), Angle(0.0)) ==
          doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(kTol));

    // The four-term sum and -cos(2 delta) agree everywhere.
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double tl = rng.uniform(-8.0, 8.0);
        const double tr = rng.uniform(-8.0, 8.0);
        CHECK(quantum::correlation(Angle(tl), Angle(tr)) ==
              doctest::Approx(quantum::correlation_closed_form(tl - tr)).epsilon(kTol));
    }
}

TEST_CASE("distribution invariants over random angles") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double tl = rng.uniform(-10.0, 10.0);
        const double tr = rng.uniform(-10.0, 10.0);
        const JointDistribution d = quantum::exact_distribution(Angle(tl), Angle(tr));

        CHECK(std::abs(d.sum() - 1.0) <= kTol);
        // Marginals reproduce the angle-independent singles.
        CHECK(std::abs(d.p_pp + d.p_pm - 0.5) <= kTol);
        CHECK(std::abs(d.p_pp + d.p_mp - 0.5) <= kTol);
        // Same-sign and opposite-sign entries are built from one expression.
        CHECK(d.p_pp == d.p_mm);
        CHECK(d.p_pm == d.p_mp);
        CHECK(std::abs(quantum::correlation(Angle(tl), Angle(tr))) <= 1.0 + kTol);

        // Rotating both analyzers together changes nothing.
        const double shift = rng.uniform(-4.0, 4.0);
        const JointDistribution rotated =
            quantum::exact_distribution(Angle(tl + shift), Angle(tr + shift));
        CHECK(rotated.p_pp == doctest::Approx(d.p_pp).epsilon(kTol));
        CHECK(rotated.p_pm == doctest::Approx(d.p_pm).epsilon(kTol));
    }
}

TEST_CASE("chsh value at pinned settings") {
    const chsh::ChshSettings paper{Angle(kPi / 4), Angle(0.0), Angle(kPi / 8), Angle(-kPi / 8)};
    const double s = quantum::chsh_value(paper);
    CHECK(s == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(kTol));
    CHECK(std::abs(std::abs(s) - 2.0 * std::sqrt(2.0)) <= kTol);

    const chsh::ChshSettings equal{Angle(0.4), Angle(0.4), Angle(0.4), Angle(0.4)};
    CHECK(quantum::chsh_value(equal) == doctest::Approx(-2.0).epsilon(kTol));

    const chsh::ChshSettings crossed{Angle(kPi / 2), Angle(0.0), Angle(kPi / 4), Angle(-kPi / 4)};
    CHECK(std::abs(quantum::chsh_value(crossed)) < kTol);
}

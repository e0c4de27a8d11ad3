#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bell/chsh.hpp"
#include "bell/quantum.hpp"
#include "bell/rng.hpp"

using namespace bell;
using chsh::Estimate;
using chsh::Verdict;

namespace {
constexpr double kTol = 1e-12;

JointDistribution dist(double pp, double pm, double mp, double mm) {
    JointDistribution d;
    d.p_pp = pp;
    d.p_pm = pm;
    d.p_mp = mp;
    d.p_mm = mm;
    return d;
}
}  // namespace

TEST_CASE("correlation from distribution") {
    CHECK(chsh::correlation_from_distribution(dist(0.0, 0.5, 0.5, 0.0)).value == -1.0);
    CHECK(chsh::correlation_from_distribution(dist(0.25, 0.25, 0.25, 0.25)).value == 0.0);
    CHECK(chsh::correlation_from_distribution(dist(0.5, 0.0, 0.0, 0.5)).value == 1.0);
    CHECK_FALSE(chsh::correlation_from_distribution(dist(0.5, 0.0, 0.0, 0.5)).se.has_value());

    CHECK_THROWS_AS(chsh::correlation_from_distribution(dist(0.3, 0.3, 0.3, 0.3)),
                    std::invalid_argument);
}

TEST_CASE("sample-based correlation carries se = sqrt((1-E^2)/n)") {
    const JointDistribution d = JointDistribution::from_counts(10, 40, 30, 20);
    const Estimate e = chsh::correlation_from_distribution(d);
    CHECK(e.value == doctest::Approx(0.3 - 0.7).epsilon(kTol));
    REQUIRE(e.se.has_value());
    CHECK(*e.se == doctest::Approx(std::sqrt((1.0 - 0.16) / 100.0)).epsilon(kTol));
}

TEST_CASE("chsh from correlations") {
    const double r = std::sqrt(2.0) / 2.0;
    const auto paper = chsh::chsh_from_correlations(
        {Estimate{-r, {}}, Estimate{r, {}}, Estimate{-r, {}}, Estimate{-r, {}}});
    CHECK(paper.s_value == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(kTol));
    CHECK(paper.verdict == Verdict::violates_bound);

    const auto flat = chsh::chsh_from_correlations(
        {Estimate{-1.0, {}}, Estimate{-1.0, {}}, Estimate{-1.0, {}}, Estimate{-1.0, {}}});
    CHECK(flat.s_value == -2.0);
    CHECK(flat.verdict == Verdict::satisfies_bound);

    // Algebraically impossible as a single-distribution set, still returned.
    const auto four = chsh::chsh_from_correlations(
        {Estimate{1.0, {}}, Estimate{-1.0, {}}, Estimate{1.0, {}}, Estimate{1.0, {}}});
    CHECK(four.s_value == 4.0);
    CHECK(four.verdict == Verdict::violates_bound);
}

TEST_CASE("chsh input validation") {
    CHECK_THROWS_AS(chsh::chsh_from_correlations({Estimate{1.5, {}}, Estimate{0.0, {}},
                                                  Estimate{0.0, {}}, Estimate{0.0, {}}}),
                    std::invalid_argument);
    // Standard errors on some terms but not all.
    CHECK_THROWS_AS(chsh::chsh_from_correlations({Estimate{0.5, 0.01}, Estimate{0.0, {}},
                                                  Estimate{0.0, {}}, Estimate{0.0, {}}}),
                    std::invalid_argument);
}

TEST_CASE("chsh is linear with coefficients (+1, -1, +1, +1)") {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        std::array<Estimate, 4> e{};
        for (auto& term : e) term.value = rng.uniform(-1.0, 1.0);
        const auto result = chsh::chsh_from_correlations(e);
        CHECK(result.s_value == e[0].value - e[1].value + e[2].value + e[3].value);
    }
}

TEST_CASE("statistical verdict thresholds") {
    const auto make = [](double each_e, double each_se) {
        return chsh::chsh_from_correlations({Estimate{each_e, each_se}, Estimate{-each_e, each_se},
                                             Estimate{each_e, each_se},
                                             Estimate{each_e, each_se}});
    };
    // |S| = 2.8, se_S = 0.02: far beyond 3 sigma.
    CHECK(make(-0.7, 0.01).verdict == Verdict::violates_bound);
    // |S| = 2.004, se_S = 0.2: above 2 but not significant.
    CHECK(make(-0.501, 0.1).verdict == Verdict::inconclusive);
    // |S| = 1.6: inside the bound.
    CHECK(make(-0.4, 0.1).verdict == Verdict::satisfies_bound);
}

TEST_CASE("violation sigmas") {
    CHECK(chsh::violation_sigmas(2.8, 0.01) == doctest::Approx(80.0).epsilon(kTol));
    CHECK(chsh::violation_sigmas(2.0, 0.01) == 0.0);
    CHECK(chsh::violation_sigmas(1.9, 0.05) == doctest::Approx(-2.0).epsilon(kTol));
    CHECK_THROWS_AS(chsh::violation_sigmas(2.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chsh::violation_sigmas(2.5, -0.1), std::invalid_argument);
}

TEST_CASE("exact quantum correlations stay below the 2*sqrt(2) ceiling") {
    Rng rng(17);
    const double ceiling = 2.0 * std::sqrt(2.0) + kTol;
    for (int i = 0; i < 20000; ++i) {
        const chsh::ChshSettings settings{
            Angle(rng.uniform(-4.0, 4.0)), Angle(rng.uniform(-4.0, 4.0)),
            Angle(rng.uniform(-4.0, 4.0)), Angle(rng.uniform(-4.0, 4.0))};
        CHECK(std::abs(quantum::chsh_value(settings)) <= ceiling);
    }
}

TEST_CASE("correlation of the exact distribution matches -cos 2 delta") {
    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
        const double tl = rng.uniform(-6.0, 6.0);
        const double tr = rng.uniform(-6.0, 6.0);
        const auto e = chsh::correlation_from_distribution(
            quantum::exact_distribution(Angle(tl), Angle(tr)));
        CHECK(e.value == doctest::Approx(-std::cos(2.0 * (tl - tr))).epsilon(kTol));
    }
}

TEST_CASE("setting pair labels round-trip") {
    for (chsh::SettingPair pair : chsh::kAllPairs) {
        CHECK(chsh::pair_from_label(chsh::pair_label(pair)) == pair);
    }
    CHECK_FALSE(chsh::pair_from_label("nope").has_value());
}

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace bell {

/// Raised when a name lookup (model, family, ...) fails.
class not_found_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A detector angle in radians. Probabilities depend on angles only through
/// differences, so no range normalization is applied.
class Angle {
public:
    constexpr Angle() = default;

    explicit Angle(double radians) : rad_(radians) {
        if (!std::isfinite(radians)) {
            throw std::invalid_argument("angle must be finite");
        }
    }

    [[nodiscard]] constexpr double radians() const noexcept { return rad_; }

    friend constexpr double operator-(Angle a, Angle b) noexcept {
        return a.rad_ - b.rad_;
    }

private:
    double rad_ = 0.0;
};

/// A +1/-1 measurement outcome.
class Outcome {
public:
    constexpr explicit Outcome(int sign) : sign_(sign) {
        if (sign != 1 && sign != -1) {
            throw std::invalid_argument("outcome sign must be +1 or -1");
        }
    }

    static constexpr Outcome plus() noexcept { return Outcome(Tag{}, 1); }
    static constexpr Outcome minus() noexcept { return Outcome(Tag{}, -1); }

    [[nodiscard]] constexpr int sign() const noexcept { return sign_; }

    friend constexpr bool operator==(Outcome a, Outcome b) noexcept = default;

    /// Product of two outcomes, +1 or -1.
    friend constexpr int operator*(Outcome a, Outcome b) noexcept {
        return a.sign_ * b.sign_;
    }

private:
    struct Tag {};
    constexpr Outcome(Tag, int sign) noexcept : sign_(sign) {}
    int sign_;
};

/// The four outcome probabilities for one detector-angle pair, with optional
/// binomial standard errors when the distribution was estimated from samples.
struct JointDistribution {
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;
    std::optional<double> se_pp, se_pm, se_mp, se_mm;
    std::optional<std::uint64_t> n_samples;

    [[nodiscard]] double sum() const noexcept {
        return ((p_pp + p_pm) + p_mp) + p_mm;
    }

    [[nodiscard]] bool has_errors() const noexcept { return se_pp.has_value(); }

    /// Exact construction; entries must be in [0,1] and sum to 1 within 1e-12.
    static JointDistribution exact(double pp, double pm, double mp, double mm) {
        for (double p : {pp, pm, mp, mm}) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument("probability out of [0,1]");
            }
        }
        JointDistribution d;
        d.p_pp = pp;
        d.p_pm = pm;
        d.p_mp = mp;
        d.p_mm = mm;
        if (std::abs(d.sum() - 1.0) > 1e-12) {
            throw std::invalid_argument("probabilities must sum to 1");
        }
        return d;
    }

    /// Relative frequencies of exhaustive, exclusive outcome counts, with
    /// se = sqrt(p(1-p)/n). The outcomes exhaust the sample, so the entries
    /// must sum to exactly 1.0; division can leave an ulp-level residual,
    /// which is folded into the last nonzero entry (zero counts stay exact).
    static JointDistribution from_counts(std::uint64_t pp, std::uint64_t pm,
                                         std::uint64_t mp, std::uint64_t mm) {
        const std::uint64_t n = pp + pm + mp + mm;
        if (n == 0) {
            throw std::invalid_argument("sample count must be >= 1");
        }
        const std::array<std::uint64_t, 4> c{pp, pm, mp, mm};
        std::array<double, 4> p{};
        for (std::size_t i = 0; i < 4; ++i) {
            p[i] = static_cast<double>(c[i]) / static_cast<double>(n);
        }
        if (((p[0] + p[1]) + p[2]) + p[3] != 1.0) {
            std::size_t k = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                if (c[i] > 0) k = i;
            }
            double before = 0.0;
            for (std::size_t i = 0; i < k; ++i) before += p[i];
            p[k] = 1.0 - before;
        }
        JointDistribution d;
        d.p_pp = p[0];
        d.p_pm = p[1];
        d.p_mp = p[2];
        d.p_mm = p[3];
        const auto se = [n](double q) {
            return std::sqrt(q * (1.0 - q) / static_cast<double>(n));
        };
        d.se_pp = se(p[0]);
        d.se_pm = se(p[1]);
        d.se_mp = se(p[2]);
        d.se_mm = se(p[3]);
        d.n_samples = n;
        return d;
    }
};

}  // namespace bell

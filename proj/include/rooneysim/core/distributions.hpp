#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rooneysim/core/rng.hpp"

namespace rooneysim {

// Distribution of latent utilities. Support is always a bounded interval
// [lo, hi] with 0 <= lo < hi.
class UtilityDistribution {
public:
    struct Uniform {
        double lo = 0.0;
        double hi = 1.0;
    };
    // Normal(location, scale) conditioned on [lo, hi].
    struct TruncatedNormal {
        double location = 0.5;
        double scale = 0.1;
        double lo = 0.0;
        double hi = 1.0;
    };
    // Density proportional to x^(-exponent) on [lo, hi].
    struct TruncatedPowerLaw {
        double exponent = 2.0;
        double lo = 1.0;
        double hi = 10.0;
    };
    using Kind = std::variant<Uniform, TruncatedNormal, TruncatedPowerLaw>;

    UtilityDistribution() = default;
    // Throws ConfigError when the parameters are invalid.
    explicit UtilityDistribution(Kind kind);

    static UtilityDistribution uniform(double lo, double hi) { return UtilityDistribution(Uniform{lo, hi}); }
    static UtilityDistribution truncated_normal(double location, double scale, double lo, double hi) {
        return UtilityDistribution(TruncatedNormal{location, scale, lo, hi});
    }
    static UtilityDistribution truncated_power_law(double exponent, double lo, double hi) {
        return UtilityDistribution(TruncatedPowerLaw{exponent, lo, hi});
    }

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;
    double lo() const noexcept;
    double hi() const noexcept;
    bool is_standard_uniform() const noexcept;

    double pdf(double x) const;
    double cdf(double x) const;
    double sample(Rng& rng) const;

    friend bool operator==(const UtilityDistribution&, const UtilityDistribution&);

private:
    Kind kind_{Uniform{}};
};

bool operator==(const UtilityDistribution::Uniform&, const UtilityDistribution::Uniform&);
bool operator==(const UtilityDistribution::TruncatedNormal&, const UtilityDistribution::TruncatedNormal&);
bool operator==(const UtilityDistribution::TruncatedPowerLaw&, const UtilityDistribution::TruncatedPowerLaw&);

// count i.i.d. draws. Throws ConfigError on count == 0.
std::vector<double> sample_latent(const UtilityDistribution& dist, std::size_t count, Rng& rng);
void sample_latent(const UtilityDistribution& dist, std::span<double> out, Rng& rng);

// Gamma(shape, 1) by Marsaglia-Tsang squeeze/rejection; shapes below one use
// the U^(1/shape) boost.
double sample_gamma(double shape, Rng& rng);

// Beta(a, b) as G_a / (G_a + G_b).
double sample_beta(double a, double b, Rng& rng);

}  // namespace rooneysim

#pragma once

#include <functional>
#include <string>

#include "rooneysim/core/rng.hpp"

namespace rooneysim {

// Ceiling on the evidence-for parameter. Phi(1e12) is 1 to double precision,
// so clamping here does not change the dynamics; it only avoids overflow.
inline constexpr double kBeliefCap = 1e12;

// Panel belief: the bias is drawn from a distribution parameterized by
// (a, b); a grows with counter-stereotypical evidence and b stays fixed.
struct BeliefState {
    double a = 2.0;
    double b = 2.0;
    // Sticky: set once an update hit kBeliefCap.
    bool capped = false;

    // Throws DomainError unless a > 1 and b > 1.
    void validate() const;

    friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

// Family D(a) from which the bias coefficient is drawn.
class BiasDistributionSpec {
public:
    enum class Family { beta, truncated_normal, custom };

    // Evaluators for a user-provided family. sample must return values in [0, 1].
    struct CustomEvaluators {
        std::string name = "custom";
        std::function<double(const BeliefState&, Rng&)> sample;
        std::function<double(const BeliefState&)> mean;
        std::function<double(const BeliefState&)> median;
        std::function<double(const BeliefState&)> inverse_moment;
    };

    // Beta(a, b).
    static BiasDistributionSpec beta();
    // Normal with location a/(a+b) and the given scale, truncated to [0, 1].
    static BiasDistributionSpec truncated_normal(double scale);
    static BiasDistributionSpec custom(CustomEvaluators evaluators);
    // Point mass at value, for pinning the bias in tests and diagnostics.
    static BiasDistributionSpec fixed(double value);

    Family family() const noexcept { return family_; }
    double scale() const noexcept { return scale_; }
    std::string name() const;

    double sample(const BeliefState& state, Rng& rng) const;
    // Phi(a) = E[beta].
    double mean(const BeliefState& state) const;
    double median(const BeliefState& state) const;
    // E[1/beta]; +infinity when the moment diverges.
    double inverse_moment(const BeliefState& state) const;

private:
    Family family_ = Family::beta;
    double scale_ = 0.0;
    CustomEvaluators custom_;
};

// F in a' = a * F(U / U_obs).
class UpdateRuleSpec {
public:
    enum class Kind { ratio, affine, power };

    static UpdateRuleSpec ratio() { return UpdateRuleSpec(Kind::ratio, 1.0); }
    // F(x) = 1 + c (x - 1), c > 0.
    static UpdateRuleSpec affine(double c);
    // F(x) = x^gamma, gamma in (0, 1].
    static UpdateRuleSpec power(double gamma);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    std::string name() const;

    double operator()(double x) const;

    friend bool operator==(const UpdateRuleSpec&, const UpdateRuleSpec&) = default;

private:
    UpdateRuleSpec(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

    Kind kind_;
    double parameter_;
};

// One draw of the bias coefficient for the current belief.
double sample_bias(const BeliefState& state, const BiasDistributionSpec& spec, Rng& rng);

// a / (a + b).
double phi(const BeliefState& state);

// E[1/beta] = (a + b - 1) / (a - 1) for beta ~ Beta(a, b).
double inverse_moment(const BeliefState& state);

// Upper bound on the Beta(a, b) median: (a-1)/(a+b-2) when b < a, a/(a+b)
// when a < b, and exactly 1/2 when a == b.
double median_bound(const BeliefState& state);

// a' = a * F(u_latent / u_observed), b unchanged, capped at kBeliefCap.
BeliefState update_belief(const BeliefState& state, double u_latent, double u_observed, const UpdateRuleSpec& rule);

// Same update written in terms of the ratio U / U_obs = 1 + delta.
BeliefState update_belief_ratio(const BeliefState& state, double ratio, const UpdateRuleSpec& rule);

}  // namespace rooneysim

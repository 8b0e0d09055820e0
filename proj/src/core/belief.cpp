#include "rooneysim/core/belief.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rooneysim/core/distributions.hpp"
#include "rooneysim/core/error.hpp"
#include "rooneysim/core/special.hpp"

namespace rooneysim {

void BeliefState::validate() const {
    if (!(a > 1.0) || !std::isfinite(a)) throw DomainError("belief parameter a must be finite and > 1");
    if (!(b > 1.0) || !std::isfinite(b)) throw DomainError("belief parameter b must be finite and > 1");
}

namespace {

struct TruncatedNormalMoments {
    double alpha;
    double beta;
    double mass;
};

TruncatedNormalMoments truncation(double location, double scale) {
    const double alpha = (0.0 - location) / scale;
    const double beta = (1.0 - location) / scale;
    return {alpha, beta, special::normal_cdf(beta) - special::normal_cdf(alpha)};
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

BiasDistributionSpec BiasDistributionSpec::beta() { return BiasDistributionSpec{}; }

BiasDistributionSpec BiasDistributionSpec::truncated_normal(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("truncated-normal bias scale must be positive");
    BiasDistributionSpec spec;
    spec.family_ = Family::truncated_normal;
    spec.scale_ = scale;
    return spec;
}

BiasDistributionSpec BiasDistributionSpec::custom(CustomEvaluators evaluators) {
    if (!evaluators.sample || !evaluators.mean || !evaluators.median || !evaluators.inverse_moment) {
        throw ConfigError("custom bias family needs sample, mean, median and inverse_moment evaluators");
    }
    BiasDistributionSpec spec;
    spec.family_ = Family::custom;
    spec.custom_ = std::move(evaluators);
    return spec;
}

BiasDistributionSpec BiasDistributionSpec::fixed(double value) {
    if (!(value > 0.0 && value <= 1.0)) throw ConfigError("fixed bias must lie in (0, 1]");
    CustomEvaluators ev;
    ev.name = "fixed(" + format_number(value) + ")";
    ev.sample = [value](const BeliefState&, Rng&) { return value; };
    ev.mean = [value](const BeliefState&) { return value; };
    ev.median = [value](const BeliefState&) { return value; };
    ev.inverse_moment = [value](const BeliefState&) { return 1.0 / value; };
    return custom(std::move(ev));
}

std::string BiasDistributionSpec::name() const {
    switch (family_) {
    case Family::beta:
        return "beta";
    case Family::truncated_normal:
        return "truncated-normal(scale=" + format_number(scale_) + ")";
    case Family::custom:
        return custom_.name;
    }
    return "unknown";
}

double BiasDistributionSpec::sample(const BeliefState& state, Rng& rng) const {
    switch (family_) {
    case Family::beta:
        return sample_beta(state.a, state.b, rng);
    case Family::truncated_normal: {
        const double location = phi(state);
        const auto dist = UtilityDistribution::truncated_normal(location, scale_, 0.0, 1.0);
        return dist.sample(rng);
    }
    case Family::custom: {
        const double v = custom_.sample(state, rng);
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("custom bias sampler returned a value outside [0, 1]");
        return v;
    }
    }
    throw InternalError("unknown bias family");
}

double BiasDistributionSpec::mean(const BeliefState& state) const {
    switch (family_) {
    case Family::beta:
        return phi(state);
    case Family::truncated_normal: {
        const double location = phi(state);
        const auto t = truncation(location, scale_);
        return location + scale_ * (special::normal_pdf(t.alpha) - special::normal_pdf(t.beta)) / t.mass;
    }
    case Family::custom:
        return custom_.mean(state);
    }
    throw InternalError("unknown bias family");
}

double BiasDistributionSpec::median(const BeliefState& state) const {
    switch (family_) {
    case Family::beta:
        return special::beta_median(state.a, state.b);
    case Family::truncated_normal: {
        const double location = phi(state);
        const auto t = truncation(location, scale_);
        const double p = special::normal_cdf(t.alpha) + 0.5 * t.mass;
        return location + scale_ * special::normal_quantile(p);
    }
    case Family::custom:
        return custom_.median(state);
    }
    throw InternalError("unknown bias family");
}

double BiasDistributionSpec::inverse_moment(const BeliefState& state) const {
    switch (family_) {
    case Family::beta:
        return rooneysim::inverse_moment(state);
    case Family::truncated_normal:
        // The density is positive at zero, so E[1/beta] diverges.
        return std::numeric_limits<double>::infinity();
    case Family::custom:
        return custom_.inverse_moment(state);
    }
    throw InternalError("unknown bias family");
}

UpdateRuleSpec UpdateRuleSpec::affine(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("affine update rule needs c > 0");
    return UpdateRuleSpec(Kind::affine, c);
}

UpdateRuleSpec UpdateRuleSpec::power(double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("power update rule needs gamma in (0, 1]");
    return UpdateRuleSpec(Kind::power, gamma);
}

std::string UpdateRuleSpec::name() const {
    switch (kind_) {
    case Kind::ratio:
        return "ratio";
    case Kind::affine:
        return "affine(c=" + format_number(parameter_) + ")";
    case Kind::power:
        return "power(gamma=" + format_number(parameter_) + ")";
    }
    return "unknown";
}

double UpdateRuleSpec::operator()(double x) const {
    switch (kind_) {
    case Kind::ratio:
        return x;
    case Kind::affine:
        return 1.0 + parameter_ * (x - 1.0);
    case Kind::power:
        return std::pow(x, parameter_);
    }
    throw InternalError("unknown update rule");
}

double sample_bias(const BeliefState& state, const BiasDistributionSpec& spec, Rng& rng) {
    state.validate();
    return spec.sample(state, rng);
}

double phi(const BeliefState& state) {
    state.validate();
    return state.a / (state.a + state.b);
}

double inverse_moment(const BeliefState& state) {
    state.validate();
    return (state.a + state.b - 1.0) / (state.a - 1.0);
}

double median_bound(const BeliefState& state) {
    state.validate();
    if (state.a == state.b) return 0.5;
    if (state.b < state.a) return (state.a - 1.0) / (state.a + state.b - 2.0);
    return state.a / (state.a + state.b);
}

BeliefState update_belief(const BeliefState& state, double u_latent, double u_observed, const UpdateRuleSpec& rule) {
    if (!(u_observed > 0.0)) throw DegenerateRoundError("update_belief: observed utility must be positive");
    if (!(u_latent >= u_observed)) throw DomainError("update_belief: latent utility is below observed utility");
    return update_belief_ratio(state, u_latent / u_observed, rule);
}

BeliefState update_belief_ratio(const BeliefState& state, double ratio, const UpdateRuleSpec& rule) {
    state.validate();
    if (!(ratio >= 1.0) || !std::isfinite(ratio)) {
        throw DomainError("update_belief: utility ratio must be finite and >= 1");
    }
    const double f = rule(ratio);
    if (!(f >= 1.0) || !std::isfinite(f)) {
        throw RuleError("update rule " + rule.name() + " returned F(" + format_number(ratio) + ") = " +
                        format_number(f) + " < 1");
    }
    BeliefState next = state;
    next.a = state.a * f;
    if (next.a > kBeliefCap) {
        next.a = kBeliefCap;
        next.capped = true;
    }
    return next;
}

}  // namespace rooneysim

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rooneysim/core/belief.hpp"
#include "rooneysim/core/distributions.hpp"
#include "rooneysim/core/selection.hpp"

namespace rooneysim {

// Every parameter of the iterated selection dynamics.
struct ModelConfig {
    std::size_t n = 100;
    std::size_t k = 5;
    std::size_t ell = 1;
    double rho = 0.25;
    double a1 = 2.0;
    double b = 2.0;
    UtilityDistribution utility_dist = UtilityDistribution::uniform(0.0, 1.0);
    BiasDistributionSpec bias_dist = BiasDistributionSpec::beta();
    UpdateRuleSpec update_rule = UpdateRuleSpec::ratio();
    std::size_t horizon = 25;
    std::uint64_t seed = 1;

    // round(rho * n), ties away from zero.
    std::size_t n_x() const;
    std::size_t n_y() const;
    BeliefState initial_belief() const { return {a1, b, false}; }

    // Human-readable list of violated constraints, each prefixed with the
    // field name; empty when the config is valid.
    std::vector<std::string> problems() const;
    // Throws ConfigError listing every problem.
    void validate() const;
};

struct RoundSample {
    std::vector<double> x_latent;
    std::vector<double> y_latent;
    double beta = 1.0;
    std::vector<double> x_observed;
};

struct RoundRecord {
    double beta = 1.0;
    Shortlist shortlist;
    double u_latent = 0.0;    // U
    double u_observed = 0.0;  // U_obs
    double u_x = 0.0;         // latent utility of the selected X candidates
    double u_y = 0.0;
    double delta = 0.0;
    double a_before = 0.0;
    double a_after = 0.0;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

// delta = (1 - beta) U_X / (beta U_X + U_Y), i.e. U / U_obs - 1.
// Evaluated through the ratio U_X / U_Y so that rescaling every utility by a
// common factor leaves the result unchanged. Throws DegenerateRoundError when
// the denominator vanishes and DomainError for beta outside [0, 1].
double compute_delta(double beta, double u_x, double u_y);

}  // namespace rooneysim

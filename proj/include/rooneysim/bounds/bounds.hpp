#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rooneysim/core/belief.hpp"
#include "rooneysim/core/distributions.hpp"
#include "rooneysim/core/model.hpp"

namespace rooneysim::bounds {

// Constant of the lower bound with the constraint:
// C = a1 (b - 1) / (4 (a1 + b)), C1 = C / (a1 + b).
double rooney_constant(double a1, double b);
// Constant of the upper bound without the constraint: C2 = 32 a1 / (a1 - 1).
double no_rooney_constant(double a1);

// Lower bound on E[beta^t] under the ell-th order constraint:
//   (1 - (1 - Phi(a1)) / (1 + C1 t rho / (k - ell + 1))) (1 - exp(-t rho / 16)).
// Takes no n: the bound is independent of the candidate count.
// Throws NotApplicableError for ell == 0.
double thm1_lower(const ModelConfig& config, double t);

// Upper bound on E[beta^t] without the constraint and with Unif(0, 1)
// utilities: Phi(a1) + C2 t ln(n) / (n (1 - rho)).
// Throws NotApplicableError for ell > 0 or a different utility distribution.
double thm2_upper(const ModelConfig& config, double t);

// True iff 16 ln(n) / (n (1 - rho)) * (a1 + b) / (a1 - 1) <= 1 / t, the
// large-n requirement behind thm2_upper.
bool n0_check(const ModelConfig& config, double t);

// True when the bound is trivially satisfied by any beta in [0, 1]
// (lower <= 0, upper >= 1).
bool lower_is_vacuous(double value);
bool upper_is_vacuous(double value);

struct BoundPoint {
    std::size_t t = 0;
    std::optional<double> lower;
    std::optional<double> upper;
    bool vacuous = false;
    bool n0_ok = true;
};

struct BoundCurve {
    // Inputs, kept alongside the values for auditability.
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t ell = 0;
    double rho = 0.0;
    double a1 = 0.0;
    double b = 0.0;
    std::vector<BoundPoint> points;
};

// Evaluates whichever bound applies (lower when ell >= 1, upper when ell == 0)
// at t = 1..horizon.
BoundCurve bound_curve(const ModelConfig& config);

// T_P(eps) = Pr[X >= (1 - eps) M] with M the supremum of the support.
// Closed form for the uniform family; adaptive Gauss-Kronrod quadrature of
// the density otherwise. Throws DomainError unless eps in (0, 1).
double tail_mass(const UtilityDistribution& dist, double eps);

struct AssumptionResult {
    std::string name;
    bool passed = true;
    std::vector<std::string> failures;
};

// Named pass/fail checks; the bias-family report holds, in order,
// phi-increasing, phi-concave, inverse-moment and median-inequality.
struct AssumptionReport {
    std::string subject;
    std::vector<AssumptionResult> checks;

    bool all_passed() const;
    const AssumptionResult& at(const std::string& name) const;
    std::string to_string() const;
};

// Checks the four sufficient conditions on a bias family D(a) over a sorted
// grid of a-values (all > 1), with b fixed. The median condition
//   (1 - median(a)) / (median(a) + (k - ell)) > C3 / (a (k - ell + 1))
// is evaluated for every supplied (k, ell) pair.
AssumptionReport assumption_check_bias_family(const BiasDistributionSpec& spec, double b,
                                              const std::vector<double>& grid,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& k_ell_pairs,
                                              double c3);

// Default C3 for the beta family: (b - 1) / 2.
inline double default_c3(double b) { return (b - 1.0) / 2.0; }

// F(1) = 1, strict increase and midpoint concavity of an update rule over a
// grid of points in [1, max_x].
AssumptionReport check_update_rule(const UpdateRuleSpec& rule, double max_x = 10.0, std::size_t points = 91);

}  // namespace rooneysim::bounds

#include "rooneysim/bounds/bounds.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "rooneysim/core/error.hpp"

namespace rooneysim::bounds {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

double rooney_constant(double a1, double b) {
    const double c = a1 * (b - 1.0) / (4.0 * (a1 + b));
    return c / (a1 + b);
}

double no_rooney_constant(double a1) { return 32.0 * a1 / (a1 - 1.0); }

double thm1_lower(const ModelConfig& config, double t) {
    if (config.ell == 0) throw NotApplicableError("the constrained lower bound requires ell >= 1");
    if (!(t >= 0.0)) throw DomainError("thm1_lower: t must be non-negative");
    const double phi1 = phi(config.initial_belief());
    const double c1 = rooney_constant(config.a1, config.b);
    const double slots = static_cast<double>(config.k - config.ell + 1);
    const double growth = c1 * t * config.rho / slots;
    return (1.0 - (1.0 - phi1) / (1.0 + growth)) * (1.0 - std::exp(-t * config.rho / 16.0));
}

double thm2_upper(const ModelConfig& config, double t) {
    if (config.ell != 0) throw NotApplicableError("the unconstrained upper bound requires ell == 0");
    if (!config.utility_dist.is_standard_uniform()) {
        throw NotApplicableError("the unconstrained upper bound requires uniform(0, 1) utilities");
    }
    if (!(t >= 0.0)) throw DomainError("thm2_upper: t must be non-negative");
    const double n = static_cast<double>(config.n);
    const double phi1 = phi(config.initial_belief());
    return phi1 + no_rooney_constant(config.a1) * t * std::log(n) / (n * (1.0 - config.rho));
}

bool n0_check(const ModelConfig& config, double t) {
    if (t <= 0.0) return true;
    const double n = static_cast<double>(config.n);
    const double lhs = 16.0 * std::log(n) / (n * (1.0 - config.rho)) * (config.a1 + config.b) / (config.a1 - 1.0);
    return lhs <= 1.0 / t;
}

bool lower_is_vacuous(double value) { return !(value > 0.0); }
bool upper_is_vacuous(double value) { return !(value < 1.0); }

BoundCurve bound_curve(const ModelConfig& config) {
    config.validate();
    BoundCurve curve{config.n, config.k, config.ell, config.rho, config.a1, config.b, {}};
    curve.points.reserve(config.horizon);
    for (std::size_t t = 1; t <= config.horizon; ++t) {
        BoundPoint p;
        p.t = t;
        const double td = static_cast<double>(t);
        if (config.ell >= 1) {
            p.lower = thm1_lower(config, td);
            p.vacuous = lower_is_vacuous(*p.lower);
        } else {
            p.upper = thm2_upper(config, td);
            p.vacuous = upper_is_vacuous(*p.upper);
            p.n0_ok = n0_check(config, td);
        }
        curve.points.push_back(p);
    }
    return curve;
}

double tail_mass(const UtilityDistribution& dist, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("tail_mass: eps must lie in (0, 1)");
    const double top = dist.hi();
    const double lo = dist.lo();
    const double threshold = std::max(lo, (1.0 - eps) * top);
    if (std::holds_alternative<UtilityDistribution::Uniform>(dist.kind())) {
        return std::min(1.0, eps * top / (top - lo));
    }
    double error = 0.0;
    const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&dist](double x) { return dist.pdf(x); }, threshold, top, 20, 1e-13, &error);
    if (error > 1e-8) throw InternalError("tail_mass: quadrature error estimate above 1e-8");
    return std::clamp(mass, 0.0, 1.0);
}

bool AssumptionReport::all_passed() const {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

const AssumptionResult& AssumptionReport::at(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw InternalError("no assumption check named " + name);
}

std::string AssumptionReport::to_string() const {
    std::ostringstream os;
    os << subject << '\n';
    for (const auto& c : checks) {
        os << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
        for (const auto& f : c.failures) os << "       " << f << '\n';
    }
    return os.str();
}

namespace {

void fail(AssumptionResult& r, std::string why) {
    r.passed = false;
    r.failures.push_back(std::move(why));
}

// Evaluates f at each grid point, recording evaluator failures per point.
std::vector<std::optional<double>> evaluate(const std::vector<double>& grid, AssumptionResult& result,
                                            const std::function<double(double)>& f) {
    std::vector<std::optional<double>> out;
    for (double a : grid) {
        try {
            out.emplace_back(f(a));
        } catch (const std::exception& e) {
            out.emplace_back(std::nullopt);
            fail(result, "a=" + fmt(a) + ": evaluator failed: " + e.what());
        }
    }
    return out;
}

}  // namespace

AssumptionReport assumption_check_bias_family(const BiasDistributionSpec& spec, double b,
                                              const std::vector<double>& grid,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& k_ell_pairs,
                                              double c3) {
    if (grid.empty()) throw DomainError("assumption check needs a non-empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 1.0)) throw DomainError("assumption check grid values must be > 1");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("assumption check grid must be strictly ascending");
    }
    if (!(c3 > 0.0)) throw DomainError("assumption check needs C3 > 0");

    AssumptionReport report;
    report.subject = "bias family " + spec.name() + " (b=" + fmt(b) + ")";
    AssumptionResult increasing{"phi-increasing", true, {}};
    AssumptionResult concave{"phi-concave", true, {}};
    AssumptionResult inverse{"inverse-moment", true, {}};
    AssumptionResult median{"median-inequality", true, {}};

    auto mean_at = [&](double a) { return spec.mean(BeliefState{a, b, false}); };
    const auto phis = evaluate(grid, increasing, mean_at);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (phis[i - 1] && phis[i] && !(*phis[i] > *phis[i - 1])) {
            fail(increasing, "Phi(" + fmt(grid[i]) + ")=" + fmt(*phis[i]) + " is not above Phi(" + fmt(grid[i - 1]) +
                                 ")=" + fmt(*phis[i - 1]));
        }
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            if (!phis[i] || !phis[j]) continue;
            const double mid = 0.5 * (grid[i] + grid[j]);
            try {
                const double at_mid = mean_at(mid);
                const double chord = 0.5 * (*phis[i] + *phis[j]);
                if (at_mid < chord - 1e-12) {
                    fail(concave, "Phi(" + fmt(mid) + ")=" + fmt(at_mid) + " below chord " + fmt(chord));
                }
            } catch (const std::exception& e) {
                fail(concave, "a=" + fmt(mid) + ": evaluator failed: " + e.what());
            }
        }
    }

    const auto inv = evaluate(grid, inverse, [&](double a) { return spec.inverse_moment(BeliefState{a, b, false}); });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (inv[i] && !std::isfinite(*inv[i])) fail(inverse, "E[1/beta] is not finite at a=" + fmt(grid[i]));
        if (i > 0 && inv[i] && inv[i - 1] && std::isfinite(*inv[i]) && !(*inv[i] < *inv[i - 1])) {
            fail(inverse, "E[1/beta] does not decrease from a=" + fmt(grid[i - 1]) + " to a=" + fmt(grid[i]));
        }
    }

    const auto medians = evaluate(grid, median, [&](double a) { return spec.median(BeliefState{a, b, false}); });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!medians[i]) continue;
        const double m = *medians[i];
        for (const auto& [k, ell] : k_ell_pairs) {
            if (ell > k) {
                fail(median, "invalid pair k=" + std::to_string(k) + ", ell=" + std::to_string(ell));
                continue;
            }
            const double slack = static_cast<double>(k - ell);
            const double lhs = (1.0 - m) / (m + slack);
            const double rhs = c3 / (grid[i] * (slack + 1.0));
            if (!(lhs > rhs)) {
                fail(median, "a=" + fmt(grid[i]) + ", k=" + std::to_string(k) + ", ell=" + std::to_string(ell) +
                                 ": " + fmt(lhs) + " <= " + fmt(rhs));
            }
        }
    }

    report.checks = {increasing, concave, inverse, median};
    return report;
}

AssumptionReport check_update_rule(const UpdateRuleSpec& rule, double max_x, std::size_t points) {
    if (!(max_x > 1.0) || points < 2) throw DomainError("check_update_rule needs max_x > 1 and at least 2 points");
    AssumptionReport report;
    report.subject = "update rule " + rule.name();
    AssumptionResult at_one{"f-at-one", true, {}};
    AssumptionResult increasing{"f-increasing", true, {}};
    AssumptionResult concave{"f-concave", true, {}};

    if (rule(1.0) != 1.0) fail(at_one, "F(1) = " + fmt(rule(1.0)));

    std::vector<double> xs(points);
    std::vector<double> fs(points);
    for (std::size_t i = 0; i < points; ++i) {
        xs[i] = 1.0 + (max_x - 1.0) * static_cast<double>(i) / static_cast<double>(points - 1);
        fs[i] = rule(xs[i]);
    }
    for (std::size_t i = 1; i < points; ++i) {
        if (!(fs[i] > fs[i - 1])) fail(increasing, "F(" + fmt(xs[i]) + ") <= F(" + fmt(xs[i - 1]) + ")");
    }
    for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t j = i + 1; j < points; ++j) {
            const double mid = rule(0.5 * (xs[i] + xs[j]));
            if (mid < 0.5 * (fs[i] + fs[j]) - 1e-12) {
                fail(concave, "midpoint of [" + fmt(xs[i]) + ", " + fmt(xs[j]) + "] below chord");
            }
        }
    }
    report.checks = {at_one, increasing, concave};
    return report;
}

}  // namespace rooneysim::bounds

#include "rooneysim/core/model.hpp"

#include <cmath>
#include <sstream>

#include "rooneysim/core/error.hpp"

namespace rooneysim {

std::size_t ModelConfig::n_x() const {
    if (!(rho > 0.0 && rho < 1.0)) return 0;
    return static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
}

std::size_t ModelConfig::n_y() const {
    const std::size_t nx = n_x();
    return nx > n ? 0 : n - nx;
}

std::vector<std::string> ModelConfig::problems() const {
    std::vector<std::string> out;
    if (n < 2) out.emplace_back("n: must be at least 2");
    if (!(rho > 0.0 && rho < 1.0)) out.emplace_back("rho: must lie in (0, 1)");
    if (!(a1 > 1.0) || !std::isfinite(a1)) out.emplace_back("a1: must be finite and > 1");
    if (!(b > 1.0) || !std::isfinite(b)) out.emplace_back("b: must be finite and > 1");
    if (n > 0 && rho > 0.0 && rho < 1.0) {
        if (n_x() < 1) out.emplace_back("rho: round(rho * n) must be at least 1");
        if (n_y() < 1) out.emplace_back("rho: n - round(rho * n) must be at least 1");
    }
    if (k == 0) out.emplace_back("k: must be at least 1");
    if (k > n) out.emplace_back("k: must not exceed n");
    if (ell > k) out.emplace_back("ell: must not exceed k");
    if (n > 0 && rho > 0.0 && rho < 1.0 && ell > n_x()) {
        out.emplace_back("ell: must not exceed the number of X candidates round(rho * n)");
    }
    return out;
}

void ModelConfig::validate() const {
    const auto list = problems();
    if (list.empty()) return;
    std::ostringstream os;
    os << "invalid model configuration:";
    for (const auto& p : list) os << "\n  " << p;
    throw ConfigError(os.str());
}

double compute_delta(double beta, double u_x, double u_y) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("compute_delta: beta must lie in [0, 1]");
    if (!(u_x >= 0.0) || !(u_y >= 0.0)) throw DomainError("compute_delta: utilities must be non-negative");
    if (beta * u_x + u_y == 0.0) {
        throw DegenerateRoundError("degenerate round: observed utility of the shortlist is zero");
    }
    if (u_x == 0.0) return 0.0;
    if (u_y == 0.0) return (1.0 - beta) / beta;
    const double q = u_x / u_y;
    return (1.0 - beta) * q / (beta * q + 1.0);
}

}  // namespace rooneysim

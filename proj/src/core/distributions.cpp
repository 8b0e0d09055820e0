#include "rooneysim/core/distributions.hpp"

#include <cmath>
#include <sstream>

#include "rooneysim/core/error.hpp"
#include "rooneysim/core/special.hpp"

namespace rooneysim {

double Rng::normal() noexcept {
    double u;
    double v;
    double s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

bool operator==(const UtilityDistribution::Uniform& l, const UtilityDistribution::Uniform& r) {
    return l.lo == r.lo && l.hi == r.hi;
}
bool operator==(const UtilityDistribution::TruncatedNormal& l, const UtilityDistribution::TruncatedNormal& r) {
    return l.location == r.location && l.scale == r.scale && l.lo == r.lo && l.hi == r.hi;
}
bool operator==(const UtilityDistribution::TruncatedPowerLaw& l, const UtilityDistribution::TruncatedPowerLaw& r) {
    return l.exponent == r.exponent && l.lo == r.lo && l.hi == r.hi;
}
bool operator==(const UtilityDistribution& l, const UtilityDistribution& r) { return l.kind_ == r.kind_; }

namespace {

void check_support(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("utility support bounds must be finite");
    if (lo < 0.0) throw ConfigError("utility support must be non-negative (lo >= 0)");
    if (!(hi > lo)) throw ConfigError("utility support must satisfy hi > lo");
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

// Normalizing constant of x^(-exponent) over [lo, hi].
double power_law_mass(double exponent, double lo, double x) {
    if (exponent == 1.0) return std::log(x / lo);
    const double e = 1.0 - exponent;
    return (std::pow(x, e) - std::pow(lo, e)) / e;
}

}  // namespace

UtilityDistribution::UtilityDistribution(Kind kind) : kind_(std::move(kind)) {
    std::visit(Overloaded{
                   [](const Uniform& u) { check_support(u.lo, u.hi); },
                   [](const TruncatedNormal& t) {
                       check_support(t.lo, t.hi);
                       if (!(t.scale > 0.0) || !std::isfinite(t.scale))
                           throw ConfigError("truncated-normal scale must be positive");
                       if (!std::isfinite(t.location)) throw ConfigError("truncated-normal location must be finite");
                       const double mass = special::normal_cdf((t.hi - t.location) / t.scale) -
                                           special::normal_cdf((t.lo - t.location) / t.scale);
                       if (!(mass > 1e-300)) throw ConfigError("truncated-normal has no mass on [lo, hi]");
                   },
                   [](const TruncatedPowerLaw& p) {
                       check_support(p.lo, p.hi);
                       if (!std::isfinite(p.exponent)) throw ConfigError("power-law exponent must be finite");
                       if (p.lo == 0.0 && p.exponent >= 1.0)
                           throw ConfigError("power-law with lo = 0 needs exponent < 1 to be normalizable");
                   },
               },
               kind_);
}

std::string UtilityDistribution::name() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(Overloaded{
                   [&](const Uniform& u) { os << "uniform(" << u.lo << ", " << u.hi << ")"; },
                   [&](const TruncatedNormal& t) {
                       os << "truncated-normal(" << t.location << ", " << t.scale << ", " << t.lo << ", " << t.hi
                          << ")";
                   },
                   [&](const TruncatedPowerLaw& p) {
                       os << "truncated-powerlaw(" << p.exponent << ", " << p.lo << ", " << p.hi << ")";
                   },
               },
               kind_);
    return os.str();
}

double UtilityDistribution::lo() const noexcept {
    return std::visit([](const auto& k) { return k.lo; }, kind_);
}

double UtilityDistribution::hi() const noexcept {
    return std::visit([](const auto& k) { return k.hi; }, kind_);
}

bool UtilityDistribution::is_standard_uniform() const noexcept {
    const auto* u = std::get_if<Uniform>(&kind_);
    return u != nullptr && u->lo == 0.0 && u->hi == 1.0;
}

double UtilityDistribution::pdf(double x) const {
    if (x < lo() || x > hi()) return 0.0;
    return std::visit(Overloaded{
                          [](const Uniform& u) { return 1.0 / (u.hi - u.lo); },
                          [x](const TruncatedNormal& t) {
                              const double mass = special::normal_cdf((t.hi - t.location) / t.scale) -
                                                  special::normal_cdf((t.lo - t.location) / t.scale);
                              return special::normal_pdf((x - t.location) / t.scale) / (t.scale * mass);
                          },
                          [x](const TruncatedPowerLaw& p) {
                              return std::pow(x, -p.exponent) / power_law_mass(p.exponent, p.lo, p.hi);
                          },
                      },
                      kind_);
}

double UtilityDistribution::cdf(double x) const {
    if (x <= lo()) return 0.0;
    if (x >= hi()) return 1.0;
    return std::visit(Overloaded{
                          [x](const Uniform& u) { return (x - u.lo) / (u.hi - u.lo); },
                          [x](const TruncatedNormal& t) {
                              const double a = special::normal_cdf((t.lo - t.location) / t.scale);
                              const double b = special::normal_cdf((t.hi - t.location) / t.scale);
                              return (special::normal_cdf((x - t.location) / t.scale) - a) / (b - a);
                          },
                          [x](const TruncatedPowerLaw& p) {
                              return power_law_mass(p.exponent, p.lo, x) / power_law_mass(p.exponent, p.lo, p.hi);
                          },
                      },
                      kind_);
}

double UtilityDistribution::sample(Rng& rng) const {
    return std::visit(
        Overloaded{
            [&rng](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform(); },
            [&rng](const TruncatedNormal& t) {
                const double alpha = (t.lo - t.location) / t.scale;
                const double beta = (t.hi - t.location) / t.scale;
                double z;
                if (alpha > 0.0) {
                    // Both bounds in the upper tail: invert the survival function.
                    const double sa = special::normal_sf(alpha);
                    const double sb = special::normal_sf(beta);
                    z = -special::normal_quantile(sb + (sa - sb) * rng.uniform_open());
                } else {
                    const double ca = special::normal_cdf(alpha);
                    const double cb = special::normal_cdf(beta);
                    z = special::normal_quantile(ca + (cb - ca) * rng.uniform_open());
                }
                return std::clamp(t.location + t.scale * z, t.lo, t.hi);
            },
            [&rng](const TruncatedPowerLaw& p) {
                const double u = rng.uniform();
                double x;
                if (p.exponent == 1.0) {
                    x = p.lo * std::pow(p.hi / p.lo, u);
                } else {
                    const double e = 1.0 - p.exponent;
                    const double lo_e = std::pow(p.lo, e);
                    x = std::pow(lo_e + u * (std::pow(p.hi, e) - lo_e), 1.0 / e);
                }
                return std::clamp(x, p.lo, p.hi);
            },
        },
        kind_);
}

std::vector<double> sample_latent(const UtilityDistribution& dist, std::size_t count, Rng& rng) {
    if (count == 0) throw ConfigError("sample_latent: count must be at least 1");
    std::vector<double> out(count);
    sample_latent(dist, out, rng);
    return out;
}

void sample_latent(const UtilityDistribution& dist, std::span<double> out, Rng& rng) {
    if (const auto* u = std::get_if<UtilityDistribution::Uniform>(&dist.kind())) {
        const double width = u->hi - u->lo;
        for (double& v : out) v = u->lo + width * rng.uniform();
        return;
    }
    for (double& v : out) v = dist.sample(rng);
}

double sample_gamma(double shape, Rng& rng) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        return sample_gamma(shape + 1.0, rng) * std::pow(rng.uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;  // squeeze
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_beta(double a, double b, Rng& rng) {
    const double ga = sample_gamma(a, rng);
    const double gb = sample_gamma(b, rng);
    return ga / (ga + gb);
}

}  // namespace rooneysim

#include "subsonic/gas.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "subsonic/error.hpp"

namespace subsonic {

GasLaw::GasLaw(double gamma) : gamma_(gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw DomainError("adiabatic exponent must satisfy gamma > 1, got " + std::to_string(gamma));
    }
}

namespace {
void require_positive_density(double rho) {
    if (!(rho > 0.0)) throw DomainError("density must be positive, got " + std::to_string(rho));
}
}  // namespace

double GasLaw::pressure(double rho) const {
    require_positive_density(rho);
    return std::pow(rho, gamma_);
}

double GasLaw::enthalpy(double rho) const {
    require_positive_density(rho);
    return gamma_ * std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0);
}

double GasLaw::sound_speed(double rho) const {
    require_positive_density(rho);
    return std::sqrt(gamma_ * std::pow(rho, gamma_ - 1.0));
}

double GasLaw::density_from_enthalpy(double value) const {
    if (!(value > 0.0)) throw DomainError("enthalpy must be positive");
    return std::pow((gamma_ - 1.0) * value / gamma_, 1.0 / (gamma_ - 1.0));
}

BernoulliEnvelope envelope(const GasLaw& gas, double s) {
    if (!(s > 0.0)) throw DomainError("Bernoulli value must be positive, got " + std::to_string(s));
    const double g = gas.gamma();
    BernoulliEnvelope env;
    env.s = s;
    env.rho_sonic = std::pow(2.0 * (g - 1.0) * s / (g * (g + 1.0)), 1.0 / (g - 1.0));
    env.rho_stagnation = std::pow((g - 1.0) * s / g, 1.0 / (g - 1.0));
    env.sigma_crit = std::sqrt(g) * std::pow(env.rho_sonic, 0.5 * (g + 1.0));
    return env;
}

double critical_momentum(const GasLaw& gas, double s) { return envelope(gas, s).sigma_crit; }

double momentum_sq(const GasLaw& gas, double rho, double s) {
    return 2.0 * rho * rho * (s - gas.enthalpy(rho));
}

double invert_bernoulli(const GasLaw& gas, double m_sq, double s) {
    return invert_bernoulli(gas, m_sq, envelope(gas, s));
}

double invert_bernoulli(const GasLaw& gas, double m_sq, const BernoulliEnvelope& env) {
    if (!(env.s > 0.0)) throw DomainError("Bernoulli value must be positive");
    if (!(m_sq >= 0.0)) throw DomainError("momentum squared must be non-negative");
    const double sigma_sq = env.sigma_crit * env.sigma_crit;
    // A few ulps of slack so a caller passing exactly Sigma^2 lands on the sonic endpoint.
    if (m_sq > sigma_sq * (1.0 + 1e-14)) {
        throw SupersonicMomentumError("supersonic-momentum: m^2 = " + std::to_string(m_sq) +
                                      " exceeds Sigma^2 = " + std::to_string(sigma_sq));
    }
    if (m_sq >= sigma_sq) return env.rho_sonic;
    if (m_sq == 0.0) return env.rho_stagnation;

    const double g = gas.gamma();
    const double s = env.s;
    // Momentum-squared residual, strictly decreasing on the subsonic bracket.
    auto residual = [&](double rho) { return 2.0 * rho * rho * (s - gas.enthalpy(rho)) - m_sq; };
    auto slope = [&](double rho) {
        return 4.0 * rho * (s - gas.enthalpy(rho)) - 2.0 * g * std::pow(rho, g);
    };

    double lo = env.rho_sonic;       // residual >= 0
    double hi = env.rho_stagnation;  // residual <= 0
    double rho = env.rho_stagnation * (1.0 - m_sq / (2.0 * sigma_sq));
    if (!(rho > lo && rho < hi)) rho = 0.5 * (lo + hi);

    for (int it = 0; it < 60; ++it) {
        const double r = residual(rho);
        if (r == 0.0) return rho;
        if (r > 0.0) lo = rho; else hi = rho;

        const double d = slope(rho);
        double next = (d < 0.0) ? rho - r / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - rho);
        rho = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * rho ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            break;
        }
    }
    return rho;
}

double upstream_density_floor(const GasLaw& gas, double max_u0) {
    const double g = gas.gamma();
    return std::pow(max_u0 * max_u0 / g, 1.0 / (g - 1.0));
}

}  // namespace subsonic

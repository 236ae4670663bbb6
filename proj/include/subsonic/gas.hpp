#pragma once

namespace subsonic {

/// Polytropic gas p = rho^gamma in non-dimensional units.
class GasLaw {
public:
    explicit GasLaw(double gamma);

    double gamma() const { return gamma_; }

    double pressure(double rho) const;
    /// h(rho) = gamma rho^(gamma-1) / (gamma-1)
    double enthalpy(double rho) const;
    /// c(rho) = sqrt(gamma rho^(gamma-1))
    double sound_speed(double rho) const;
    double mach(double speed, double rho) const { return speed / sound_speed(rho); }

    /// Density with h(rho) = value. Inverse of enthalpy().
    double density_from_enthalpy(double value) const;

private:
    double gamma_;
};

/// Sonic and stagnation densities attached to a Bernoulli value s.
struct BernoulliEnvelope {
    double s = 0.0;
    double rho_sonic = 0.0;       ///< (gamma/2) rho^(gamma-1) + h(rho) = s
    double rho_stagnation = 0.0;  ///< h(rho) = s
    double sigma_crit = 0.0;      ///< sqrt(gamma) rho_sonic^((gamma+1)/2), the largest subsonic momentum
};

BernoulliEnvelope envelope(const GasLaw& gas, double s);

/// Critical momentum Sigma(s) alone, without building the full envelope.
double critical_momentum(const GasLaw& gas, double s);

/// Subsonic-branch density rho in [rho_sonic(s), rho_stagnation(s)] solving
/// m_sq / (2 rho^2) + h(rho) = s.
///
/// m_sq == Sigma(s)^2 returns the sonic density. Anything strictly above throws
/// SupersonicMomentumError; callers inside the iteration pre-truncate with the cutoff.
double invert_bernoulli(const GasLaw& gas, double m_sq, double s);

/// Same as invert_bernoulli but with a precomputed envelope for s.
double invert_bernoulli(const GasLaw& gas, double m_sq, const BernoulliEnvelope& env);

/// Momentum squared on the subsonic branch: 2 rho^2 (s - h(rho)).
double momentum_sq(const GasLaw& gas, double rho, double s);

/// Upstream subsonicity bound rho0* = (max u0^2 / gamma)^(1/(gamma-1)).
double upstream_density_floor(const GasLaw& gas, double max_u0);

}  // namespace subsonic

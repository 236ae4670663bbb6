#pragma once

#include <string>
#include <vector>

namespace subsonic {

enum class ProfileKind { constant, convex_decay, perturbation, tabulated };

/// Which hypothesis class a profile is audited against.
enum class Regime {
    convex,        ///< u0 > 0, u0'' >= 0, u0'(0) <= 0, u0' -> 0
    perturbation,  ///< u0 > 0, u0'(0) <= 0, |u0^(i)| <= eps/(1+x2)^(k+i), i = 1, 2
    basic,         ///< positivity and u0'(0) <= 0 only
};

struct ProfileSample {
    double u = 0.0;
    double du = 0.0;
    double d2u = 0.0;
};

/// Incoming horizontal velocity u0(x2), x2 >= 0.
class UpstreamProfile {
public:
    static UpstreamProfile constant(double ubar);
    /// u0 = ubar + a / (1 + x2)^p with a >= 0, p >= 1.
    static UpstreamProfile convex_decay(double ubar, double a, double p);
    /// u0 = ubar + eps * phi, phi = (1 + x2)^(-k) / (k (k + 1)), so |u0^(i)| <= eps/(1+x2)^(k+i).
    static UpstreamProfile perturbation(double ubar, double eps, double k);
    /// Natural cubic spline through strictly increasing samples; held constant past the last sample.
    static UpstreamProfile tabulated(std::vector<double> x2, std::vector<double> u0);
    /// Two-column CSV (x2,u0) with a header line.
    static UpstreamProfile from_csv(const std::string& path);

    ProfileSample eval(double x2) const;
    double operator()(double x2) const { return eval(x2).u; }

    ProfileKind kind() const { return kind_; }
    double ubar() const { return ubar_; }
    double amplitude() const { return a_; }
    double power() const { return p_; }
    double eps() const { return eps_; }
    double decay() const { return k_; }

    /// Sup of u0 over [0, x_end], sampled.
    double max_speed(double x_end) const;
    /// Right end of the audit window: 100 for analytic kinds, the last sample for tabulated.
    double audit_extent() const;
    /// The regime the declared kind is meant to satisfy.
    Regime declared_regime() const;

private:
    UpstreamProfile() = default;

    ProfileKind kind_ = ProfileKind::constant;
    double ubar_ = 1.0;
    double a_ = 0.0, p_ = 1.0;
    double eps_ = 0.0, k_ = 2.0;
    // spline data (tabulated)
    std::vector<double> xs_, us_, m_;  // m_ = second derivatives at knots
};

/// Names of violated hypotheses on a 10^4-point audit grid; empty when all hold.
std::vector<std::string> validate(const UpstreamProfile& profile);
std::vector<std::string> validate(const UpstreamProfile& profile, Regime regime, double eps = 0.0,
                                  double k = 0.0);

/// Nozzle-truncated profile u0L on [0, L] for a given incoming density.
///
/// g_L = u0' on [0, L-1] and the linear ramp u0'(L-1)(L - x2) on (L-1, L]; u0L = u0(0) + int g_L.
/// Holds the cumulative flux table int_0^x2 u0L used by kappa() and barpsi().
class TruncatedProfile {
public:
    TruncatedProfile(const UpstreamProfile& profile, double rho0, double L, int intervals = 1 << 14);

    const UpstreamProfile& profile() const { return profile_; }
    double rho0() const { return rho0_; }
    double L() const { return L_; }
    /// m_L = rho0 int_0^L u0L
    double mass_flux() const { return mass_flux_; }
    double max_u() const { return max_u_; }
    double min_u() const { return min_u_; }

    /// (u0L, u0L', u0L'') at x2 in [0, L].
    ProfileSample eval(double x2) const;
    double slope(double x2) const { return eval(x2).du; }

    /// rho0 int_0^x2 u0L, x2 in [0, L].
    double barpsi(double x2) const;
    /// Height kappa where the upstream streamline with value psi starts; psi in [0, m_L].
    double kappa(double psi) const;

    /// Extended F(psi) = u0L(kappa(psi)), continued outside [0, m_L].
    double F(double psi) const;
    double F_prime(double psi) const;
    /// Memory term W(psi) = F F'.
    double memory_W(double psi) const;
    /// F F'' + F'^2 = u0L''(kappa) / (rho0^2 u0L(kappa)) on [0, m_L].
    double convexity_surrogate(double psi) const;

    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& speed_samples() const { return u_; }

private:
    /// int_0^x u0L
    double flux(double x) const;

    UpstreamProfile profile_;
    double rho0_, L_;
    double h_;
    std::vector<double> x_, u_, cum_;
    double mass_flux_ = 0.0;
    double max_u_ = 0.0, min_u_ = 0.0;
    double ramp_slope_ = 0.0;  // u0'(L-1)
    double ramp_base_ = 0.0;   // u0(L-1)
    double F0_ = 0.0, Fp0_ = 0.0;
};

}  // namespace subsonic

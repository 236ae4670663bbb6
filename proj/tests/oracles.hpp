#pragma once

// Independent reference computations for the tests. Nothing here calls into the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double enthalpy(double gamma, double rho) { return gamma * std::pow(rho, gamma - 1.0) / (gamma - 1.0); }

inline double sonic_density(double gamma, double s) {
    // (gamma/2) rho^(gamma-1) + h(rho) = s  =>  rho^(gamma-1) = 2 (gamma-1) s / (gamma (gamma+1))
    return std::pow(2.0 * (gamma - 1.0) * s / (gamma * (gamma + 1.0)), 1.0 / (gamma - 1.0));
}

inline double stagnation_density(double gamma, double s) { return std::pow((gamma - 1.0) * s / gamma, 1.0 / (gamma - 1.0)); }

inline double critical_momentum(double gamma, double s) {
    return std::sqrt(gamma) * std::pow(sonic_density(gamma, s), 0.5 * (gamma + 1.0));
}

/// Root of f on [a, b] by plain bisection (f(a), f(b) of opposite sign).
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    double fa = f(a);
    for (int k = 0; k < iters; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Subsonic density for momentum^2 m_sq at Bernoulli value s, by bisection on the bracket.
inline double subsonic_density(double gamma, double m_sq, double s) {
    auto f = [&](double rho) { return m_sq / (2.0 * rho * rho) + enthalpy(gamma, rho) - s; };
    return bisect(f, sonic_density(gamma, s), stagnation_density(gamma, s));
}

/// rho0 with rho0 ubar = t0 Sigma(h(rho0) + ubar^2/2): flat-wall constant-profile certification edge.
inline double flat_wall_threshold(double gamma, double ubar, double t0) {
    auto f = [&](double rho) {
        return rho * ubar - t0 * critical_momentum(gamma, enthalpy(gamma, rho) + 0.5 * ubar * ubar);
    };
    const double floor = std::pow(ubar * ubar / gamma, 1.0 / (gamma - 1.0));
    double hi = 2.0 * floor;
    while (f(hi) > 0.0) hi *= 2.0;
    return bisect(f, floor * (1.0 + 1e-12), hi);
}

/// Composite Simpson with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Adaptive Simpson to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double a0, double b0, double fa, double fm, double fb, double whole, double eps, int d) -> double {
        const double m = 0.5 * (a0 + b0);
        const double lm = 0.5 * (a0 + m), rm = 0.5 * (m + b0);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a0) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b0 - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(a0, m, fa, flm, fm, left, 0.5 * eps, d - 1) + rec(m, b0, fm, frm, fb, right, 0.5 * eps, d - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

}  // namespace oracle

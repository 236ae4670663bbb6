#include "subsonic/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "subsonic/error.hpp"
#include "subsonic/interp.hpp"

namespace subsonic {

double FarfieldTriple::chi_at(double s_value) const { return interp_linear(s, chi, s_value); }

double FarfieldTriple::u1_at(double x2_value) const { return interp_linear(x2, u1, x2_value); }

double FarfieldTriple::psihat_at(double x2_value) const {
    if (x2_value < J - 1e-8 * L || x2_value > L + 1e-8 * L) throw DomainError("psihat is defined on [J, L] only");
    return interp_linear(x2, psihat, x2_value);
}

double D_eval(const GasLaw& gas, const TruncatedProfile& tp, double rho, double s) {
    const double u = tp.eval(s).u;
    return 2.0 * (gas.enthalpy(tp.rho0()) - gas.enthalpy(rho)) + u * u;
}

namespace {

/// Simpson sum of G and its closed-form derivative on the (even) profile grid.
std::pair<double, double> g_integrals(const GasLaw& gas, const TruncatedProfile& tp, double rho) {
    const auto& x = tp.grid();
    const auto& u = tp.speed_samples();
    const std::size_t n = x.size() - 1;
    const double h0 = gas.enthalpy(tp.rho0());
    const double hr = gas.enthalpy(rho);
    const double c2 = gas.gamma() * std::pow(rho, gas.gamma() - 1.0);
    double G = 0.0, dG = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double D = 2.0 * (h0 - hr) + u[i] * u[i];
        if (!(D > 0.0)) throw DomainError("rho out of bracket: D(s; rho) <= 0");
        const double sqrtD = std::sqrt(D);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        G += w * tp.rho0() * u[i] / (rho * sqrtD);
        dG += w * tp.rho0() * u[i] / (rho * rho * D * sqrtD) * (c2 - D);
    }
    const double h = x[1] - x[0];
    return {G * h / 3.0, dG * h / 3.0};
}

}  // namespace

GValue G_eval(const GasLaw& gas, const TruncatedProfile& tp, double rho) {
    if (!(rho > 0.0)) throw DomainError("rho out of bracket: non-positive density");
    if ((tp.grid().size() - 1) % 2 != 0) throw ConfigError("G_eval needs an even number of profile intervals");
    GValue out;
    std::tie(out.G, out.dG) = g_integrals(gas, tp, rho);
    const double step = 1e-6 * rho;
    try {
        out.dG_fd = (g_integrals(gas, tp, rho + step).first - g_integrals(gas, tp, rho - step).first) / (2.0 * step);
    } catch (const DomainError&) {
        out.dG_fd = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double triple_density_floor(const GasLaw& gas, const TruncatedProfile& tp) {
    const double umax = tp.max_u();
    return envelope(gas, 0.5 * umax * umax + gas.enthalpy(tp.rho0())).rho_sonic;
}

FarfieldTriple solve_triple(const GasLaw& gas, const TruncatedProfile& tp, double J) {
    const double L = tp.L();
    if (!(J >= 0.0 && J < L)) throw ConfigError("wall height J must lie in [0, L)");
    const double rho0 = tp.rho0();
    const double target = L - J;

    double lo = triple_density_floor(gas, tp);
    double hi = rho0;
    if (!(lo < rho0)) throw SolveError("no admissible triple (L too small or rho0 too small)");
    if (g_integrals(gas, tp, lo).first > target) {
        throw SolveError("no admissible triple (L too small or rho0 too small): G(rho_floor) > L - J");
    }

    double rho1 = 0.5 * (lo + hi);
    if (J == 0.0) {
        rho1 = rho0;
    } else {
        for (int it = 0; it < 200; ++it) {
            rho1 = 0.5 * (lo + hi);
            const double r = g_integrals(gas, tp, rho1).first - target;
            if (std::abs(r) <= 1e-10 * L) break;
            if (r > 0.0) hi = rho1; else lo = rho1;
        }
    }

    FarfieldTriple t;
    t.rho0 = rho0;
    t.rho1 = rho1;
    t.J = J;
    t.L = L;
    t.s = tp.grid();
    const std::size_t n = t.s.size() - 1;

    const double h0 = gas.enthalpy(rho0);
    const double h1 = gas.enthalpy(rho1);
    auto D_at = [&](double s) {
        const double u = tp.eval(s).u;
        return 2.0 * (h0 - h1) + u * u;
    };
    auto rate = [&](double s) { return rho0 * tp.eval(s).u / (rho1 * std::sqrt(D_at(s))); };

    // The right-hand side depends on s only, so classic RK4 reduces to Simpson per step.
    t.chi.resize(n + 1);
    std::vector<double> u1_knots(n + 1);
    t.chi[0] = J;
    u1_knots[0] = std::sqrt(D_at(t.s[0]));
    double q_prev = rate(t.s[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = t.s[i], b = t.s[i + 1];
        const double q_mid = rate(0.5 * (a + b));
        const double q_next = rate(b);
        t.chi[i + 1] = t.chi[i] + (b - a) / 6.0 * (q_prev + 4.0 * q_mid + q_next);
        u1_knots[i + 1] = std::sqrt(D_at(b));
        q_prev = q_next;
    }

    const MonotoneCubic u1_of_x(t.chi, u1_knots);
    t.x2.resize(n + 1);
    t.u1.resize(n + 1);
    t.psihat.assign(n + 1, 0.0);
    const double dx = (L - J) / n;
    for (std::size_t i = 0; i <= n; ++i) {
        t.x2[i] = (i == n) ? L : J + dx * i;
        t.u1[i] = u1_of_x(t.x2[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double mid = u1_of_x(0.5 * (t.x2[i] + t.x2[i + 1]));
        t.psihat[i + 1] = t.psihat[i] + rho1 * (t.x2[i + 1] - t.x2[i]) / 6.0 * (t.u1[i] + 4.0 * mid + t.u1[i + 1]);
    }
    return t;
}

TripleReport verify_triple(const GasLaw& gas, const FarfieldTriple& t, const TruncatedProfile& tp) {
    TripleReport r;
    const double h0 = gas.enthalpy(t.rho0);
    const double h1 = gas.enthalpy(t.rho1);
    const double c1 = gas.sound_speed(t.rho1);

    r.min_shift = std::numeric_limits<double>::infinity();
    r.max_shift = -std::numeric_limits<double>::infinity();
    r.min_momentum_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.s.size(); ++i) {
        const double s = t.s[i];
        const double u0 = tp.eval(s).u;
        const double u1 = t.u1_at(t.chi[i]);
        r.bernoulli_residual = std::max(r.bernoulli_residual, std::abs(0.5 * u0 * u0 + h0 - 0.5 * u1 * u1 - h1));
        r.mass_residual = std::max(r.mass_residual, std::abs(tp.barpsi(s) - t.psihat_at(t.chi[i])));
        r.min_shift = std::min(r.min_shift, t.chi[i] - s);
        r.max_shift = std::max(r.max_shift, t.chi[i] - s);
        r.min_momentum_margin = std::min(r.min_momentum_margin, t.rho1 * u1 - t.rho0 * u0);
    }

    r.min_gap = std::numeric_limits<double>::infinity();
    r.max_gap = -std::numeric_limits<double>::infinity();
    bool u1_positive = true;
    for (std::size_t i = 0; i < t.x2.size(); ++i) {
        const double gap = tp.barpsi(t.x2[i]) - t.psihat[i];
        r.min_gap = std::min(r.min_gap, gap);
        r.max_gap = std::max(r.max_gap, gap);
        r.max_u1_over_c = std::max(r.max_u1_over_c, t.u1[i] / c1);
        u1_positive = u1_positive && t.u1[i] > 0.0;
    }
    r.gap_bound = t.rho0 * t.J * tp.profile().max_speed(t.L);

    const double scale_tol = 1e-9 * t.L;
    r.shift_ok = r.min_shift >= -scale_tol && r.max_shift <= t.J + scale_tol;
    r.gap_ok = r.min_gap >= -1e-9 * tp.mass_flux() && r.max_gap <= r.gap_bound + 1e-9 * tp.mass_flux();
    r.subsonic_ok = u1_positive && r.max_u1_over_c < 1.0 && t.rho1 > 0.0 && (t.J == 0.0 || t.rho1 < t.rho0);

    // Monotonicity of G across the admissible bracket.
    const double lo = triple_density_floor(gas, tp);
    r.min_dG = std::numeric_limits<double>::infinity();
    constexpr int audit = 32;
    for (int k = 1; k < audit; ++k) {
        const double rho = lo + (t.rho0 - lo) * k / audit;
        r.min_dG = std::min(r.min_dG, G_eval(gas, tp, rho).dG);
    }
    r.monotone_ok = r.min_dG > 0.0;
    return r;
}

}  // namespace subsonic

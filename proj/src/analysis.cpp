#include "subsonic/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "subsonic/error.hpp"

namespace subsonic {

namespace {

constexpr double kCap = 1e3;

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

struct Integrals {
    double lhs = 0.0;
    double grad = 0.0;
};

/// Panels graded geometrically in (1 + s) so the decaying weight is resolved evenly.
Integrals integrate(const PoincareCase& c, double b, int panels) {
    Integrals out;
    const double r0 = std::log1p(c.a), r1 = std::log1p(b);
    for (int p = 0; p < panels; ++p) {
        const double lo = std::expm1(r0 + (r1 - r0) * p / panels);
        const double hi = std::expm1(r0 + (r1 - r0) * (p + 1) / panels);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int q = 0; q < 8; ++q) {
            const double s = mid + half * kNodes[q];
            const double w = half * kWeights[q];
            const double g = c.g(s), dg = c.dg(s);
            out.lhs += w * g * g / std::pow(1.0 + s, c.l);
            out.grad += w * dg * dg;
        }
    }
    return out;
}

double rel_change(double x, double y) {
    const double s = std::max(std::abs(x), std::abs(y));
    return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

}  // namespace

PoincareResult poincare_check(const PoincareCase& c) {
    if (!(c.l > 2.0)) throw DomainError("Poincare exponent must exceed 2");
    if (!(c.a >= 0.0) || !(c.b > c.a)) throw DomainError("Poincare interval must satisfy 0 <= a < b");
    const double b = std::min(c.b, kCap);
    PoincareResult out;
    int panels = 256;
    Integrals coarse = integrate(c, b, panels);
    Integrals fine = integrate(c, b, 2 * panels);
    while (panels < (1 << 14) && (rel_change(coarse.lhs, fine.lhs) > 1e-8 || rel_change(coarse.grad, fine.grad) > 1e-8)) {
        panels *= 2;
        coarse = fine;
        fine = integrate(c, b, 2 * panels);
    }
    out.resolved = rel_change(coarse.lhs, fine.lhs) <= 1e-8 && rel_change(coarse.grad, fine.grad) <= 1e-8;
    if (c.b > kCap) {
        // sup of g^2 past the cap, sampled out to 100 b, times int_b^inf (1+s)^-l
        double sup = 0.0;
        for (int k = 0; k <= 400; ++k) {
            const double s = b * std::pow(100.0, k / 400.0);
            const double g = c.g(s);
            sup = std::max(sup, g * g);
        }
        out.tail = sup * std::pow(1.0 + b, 1.0 - c.l) / (c.l - 1.0);
    }
    const double ga = c.g(c.a);
    out.lhs = fine.lhs + out.tail;
    out.rhs = 2.0 * ga * ga / (c.l - 1.0) + 4.0 / ((c.l - 1.0) * (c.l - 1.0)) * fine.grad;
    out.holds = out.lhs <= out.rhs + 1e-10;
    return out;
}

PoincareSweep poincare_sweep(int functions, const std::vector<double>& exponents, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(1, 5);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> centre(0.0, 20.0), width(0.2, 5.0), left(0.0, 5.0), length(1.0, 50.0);
    std::bernoulli_distribution infinite(0.5);
    PoincareSweep out;
    out.min_margin = std::numeric_limits<double>::infinity();
    for (int f = 0; f < functions; ++f) {
        struct Bump {
            double A, c, w;
        };
        std::vector<Bump> bumps(count(rng));
        for (auto& bp : bumps) bp = {amp(rng), centre(rng), width(rng)};
        PoincareCase pc;
        pc.a = left(rng);
        pc.b = infinite(rng) ? std::numeric_limits<double>::infinity() : pc.a + length(rng);
        pc.g = [bumps](double s) {
            double v = 0.0;
            for (const auto& bp : bumps) v += bp.A * std::exp(-0.5 * (s - bp.c) * (s - bp.c) / (bp.w * bp.w));
            return v;
        };
        pc.dg = [bumps](double s) {
            double v = 0.0;
            for (const auto& bp : bumps)
                v -= bp.A * (s - bp.c) / (bp.w * bp.w) * std::exp(-0.5 * (s - bp.c) * (s - bp.c) / (bp.w * bp.w));
            return v;
        };
        for (double l : exponents) {
            pc.l = l;
            const PoincareResult r = poincare_check(pc);
            ++out.cases;
            if (!r.holds) ++out.failures;
            if (!r.resolved) ++out.unresolved;
            out.min_margin = std::min(out.min_margin, (r.rhs - r.lhs) / std::max(r.rhs, 1e-300));
        }
    }
    return out;
}

ConvergenceStudy grid_convergence(const SetupTemplate& tmpl, double rho0, int levels, ConvergenceReference ref) {
    const int min_levels = ref == ConvergenceReference::barpsi ? 3 : 4;
    if (levels < min_levels) throw ConfigError("grid convergence needs more refinement levels");
    ConvergenceStudy out;
    std::vector<std::vector<double>> solutions;
    std::vector<int> nxs;
    for (int k = 0; k < levels; ++k) {
        SetupTemplate t = tmpl;
        t.nx = tmpl.nx << k;
        t.ny = tmpl.ny << k;
        const ProblemSetup setup = t.build(rho0);
        SolveResult res = picard_solve(setup);
        if (!res.report.converged) throw SolveError("grid convergence level did not converge: " + res.report.status);
        nxs.push_back(t.nx);
        if (ref == ConvergenceReference::barpsi) {
            const Mesh& m = setup.mesh();
            double err = 0.0;
            for (int q = 0; q < m.nodes(); ++q)
                err = std::max(err, std::abs(res.state.psi[q] - setup.tprofile().barpsi(std::clamp(m.x2[q], 0.0, m.L))));
            out.nx.push_back(t.nx);
            out.errors.push_back(err);
        } else {
            solutions.push_back(std::move(res.state.psi));
        }
    }
    if (ref == ConvergenceReference::richardson) {
        // node (i, j) of level k is node (2i, 2j) of level k+1
        for (int k = 0; k + 1 < levels; ++k) {
            const int nx = nxs[k], ny = tmpl.ny << k;
            double d = 0.0;
            for (int j = 0; j <= ny; ++j)
                for (int i = 0; i <= nx; ++i)
                    d = std::max(d, std::abs(solutions[k][j * (nx + 1) + i] -
                                             solutions[k + 1][(2 * j) * (2 * nx + 1) + 2 * i]));
            out.nx.push_back(nx);
            out.errors.push_back(d);
        }
    }
    out.monotone = true;
    for (std::size_t k = 0; k + 1 < out.errors.size(); ++k) {
        if (!(out.errors[k + 1] < out.errors[k])) out.monotone = false;
        out.orders.push_back(std::log2(out.errors[k] / out.errors[k + 1]));
    }
    if (!out.orders.empty()) out.observed_order = out.orders.back();
    return out;
}

}  // namespace subsonic

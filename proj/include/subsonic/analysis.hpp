#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "subsonic/continuation.hpp"

namespace subsonic {

/// Test function g on (a, b) for the weighted Poincare inequality
/// int g^2 / (1+s)^l <= 2 g(a)^2 / (l-1) + 4 / (l-1)^2 int g'^2.
struct PoincareCase {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    double l = 3.0;
    std::function<double(double)> g;
    std::function<double(double)> dg;
};

struct PoincareResult {
    double lhs = 0.0;   ///< includes the tail bound when b is capped
    double rhs = 0.0;
    double tail = 0.0;  ///< bound on the lhs integral beyond the cap
    bool holds = false;
    bool resolved = false;  ///< doubling the panels changed both integrals by < 1e-8 relative
};

/// Infinite intervals are cut at s = 1e3. Throws DomainError for l <= 2.
PoincareResult poincare_check(const PoincareCase& c);

struct PoincareSweep {
    int cases = 0;
    int failures = 0;
    int unresolved = 0;
    double min_margin = 0.0;  ///< min (rhs - lhs) / max(rhs, tiny)
};

/// Random sums of Gaussian bumps on random intervals, each checked for every l.
PoincareSweep poincare_sweep(int functions, const std::vector<double>& exponents, std::uint64_t seed);

enum class ConvergenceReference {
    barpsi,      ///< error against the exact flat-wall solution barpsi
    richardson,  ///< differences between successive levels on shared nodes
};

struct ConvergenceStudy {
    std::vector<int> nx;
    std::vector<double> errors;
    std::vector<double> orders;  ///< log2(e_k / e_{k+1})
    bool monotone = false;       ///< errors strictly decreasing; orders are only meaningful when true
    double observed_order = 0.0; ///< last order
};

/// Solves at nx * 2^k, ny * 2^k for k < levels (levels >= 3 in the barpsi mode, >= 4 in
/// the Richardson mode so that three differences are available).
ConvergenceStudy grid_convergence(const SetupTemplate& tmpl, double rho0, int levels, ConvergenceReference ref);

}  // namespace subsonic

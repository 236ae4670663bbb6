#pragma once

#include <vector>

#include "subsonic/gas.hpp"
#include "subsonic/upstream.hpp"

namespace subsonic {

/// Downstream state over a flat wall at height J matched to the upstream by
/// Bernoulli's law and mass conservation streamline by streamline.
struct FarfieldTriple {
    double rho0 = 0.0;
    double rho1 = 0.0;
    double J = 0.0;
    double L = 0.0;
    std::vector<double> s;       ///< upstream heights (profile grid on [0, L])
    std::vector<double> chi;     ///< chi(s), increasing from J to L
    std::vector<double> x2;      ///< uniform grid on [J, L]
    std::vector<double> u1;      ///< u1 on x2
    std::vector<double> psihat;  ///< rho1 int_J^x2 u1 on x2

    double chi_at(double s_value) const;
    double u1_at(double x2_value) const;
    /// Lower barrier; defined on [J, L].
    double psihat_at(double x2_value) const;
};

/// D(s; rho) = 2 (h(rho0) - h(rho)) + u0L(s)^2
double D_eval(const GasLaw& gas, const TruncatedProfile& tp, double rho, double s);

struct GValue {
    double G = 0.0;
    double dG = 0.0;     ///< closed-form derivative integral
    double dG_fd = 0.0;  ///< central difference of G
};

/// G(rho) = int_0^L rho0 u0L / (rho sqrt(D)), composite Simpson on the profile grid.
GValue G_eval(const GasLaw& gas, const TruncatedProfile& tp, double rho);

/// Lower end of the admissible bracket for rho1:
/// (gamma/2) rho^(gamma-1) + h(rho) = max u0L^2 / 2 + h(rho0).
double triple_density_floor(const GasLaw& gas, const TruncatedProfile& tp);

/// Bisection for rho1 with G(rho1) = L - J, then chi' = rho0 u0L / (rho1 sqrt(D)), chi(0) = J.
FarfieldTriple solve_triple(const GasLaw& gas, const TruncatedProfile& tp, double J);

struct TripleReport {
    double bernoulli_residual = 0.0;  ///< max |u0L^2/2 + h(rho0) - u1(chi)^2/2 - h(rho1)|
    double mass_residual = 0.0;       ///< max |rho0 int_0^s u0L - rho1 int_J^chi(s) u1|
    double min_shift = 0.0;           ///< min chi(s) - s
    double max_shift = 0.0;           ///< max chi(s) - s
    double min_gap = 0.0;             ///< min barpsi - psihat on [J, L]
    double max_gap = 0.0;             ///< max barpsi - psihat on [J, L]
    double gap_bound = 0.0;           ///< rho0 * J * max u0
    double max_u1_over_c = 0.0;       ///< max u1 / c(rho1)
    double min_momentum_margin = 0.0; ///< min rho1 u1(chi(s)) - rho0 u0L(s)
    double min_dG = 0.0;              ///< min G' over the admissible bracket
    bool shift_ok = false;
    bool gap_ok = false;
    bool subsonic_ok = false;
    bool monotone_ok = false;
};

TripleReport verify_triple(const GasLaw& gas, const FarfieldTriple& triple, const TruncatedProfile& tp);

}  // namespace subsonic

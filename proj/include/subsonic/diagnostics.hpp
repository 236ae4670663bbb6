#pragma once

#include <iosfwd>
#include <vector>

#include "subsonic/solver.hpp"

namespace subsonic {

struct PrimitiveFields {
    std::vector<double> rho, u, v, mach, omega;
    std::vector<double> B;  ///< (u^2 + v^2)/2 + h(rho)
};

/// rho = H(|grad psi|^2, psi), u = psi_x2 / rho, v = -psi_x1 / rho, omega = v_x1 - u_x2.
PrimitiveFields primitives(const ProblemSetup& setup, const FlowState& state);

struct BernoulliCheck {
    double max_error = 0.0;  ///< max |(u^2+v^2)/2 + h(rho) - h(rho0) - F(psi)^2/2|
    double scale = 0.0;      ///< max B
};
BernoulliCheck bernoulli_check(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields);

struct VorticityCheck {
    double max_abs = 0.0;
    double median_abs = 0.0;
    double scale = 0.0;  ///< max |omega_exact| over the sampled nodes
    double max_rel = 0.0;
    double median_rel = 0.0;
    int samples = 0;
};

/// Discrete omega against -rho u0L'(kappa(psi)) / rho0 on nodes at least `margin` cells
/// from every boundary.
VorticityCheck vorticity_check(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields,
                               int margin = 5);

struct Streamline {
    Point seed;
    std::vector<Point> points;
    std::vector<double> B;
    std::vector<double> omega_over_rho;
    bool truncated = false;  ///< stopped early at u <= 0 or leaving the domain
    double B_drift = 0.0;    ///< (max B - min B) / mean B
    double omega_drift = 0.0; ///< (max - min) of omega/rho, absolute
};

/// Adaptive RK4 (step doubling) for dx2/dx1 = v/u with bilinear interpolation in (xi, eta),
/// from the seed to x1 = x_end.
Streamline trace_streamline(const ProblemSetup& setup, const PrimitiveFields& fields, Point seed, double x_end,
                            double tol = 1e-9);

/// Seeds at heights k L / (count + 1) on x1 = c - N + 1, traced to x1 = c + N - 1.
std::vector<Streamline> trace_default_streamlines(const ProblemSetup& setup, const PrimitiveFields& fields,
                                                  int count = 10);

struct DecayRow {
    double distance = 0.0;  ///< |xi - c|
    double psi_dev = 0.0;   ///< sup |psi - barpsi|
    double grad_dev = 0.0;  ///< sup |grad(psi - barpsi)|
    double rho_dev = 0.0;   ///< sup |rho - rho0|
    double v_abs = 0.0;     ///< sup |v|
};
/// Slabs at N/4, N/2, 3N/4 from the wall centre, worst of the two sides.
std::vector<DecayRow> farfield_decay(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields);

struct EnergyNorms {
    double grad_dev_sq = 0.0;      ///< int |grad(psi_h - I barpsi)|^2
    double momentum_dev_sq = 0.0;  ///< int (psi_x2 - rho0 u0)^2 + psi_x1^2
};
EnergyNorms energy_norms(const ProblemSetup& setup, const FlowState& state);

struct PositivityReport {
    double min_interior_u = 0.0;
    double corner_speed_p1 = 0.0;  ///< NaN without corners
    double corner_speed_p2 = 0.0;
    int excluded_nodes = 0;
};
PositivityReport positivity_and_kutta(const ProblemSetup& setup, const PrimitiveFields& fields);

/// Nodal export table.
struct FieldTable {
    std::vector<double> x1, x2, psi, rho, u, v, mach, omega;
};
FieldTable field_table(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields);

/// Reflects across x2 = 0: rho, u, mach even; psi, v, omega odd. Rows below the wall come
/// first (x2 descending in magnitude), the wall row appears once.
FieldTable mirror_symmetric_body(const ProblemSetup& setup, const FieldTable& table);

/// CSV with header x1,x2,psi,rho,u,v,mach,omega and 12 significant digits.
void write_field_csv(std::ostream& out, const FieldTable& table);

}  // namespace subsonic

#pragma once

#include <string>
#include <vector>

#include "subsonic/solver.hpp"

namespace subsonic {

/// Everything of a ProblemSetup except the incoming density.
struct SetupTemplate {
    GasLaw gas{2.0};
    UpstreamProfile profile = UpstreamProfile::constant(1.0);
    WallShape wall = WallShape::flat();
    double L = 8.0;
    double N = 8.0;
    int nx = 128;
    int ny = 64;
    SolverOptions options;

    ProblemSetup build(double rho0) const;
    /// (sup u0^2 / gamma)^(1/(gamma-1))
    double rho0_star() const;
};

struct ScanEntry {
    double rho0 = 0.0;
    bool converged = false;
    double M_ratio = 0.0;
    double max_mach = 0.0;
    bool truncation_active = false;
    bool certified = false;  ///< converged and M_ratio < t0
    int iterations = 0;
    std::string status;
};

struct ScanResult {
    std::vector<ScanEntry> entries;  ///< rho0 descending
    double bracket_lo = 0.0;         ///< largest failing rho0 below the certified run (0 if none)
    double bracket_hi = 0.0;         ///< smallest certified rho0 (0 if none)
    double slope = 0.0;              ///< least-squares d log(max mach) / d log(rho0) over certified entries
    int slope_points = 0;
    bool monotone = true;            ///< M_ratio strictly decreasing in rho0 among certified entries
};

/// `count` geometrically spaced densities from hi down to lo.
std::vector<double> density_ladder(double hi, double lo, int count);

/// Solves each density independently on `threads` workers (0 = hardware concurrency).
ScanResult scan(const SetupTemplate& tmpl, const std::vector<double>& rho0s, int threads = 0);

/// Certified solve summary of one density (used by scan and bisection).
ScanEntry evaluate_density(const SetupTemplate& tmpl, double rho0);

struct CriticalResult {
    double lo = 0.0;  ///< fails the predicate
    double hi = 0.0;  ///< passes
    int solves = 0;
    std::vector<ScanEntry> trajectory;  ///< every bisection solve in order
    /// "M_ratio -> threshold" when the failing side converged with M_ratio >= t0,
    /// "Picard divergence" when it did not converge.
    std::string alternative;
    bool monotone = true;
    std::string message;
};

/// Bisection on the predicate converged && M_ratio < t0. Throws DomainError when the
/// endpoints do not straddle the threshold.
CriticalResult locate_critical(const SetupTemplate& tmpl, double lo, double hi, double tol);

struct LadderStep {
    double eps_n = 0.0;
    CriticalResult result;
};

/// Repeats locate_critical with thresholds from Cutoff::from_eps for each eps_n.
std::vector<LadderStep> critical_ladder(const SetupTemplate& tmpl, double lo, double hi, double tol,
                                        const std::vector<double>& eps_values = {0.25, 0.125, 0.0625});

}  // namespace subsonic

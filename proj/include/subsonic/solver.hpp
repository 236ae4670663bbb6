#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "subsonic/cutoff.hpp"
#include "subsonic/farfield.hpp"
#include "subsonic/gas.hpp"
#include "subsonic/geometry.hpp"
#include "subsonic/upstream.hpp"

namespace subsonic {

struct SolverOptions {
    double theta = 0.7;
    double picard_tol = 1e-9;  ///< relative to m_L
    double lin_tol = 1e-10;
    int max_iters = 500;
    int max_halvings = 3;
    Cutoff cutoff;
    /// false: plain Bernoulli inversion, throws on supersonic momentum.
    bool use_cutoff = true;
};

/// Per-cell data of the bilinear isoparametric discretization (2x2 Gauss).
struct ElementData {
    std::array<int, 4> node{};            ///< (i,j), (i+1,j), (i+1,j+1), (i,j+1)
    std::array<double, 16> stiffness{};   ///< int grad N_a . grad N_b
    std::array<double, 4> load{};         ///< int N_a
    std::array<double, 8> center_grad{};  ///< (dN_a/dx1, dN_a/dx2) at the cell centre
    std::array<double, 32> gauss_grad{};  ///< same at the four Gauss points
    std::array<double, 4> gauss_weight{}; ///< w_q det J_q
    std::array<double, 4> gauss_x2{};
    double area = 0.0;
};

struct LocalDensity {
    double rho = 0.0;
    double bernoulli = 0.0;   ///< B(psi) = h(rho0) + F(psi)^2 / 2
    double sigma_crit = 0.0;  ///< Sigma(B)
    double ratio = 0.0;       ///< |grad psi| / Sigma(B)
};

class ProblemSetup {
public:
    /// Throws ConfigError when rho0 <= rho0*, L <= J + 2 or the mesh is invalid.
    ProblemSetup(const GasLaw& gas, const UpstreamProfile& profile, double rho0, const WallShape& wall,
                 double L, double N, int nx, int ny, SolverOptions options = {});

    const GasLaw& gas() const { return gas_; }
    const TruncatedProfile& tprofile() const { return tprofile_; }
    const WallShape& wall() const { return wall_; }
    const Mesh& mesh() const { return mesh_; }
    const SolverOptions& options() const { return options_; }
    double rho0() const { return tprofile_.rho0(); }
    double mass_flux() const { return tprofile_.mass_flux(); }
    /// rho0* = (sup u0^2 / gamma)^(1/(gamma-1))
    double rho0_star() const { return rho0_star_; }

    /// Dirichlet data at boundary nodes (0 at interior nodes).
    const std::vector<double>& boundary_values() const { return boundary_; }
    const std::vector<ElementData>& elements() const { return elements_; }
    /// Interior node -> unknown number, -1 for boundary nodes.
    const std::vector<int>& unknown_of() const { return unknown_; }
    int unknowns() const { return n_unknowns_; }
    /// CSR slot in the pattern for element e, local pair (a, b); -1 when either is Dirichlet.
    const std::vector<int>& slots() const { return slots_; }
    const Eigen::SparseMatrix<double>& pattern() const { return pattern_; }

    /// Modified density: H(zeta(r)^2 Sigma(B)^2, B) with B = h(rho0) + F(psi)^2 / 2.
    LocalDensity density(double grad_sq, double psi) const;
    /// Same with the true gradient (no cutoff), clamped at the sonic value.
    LocalDensity physical_density(double grad_sq, double psi) const;
    double bernoulli(double psi) const;

private:
    void build_elements();

    GasLaw gas_;
    TruncatedProfile tprofile_;
    WallShape wall_;
    Mesh mesh_;
    SolverOptions options_;
    double rho0_star_ = 0.0;
    double h0_ = 0.0;
    std::vector<double> boundary_;
    std::vector<ElementData> elements_;
    std::vector<int> unknown_;
    int n_unknowns_ = 0;
    std::vector<int> slots_;
    Eigen::SparseMatrix<double> pattern_;
};

struct LinearSystem {
    Eigen::SparseMatrix<double> A;  ///< interior unknowns after Dirichlet elimination
    Eigen::VectorXd rhs;
};

struct LinearSolution {
    Eigen::VectorXd x;
    double residual = 0.0;  ///< |b - A x| / |b|
};

/// Frozen coefficients on each cell from psi_k.
struct FrozenCoefficients {
    std::vector<double> sigma;  ///< 1 / H
    std::vector<double> r;      ///< W(psi) H
    double max_ratio = 0.0;
};

FrozenCoefficients freeze(const ProblemSetup& setup, std::span<const double> psi);
LinearSystem assemble(const ProblemSetup& setup, const FrozenCoefficients& coeffs);
LinearSystem assemble(const ProblemSetup& setup, std::span<const double> psi);

/// Sparse Cholesky with iterative refinement; throws SolveError("linear solve failed")
/// when the relative residual stays above lin_tol.
LinearSolution linear_solve(const LinearSystem& system, double lin_tol = 1e-10);

/// Full nodal vector from interior unknowns plus Dirichlet data.
std::vector<double> expand(const ProblemSetup& setup, const Eigen::VectorXd& interior);

/// barpsi(x2) transplanted through the mesh map.
std::vector<double> initial_transplant(const ProblemSetup& setup);
/// eta * m_L inside, Dirichlet data on the boundary.
std::vector<double> initial_blend(const ProblemSetup& setup);

/// Nodal physical gradient: centred differences in (xi, eta), one-sided second order at
/// the edges, mapped through the shear metric.
void nodal_gradient(const Mesh& mesh, std::span<const double> psi, std::vector<double>& gx1,
                    std::vector<double>& gx2);

struct FlowState {
    std::vector<double> psi;
    std::vector<double> rho;  ///< density from the nodal gradient, clamped at the sonic value
    std::vector<double> gx1, gx2;
    int iterations = 0;
};

struct BoundViolations {
    double above_barpsi = 0.0;  ///< max (psi - barpsi)+
    double below_psihat = 0.0;  ///< max (psihat - psi)+ on x2 >= J
    double negative_psi = 0.0;  ///< max (-psi)+
};

struct SolveReport {
    bool converged = false;
    std::string status;
    int iterations = 0;
    double update_norm = 0.0;
    double linear_residual = 0.0;
    double theta = 0.0;
    double M_ratio = 0.0;
    bool truncation_active = false;
    double seconds = 0.0;
};

struct SolveResult {
    FlowState state;
    SolveReport report;
};

SolveResult picard_solve(const ProblemSetup& setup, std::vector<double> psi_init);
SolveResult picard_solve(const ProblemSetup& setup);

struct Certificate {
    double M_ratio = 0.0;
    bool truncation_active = false;
    int worst_node = -1;
};

/// max over nodes of |grad psi| / Sigma(B(psi)) against the cutoff threshold t0.
Certificate certify(const ProblemSetup& setup, const FlowState& state);

BoundViolations check_bounds(const ProblemSetup& setup, const FlowState& state, const FarfieldTriple& triple);

}  // namespace subsonic

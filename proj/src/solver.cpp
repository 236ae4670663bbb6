#include "subsonic/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "subsonic/error.hpp"

namespace subsonic {

namespace {

constexpr double kRefS[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kRefT[4] = {-1.0, -1.0, 1.0, 1.0};

struct ShapeEval {
    double dN[4][2];  // physical gradients
    double detJ;
};

ShapeEval shape_at(const double* x1, const double* x2, double s, double t) {
    double dNs[4], dNt[4];
    for (int a = 0; a < 4; ++a) {
        dNs[a] = 0.25 * kRefS[a] * (1.0 + t * kRefT[a]);
        dNt[a] = 0.25 * kRefT[a] * (1.0 + s * kRefS[a]);
    }
    double j11 = 0, j12 = 0, j21 = 0, j22 = 0;  // d(x1,x2)/d(s,t)
    for (int a = 0; a < 4; ++a) {
        j11 += dNs[a] * x1[a];
        j12 += dNt[a] * x1[a];
        j21 += dNs[a] * x2[a];
        j22 += dNt[a] * x2[a];
    }
    ShapeEval out{};
    out.detJ = j11 * j22 - j12 * j21;
    if (!(out.detJ > 0.0)) throw ConfigError("degenerate mesh cell");
    const double inv = 1.0 / out.detJ;
    for (int a = 0; a < 4; ++a) {
        out.dN[a][0] = inv * (j22 * dNs[a] - j21 * dNt[a]);
        out.dN[a][1] = inv * (-j12 * dNs[a] + j11 * dNt[a]);
    }
    return out;
}

class Cholesky {
public:
    void analyze(const Eigen::SparseMatrix<double>& A) {
        llt_.analyzePattern(A);
        analyzed_ = true;
    }

    LinearSolution solve(const LinearSystem& sys, double lin_tol) {
        LinearSolution out;
        const double bnorm = sys.rhs.norm();
        if (bnorm == 0.0) {
            out.x = Eigen::VectorXd::Zero(sys.rhs.size());
            return out;
        }
        if (!analyzed_) analyze(sys.A);
        llt_.factorize(sys.A);
        if (llt_.info() != Eigen::Success) throw SolveError("linear solve failed: matrix not positive definite");
        out.x = llt_.solve(sys.rhs);
        Eigen::VectorXd res = sys.rhs - sys.A * out.x;
        out.residual = res.norm() / bnorm;
        for (int k = 0; k < 3 && out.residual > lin_tol; ++k) {
            out.x += llt_.solve(res);
            res = sys.rhs - sys.A * out.x;
            out.residual = res.norm() / bnorm;
        }
        if (!std::isfinite(out.residual) || out.residual > lin_tol) throw SolveError("linear solve failed");
        return out;
    }

private:
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt_;
    bool analyzed_ = false;
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

ProblemSetup::ProblemSetup(const GasLaw& gas, const UpstreamProfile& profile, double rho0, const WallShape& wall,
                           double L, double N, int nx, int ny, SolverOptions options)
    : gas_(gas),
      tprofile_(profile, rho0, L),
      wall_(wall),
      mesh_(build_mesh(wall, L, N, nx, ny)),
      options_(options) {
    rho0_star_ = upstream_density_floor(gas_, profile.max_speed(profile.audit_extent()));
    if (!(rho0 > rho0_star_)) throw ConfigError("rho0 must exceed the upstream subsonic floor rho0*");
    if (!(L > wall.max_height() + 2.0)) throw ConfigError("L must exceed wall height + 2");
    if (!(options_.theta > 0.0 && options_.theta <= 1.0)) throw ConfigError("relaxation theta must be in (0, 1]");
    if (!(options_.picard_tol > 0.0) || !(options_.lin_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (options_.max_iters < 1) throw ConfigError("max_iters must be >= 1");
    h0_ = gas_.enthalpy(rho0);

    const Mesh& m = mesh_;
    boundary_.assign(m.nodes(), 0.0);
    unknown_.assign(m.nodes(), -1);
    for (int j = 0; j <= m.ny; ++j) {
        for (int i = 0; i <= m.nx; ++i) {
            const int k = m.index(i, j);
            if (m.on_boundary(i, j)) {
                if (j == 0)
                    boundary_[k] = 0.0;
                else if (j == m.ny)
                    boundary_[k] = mass_flux();
                else
                    boundary_[k] = tprofile_.barpsi(m.x2[k]);
            } else {
                unknown_[k] = n_unknowns_++;
            }
        }
    }
    build_elements();
}

void ProblemSetup::build_elements() {
    const Mesh& m = mesh_;
    const double g = 1.0 / std::sqrt(3.0);
    const double gs[4] = {-g, g, g, -g};
    const double gt[4] = {-g, -g, g, g};
    elements_.resize(m.cells());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m.cells()) * 16);
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            ElementData& e = elements_[j * m.nx + i];
            e.node = {m.index(i, j), m.index(i + 1, j), m.index(i + 1, j + 1), m.index(i, j + 1)};
            double x1[4], x2[4];
            for (int a = 0; a < 4; ++a) {
                x1[a] = m.x1[e.node[a]];
                x2[a] = m.x2[e.node[a]];
            }
            for (int q = 0; q < 4; ++q) {
                const ShapeEval se = shape_at(x1, x2, gs[q], gt[q]);
                e.gauss_weight[q] = se.detJ;
                e.area += se.detJ;
                double xq = 0.0;
                for (int a = 0; a < 4; ++a) {
                    const double Na = 0.25 * (1.0 + gs[q] * kRefS[a]) * (1.0 + gt[q] * kRefT[a]);
                    xq += Na * x2[a];
                    e.load[a] += se.detJ * Na;
                    e.gauss_grad[q * 8 + 2 * a] = se.dN[a][0];
                    e.gauss_grad[q * 8 + 2 * a + 1] = se.dN[a][1];
                    for (int b = 0; b < 4; ++b)
                        e.stiffness[a * 4 + b] += se.detJ * (se.dN[a][0] * se.dN[b][0] + se.dN[a][1] * se.dN[b][1]);
                }
                e.gauss_x2[q] = xq;
            }
            const ShapeEval c = shape_at(x1, x2, 0.0, 0.0);
            for (int a = 0; a < 4; ++a) {
                e.center_grad[2 * a] = c.dN[a][0];
                e.center_grad[2 * a + 1] = c.dN[a][1];
            }
            for (int a = 0; a < 4; ++a) {
                const int ua = unknown_[e.node[a]];
                if (ua < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    const int ub = unknown_[e.node[b]];
                    if (ub >= 0) trip.emplace_back(ua, ub, 1.0);
                }
            }
        }
    }
    pattern_.resize(n_unknowns_, n_unknowns_);
    pattern_.setFromTriplets(trip.begin(), trip.end());
    pattern_.makeCompressed();
    pattern_.coeffs().setZero();

    slots_.assign(static_cast<std::size_t>(m.cells()) * 16, -1);
    const int* outer = pattern_.outerIndexPtr();
    const int* inner = pattern_.innerIndexPtr();
    for (int c = 0; c < m.cells(); ++c) {
        const ElementData& e = elements_[c];
        for (int a = 0; a < 4; ++a) {
            const int ua = unknown_[e.node[a]];
            if (ua < 0) continue;
            for (int b = 0; b < 4; ++b) {
                const int ub = unknown_[e.node[b]];
                if (ub < 0) continue;
                // column-major: column ub holds row ua
                const int* lo = inner + outer[ub];
                const int* hi = inner + outer[ub + 1];
                const int* it = std::lower_bound(lo, hi, ua);
                slots_[static_cast<std::size_t>(c) * 16 + a * 4 + b] = static_cast<int>(it - inner);
            }
        }
    }
}

double ProblemSetup::bernoulli(double psi) const {
    const double F = tprofile_.F(psi);
    return h0_ + 0.5 * F * F;
}

LocalDensity ProblemSetup::density(double grad_sq, double psi) const {
    LocalDensity out;
    out.bernoulli = bernoulli(psi);
    const BernoulliEnvelope env = envelope(gas_, out.bernoulli);
    out.sigma_crit = env.sigma_crit;
    out.ratio = std::sqrt(grad_sq) / env.sigma_crit;
    double m_sq = grad_sq;
    if (options_.use_cutoff) {
        const double z = options_.cutoff(out.ratio);
        m_sq = z * z * env.sigma_crit * env.sigma_crit;
    }
    out.rho = invert_bernoulli(gas_, m_sq, env);
    return out;
}

LocalDensity ProblemSetup::physical_density(double grad_sq, double psi) const {
    LocalDensity out;
    out.bernoulli = bernoulli(psi);
    const BernoulliEnvelope env = envelope(gas_, out.bernoulli);
    out.sigma_crit = env.sigma_crit;
    out.ratio = std::sqrt(grad_sq) / env.sigma_crit;
    out.rho = invert_bernoulli(gas_, std::min(grad_sq, env.sigma_crit * env.sigma_crit), env);
    return out;
}

FrozenCoefficients freeze(const ProblemSetup& setup, std::span<const double> psi) {
    const auto& els = setup.elements();
    FrozenCoefficients out;
    out.sigma.resize(els.size());
    out.r.resize(els.size());
    for (std::size_t c = 0; c < els.size(); ++c) {
        const ElementData& e = els[c];
        double pc = 0.0, g1 = 0.0, g2 = 0.0;
        for (int a = 0; a < 4; ++a) {
            const double v = psi[e.node[a]];
            pc += 0.25 * v;
            g1 += v * e.center_grad[2 * a];
            g2 += v * e.center_grad[2 * a + 1];
        }
        if (!std::isfinite(pc) || !std::isfinite(g1) || !std::isfinite(g2)) throw SolveError("state corrupt");
        const LocalDensity d = setup.density(g1 * g1 + g2 * g2, pc);
        out.sigma[c] = 1.0 / d.rho;
        out.r[c] = setup.tprofile().memory_W(pc) * d.rho;
        out.max_ratio = std::max(out.max_ratio, d.ratio);
        if (!std::isfinite(out.sigma[c]) || !std::isfinite(out.r[c]) || !(out.sigma[c] > 0.0))
            throw SolveError("state corrupt");
    }
    return out;
}

LinearSystem assemble(const ProblemSetup& setup, const FrozenCoefficients& coeffs) {
    LinearSystem sys;
    sys.A = setup.pattern();
    sys.rhs = Eigen::VectorXd::Zero(setup.unknowns());
    double* val = sys.A.valuePtr();
    const auto& els = setup.elements();
    const auto& unk = setup.unknown_of();
    const auto& slots = setup.slots();
    const auto& g = setup.boundary_values();
    for (std::size_t c = 0; c < els.size(); ++c) {
        const ElementData& e = els[c];
        const double s = coeffs.sigma[c];
        for (int a = 0; a < 4; ++a) {
            const int ua = unk[e.node[a]];
            if (ua < 0) continue;
            sys.rhs[ua] -= coeffs.r[c] * e.load[a];
            for (int b = 0; b < 4; ++b) {
                const double k = s * e.stiffness[a * 4 + b];
                const int slot = slots[c * 16 + a * 4 + b];
                if (slot >= 0)
                    val[slot] += k;
                else
                    sys.rhs[ua] -= k * g[e.node[b]];
            }
        }
    }
    return sys;
}

LinearSystem assemble(const ProblemSetup& setup, std::span<const double> psi) {
    return assemble(setup, freeze(setup, psi));
}

LinearSolution linear_solve(const LinearSystem& system, double lin_tol) {
    Cholesky chol;
    return chol.solve(system, lin_tol);
}

std::vector<double> expand(const ProblemSetup& setup, const Eigen::VectorXd& interior) {
    std::vector<double> out = setup.boundary_values();
    const auto& unk = setup.unknown_of();
    for (std::size_t k = 0; k < out.size(); ++k)
        if (unk[k] >= 0) out[k] = interior[unk[k]];
    return out;
}

std::vector<double> initial_transplant(const ProblemSetup& setup) {
    const Mesh& m = setup.mesh();
    std::vector<double> psi(m.nodes());
    for (int k = 0; k < m.nodes(); ++k) psi[k] = setup.tprofile().barpsi(std::clamp(m.x2[k], 0.0, m.L));
    const auto& g = setup.boundary_values();
    const auto& unk = setup.unknown_of();
    for (int k = 0; k < m.nodes(); ++k)
        if (unk[k] < 0) psi[k] = g[k];
    return psi;
}

std::vector<double> initial_blend(const ProblemSetup& setup) {
    const Mesh& m = setup.mesh();
    std::vector<double> psi = setup.boundary_values();
    const auto& unk = setup.unknown_of();
    for (int j = 0; j <= m.ny; ++j)
        for (int i = 0; i <= m.nx; ++i) {
            const int k = m.index(i, j);
            if (unk[k] >= 0) psi[k] = m.eta(j) * setup.mass_flux();
        }
    return psi;
}

void nodal_gradient(const Mesh& m, std::span<const double> psi, std::vector<double>& gx1, std::vector<double>& gx2) {
    gx1.assign(m.nodes(), 0.0);
    gx2.assign(m.nodes(), 0.0);
    auto diff = [](double a, double b, double c, int side, double h) {
        // side 0 centred (a, c the outer values); -1 forward from a; +1 backward ending at c
        if (side == 0) return (c - a) / (2.0 * h);
        if (side < 0) return (-3.0 * a + 4.0 * b - c) / (2.0 * h);
        return (a - 4.0 * b + 3.0 * c) / (2.0 * h);
    };
    // Value on column i at physical height x2: cubic Lagrange in eta, which is affine in x2
    // along a column. Differencing across columns at fixed x2 keeps the wall curvature out of
    // the x1 derivative.
    auto at_height = [&](int i, double x2) {
        const double f = m.wall_f[i];
        const double p = (x2 - f) / (m.L - f) / m.deta;
        const int j0 = std::clamp(static_cast<int>(std::floor(p)) - 1, 0, m.ny - 3);
        const double t = p - j0;
        const double w0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
        const double w1 = t * (t - 2) * (t - 3) / 2.0;
        const double w2 = -t * (t - 1) * (t - 3) / 2.0;
        const double w3 = t * (t - 1) * (t - 2) / 6.0;
        return w0 * psi[m.index(i, j0)] + w1 * psi[m.index(i, j0 + 1)] + w2 * psi[m.index(i, j0 + 2)] +
               w3 * psi[m.index(i, j0 + 3)];
    };
    for (int j = 0; j <= m.ny; ++j) {
        for (int i = 0; i <= m.nx; ++i) {
            const int k = m.index(i, j);
            const double x2 = m.x2[k];
            double px1;
            if (i == 0)
                px1 = diff(psi[k], at_height(1, x2), at_height(2, x2), -1, m.dxi);
            else if (i == m.nx)
                px1 = diff(at_height(i - 2, x2), at_height(i - 1, x2), psi[k], 1, m.dxi);
            else if (i == 1 || i == m.nx - 1)
                px1 = diff(at_height(i - 1, x2), 0.0, at_height(i + 1, x2), 0, m.dxi);
            else
                px1 = (at_height(i - 2, x2) - 8.0 * at_height(i - 1, x2) + 8.0 * at_height(i + 1, x2) -
                       at_height(i + 2, x2)) / (12.0 * m.dxi);
            double peta;
            if (j == 0)
                peta = diff(psi[m.index(i, 0)], psi[m.index(i, 1)], psi[m.index(i, 2)], -1, m.deta);
            else if (j == m.ny)
                peta = diff(psi[m.index(i, j - 2)], psi[m.index(i, j - 1)], psi[m.index(i, j)], 1, m.deta);
            else if (j == 1 || j == m.ny - 1)
                peta = diff(psi[m.index(i, j - 1)], 0.0, psi[m.index(i, j + 1)], 0, m.deta);
            else
                peta = (psi[m.index(i, j - 2)] - 8.0 * psi[m.index(i, j - 1)] + 8.0 * psi[m.index(i, j + 1)] -
                        psi[m.index(i, j + 2)]) / (12.0 * m.deta);
            gx1[k] = px1;
            gx2[k] = peta * m.deta_dx2[k];
        }
    }
}

Certificate certify(const ProblemSetup& setup, const FlowState& state) {
    Certificate out;
    for (std::size_t k = 0; k < state.psi.size(); ++k) {
        const double g = std::hypot(state.gx1[k], state.gx2[k]);
        const double ratio = g / critical_momentum(setup.gas(), setup.bernoulli(state.psi[k]));
        if (ratio > out.M_ratio) {
            out.M_ratio = ratio;
            out.worst_node = static_cast<int>(k);
        }
    }
    out.truncation_active = out.M_ratio > setup.options().cutoff.t0();
    return out;
}

BoundViolations check_bounds(const ProblemSetup& setup, const FlowState& state, const FarfieldTriple& triple) {
    BoundViolations out;
    const Mesh& m = setup.mesh();
    for (int k = 0; k < m.nodes(); ++k) {
        const double x2 = std::clamp(m.x2[k], 0.0, m.L);
        const double p = state.psi[k];
        out.above_barpsi = std::max(out.above_barpsi, p - setup.tprofile().barpsi(x2));
        out.negative_psi = std::max(out.negative_psi, -p);
        if (x2 >= triple.J) out.below_psihat = std::max(out.below_psihat, triple.psihat_at(x2) - p);
    }
    return out;
}

SolveResult picard_solve(const ProblemSetup& setup) { return picard_solve(setup, initial_transplant(setup)); }

SolveResult picard_solve(const ProblemSetup& setup, std::vector<double> psi) {
    const auto t_start = std::chrono::steady_clock::now();
    const SolverOptions& opt = setup.options();
    SolveResult out;
    SolveReport& rep = out.report;
    const auto& g = setup.boundary_values();
    const auto& unk = setup.unknown_of();
    if (psi.size() != g.size()) throw ConfigError("initial state has the wrong size");
    for (std::size_t k = 0; k < psi.size(); ++k)
        if (unk[k] < 0) psi[k] = g[k];

    const double tol = opt.picard_tol * setup.mass_flux();
    double theta = opt.theta;
    int halvings = 0;
    double prev = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    Cholesky chol;
    rep.status = "iteration cap reached";
    try {
        for (int it = 1; it <= opt.max_iters; ++it) {
            const LinearSystem sys = assemble(setup, psi);
            const LinearSolution sol = chol.solve(sys, opt.lin_tol);
            rep.linear_residual = sol.residual;
            const std::vector<double> next = expand(setup, sol.x);
            const double diff = max_abs_diff(next, psi);
            if (theta * diff > prev && halvings < opt.max_halvings) {
                theta *= 0.5;
                ++halvings;
            }
            for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = (1.0 - theta) * psi[k] + theta * next[k];
            const double step = theta * diff;
            rep.iterations = it;
            rep.update_norm = step;
            prev = step;
            history.push_back(step);
            if (!std::isfinite(step)) throw SolveError("state corrupt");
            if (step <= tol) {
                rep.converged = true;
                rep.status = "converged";
                break;
            }
            if (it > 200 && step >= 0.9 * history[it - 101]) {
                rep.status = "stagnated";
                break;
            }
        }
    } catch (const SupersonicMomentumError&) {
        rep.status = "supersonic momentum without cutoff";
    } catch (const SolveError& e) {
        rep.status = e.what();
    }
    rep.theta = theta;

    FlowState& st = out.state;
    st.psi = std::move(psi);
    st.iterations = rep.iterations;
    nodal_gradient(setup.mesh(), st.psi, st.gx1, st.gx2);
    st.rho.resize(st.psi.size());
    for (std::size_t k = 0; k < st.psi.size(); ++k) {
        const double gsq = st.gx1[k] * st.gx1[k] + st.gx2[k] * st.gx2[k];
        st.rho[k] = std::isfinite(gsq) && std::isfinite(st.psi[k])
                        ? setup.physical_density(gsq, st.psi[k]).rho
                        : std::numeric_limits<double>::quiet_NaN();
    }
    const Certificate cert = certify(setup, st);
    rep.M_ratio = cert.M_ratio;
    rep.truncation_active = cert.truncation_active;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

}  // namespace subsonic

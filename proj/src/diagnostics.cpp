#include "subsonic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace subsonic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Bilinear lookup in computational coordinates.
struct Locator {
    const Mesh& m;
    const WallShape& wall;

    struct Cell {
        bool inside = false;
        int i = 0, j = 0;
        double s = 0.0, t = 0.0;
    };

    Cell locate(double x1, double x2) const {
        Cell c;
        const double x0 = m.x_center - m.N;
        if (x1 < x0 || x1 > m.x_center + m.N) return c;
        const double f = wall.f(x1);
        const double eta = (x2 - f) / (m.L - f);
        if (eta < 0.0 || eta > 1.0) return c;
        const double a = (x1 - x0) / m.dxi;
        const double b = eta / m.deta;
        c.i = std::clamp(static_cast<int>(std::floor(a)), 0, m.nx - 1);
        c.j = std::clamp(static_cast<int>(std::floor(b)), 0, m.ny - 1);
        c.s = a - c.i;
        c.t = b - c.j;
        c.inside = true;
        return c;
    }

    double value(const Cell& c, const std::vector<double>& field) const {
        const double f00 = field[m.index(c.i, c.j)];
        const double f10 = field[m.index(c.i + 1, c.j)];
        const double f01 = field[m.index(c.i, c.j + 1)];
        const double f11 = field[m.index(c.i + 1, c.j + 1)];
        return (1 - c.s) * (1 - c.t) * f00 + c.s * (1 - c.t) * f10 + (1 - c.s) * c.t * f01 + c.s * c.t * f11;
    }
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

PrimitiveFields primitives(const ProblemSetup& setup, const FlowState& state) {
    const Mesh& m = setup.mesh();
    const GasLaw& gas = setup.gas();
    const int n = m.nodes();
    PrimitiveFields f;
    f.rho.resize(n);
    f.u.resize(n);
    f.v.resize(n);
    f.mach.resize(n);
    f.B.resize(n);
    for (int k = 0; k < n; ++k) {
        const double gsq = state.gx1[k] * state.gx1[k] + state.gx2[k] * state.gx2[k];
        const double rho = setup.physical_density(gsq, state.psi[k]).rho;
        f.rho[k] = rho;
        f.u[k] = state.gx2[k] / rho;
        f.v[k] = -state.gx1[k] / rho;
        const double q = std::hypot(f.u[k], f.v[k]);
        f.mach[k] = gas.mach(q, rho);
        f.B[k] = 0.5 * q * q + gas.enthalpy(rho);
    }
    std::vector<double> ux1, ux2, vx1, vx2;
    nodal_gradient(m, f.u, ux1, ux2);
    nodal_gradient(m, f.v, vx1, vx2);
    f.omega.resize(n);
    for (int k = 0; k < n; ++k) f.omega[k] = vx1[k] - ux2[k];
    return f;
}

BernoulliCheck bernoulli_check(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields) {
    BernoulliCheck out;
    for (std::size_t k = 0; k < fields.B.size(); ++k) {
        out.max_error = std::max(out.max_error, std::abs(fields.B[k] - setup.bernoulli(state.psi[k])));
        out.scale = std::max(out.scale, std::abs(fields.B[k]));
    }
    return out;
}

VorticityCheck vorticity_check(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields,
                               int margin) {
    const Mesh& m = setup.mesh();
    const TruncatedProfile& tp = setup.tprofile();
    VorticityCheck out;
    std::vector<double> err;
    for (int j = margin; j <= m.ny - margin; ++j) {
        for (int i = margin; i <= m.nx - margin; ++i) {
            const int k = m.index(i, j);
            const double psi = std::clamp(state.psi[k], 0.0, tp.mass_flux());
            const double exact = -fields.rho[k] * tp.slope(tp.kappa(psi)) / tp.rho0();
            out.scale = std::max(out.scale, std::abs(exact));
            err.push_back(std::abs(fields.omega[k] - exact));
        }
    }
    out.samples = static_cast<int>(err.size());
    if (err.empty()) return out;
    out.max_abs = *std::max_element(err.begin(), err.end());
    out.median_abs = median(err);
    if (out.scale > 0.0) {
        out.max_rel = out.max_abs / out.scale;
        out.median_rel = out.median_abs / out.scale;
    }
    return out;
}

Streamline trace_streamline(const ProblemSetup& setup, const PrimitiveFields& fields, Point seed, double x_end,
                            double tol) {
    const Mesh& m = setup.mesh();
    const Locator loc{m, setup.wall()};
    Streamline sl;
    sl.seed = seed;

    bool stop = false;
    auto slope = [&](double x1, double x2) {
        const auto c = loc.locate(x1, x2);
        if (!c.inside) {
            stop = true;
            return 0.0;
        }
        const double u = loc.value(c, fields.u);
        if (!(u > 0.0)) {
            stop = true;
            return 0.0;
        }
        return loc.value(c, fields.v) / u;
    };
    auto rk4 = [&](double x1, double x2, double h) {
        const double k1 = slope(x1, x2);
        const double k2 = slope(x1 + 0.5 * h, x2 + 0.5 * h * k1);
        const double k3 = slope(x1 + 0.5 * h, x2 + 0.5 * h * k2);
        const double k4 = slope(x1 + h, x2 + h * k3);
        return x2 + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    };
    auto sample = [&](double x1, double x2) {
        const auto c = loc.locate(x1, x2);
        sl.points.push_back({x1, x2});
        sl.B.push_back(loc.value(c, fields.B));
        sl.omega_over_rho.push_back(loc.value(c, fields.omega) / loc.value(c, fields.rho));
    };

    double x1 = seed.x1, x2 = seed.x2;
    if (!loc.locate(x1, x2).inside) {
        sl.truncated = true;
        return sl;
    }
    sample(x1, x2);
    double h = 0.5 * m.dxi;
    while (x1 < x_end) {
        h = std::min({h, m.dxi, x_end - x1});
        const double full = rk4(x1, x2, h);
        const double mid = rk4(x1, x2, 0.5 * h);
        const double two = rk4(x1 + 0.5 * h, mid, 0.5 * h);
        if (stop) {
            sl.truncated = true;
            break;
        }
        const double err = std::abs(two - full) / 15.0;
        if (err <= tol || h < 1e-10) {
            x1 += h;
            x2 = two + (two - full) / 15.0;
            sample(x1, x2);
        }
        const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
        h *= std::clamp(grow, 0.2, 2.0);
    }
    if (!sl.B.empty()) {
        const auto [bmin, bmax] = std::minmax_element(sl.B.begin(), sl.B.end());
        double mean = 0.0;
        for (double b : sl.B) mean += b;
        mean /= static_cast<double>(sl.B.size());
        sl.B_drift = (*bmax - *bmin) / std::abs(mean);
        const auto [wmin, wmax] = std::minmax_element(sl.omega_over_rho.begin(), sl.omega_over_rho.end());
        sl.omega_drift = *wmax - *wmin;
    }
    return sl;
}

std::vector<Streamline> trace_default_streamlines(const ProblemSetup& setup, const PrimitiveFields& fields,
                                                  int count) {
    const Mesh& m = setup.mesh();
    const double x_start = m.x_center - m.N + 1.0;
    const double x_end = m.x_center + m.N - 1.0;
    std::vector<Streamline> out;
    for (int k = 1; k <= count; ++k) {
        const double x2 = setup.wall().f(x_start) + k * (m.L - setup.wall().f(x_start)) / (count + 1);
        out.push_back(trace_streamline(setup, fields, {x_start, x2}, x_end));
    }
    return out;
}

std::vector<DecayRow> farfield_decay(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields) {
    const Mesh& m = setup.mesh();
    const TruncatedProfile& tp = setup.tprofile();
    std::vector<DecayRow> rows;
    for (double frac : {0.25, 0.5, 0.75}) {
        DecayRow row;
        row.distance = frac * m.N;
        for (int side : {-1, 1}) {
            const int i = m.column_of(m.x_center + side * row.distance);
            for (int j = 0; j <= m.ny; ++j) {
                const int k = m.index(i, j);
                const double x2 = std::clamp(m.x2[k], 0.0, m.L);
                row.psi_dev = std::max(row.psi_dev, std::abs(state.psi[k] - tp.barpsi(x2)));
                const double g2 = state.gx2[k] - tp.rho0() * tp.eval(x2).u;
                row.grad_dev = std::max(row.grad_dev, std::hypot(state.gx1[k], g2));
                row.rho_dev = std::max(row.rho_dev, std::abs(fields.rho[k] - tp.rho0()));
                row.v_abs = std::max(row.v_abs, std::abs(fields.v[k]));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

EnergyNorms energy_norms(const ProblemSetup& setup, const FlowState& state) {
    const Mesh& m = setup.mesh();
    const TruncatedProfile& tp = setup.tprofile();
    std::vector<double> dev(m.nodes());
    for (int k = 0; k < m.nodes(); ++k) dev[k] = state.psi[k] - tp.barpsi(std::clamp(m.x2[k], 0.0, m.L));
    EnergyNorms out;
    for (const ElementData& e : setup.elements()) {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) out.grad_dev_sq += dev[e.node[a]] * e.stiffness[a * 4 + b] * dev[e.node[b]];
        for (int q = 0; q < 4; ++q) {
            double g1 = 0.0, g2 = 0.0;
            for (int a = 0; a < 4; ++a) {
                g1 += state.psi[e.node[a]] * e.gauss_grad[q * 8 + 2 * a];
                g2 += state.psi[e.node[a]] * e.gauss_grad[q * 8 + 2 * a + 1];
            }
            const double mu = g2 - tp.rho0() * tp.profile().eval(e.gauss_x2[q]).u;
            out.momentum_dev_sq += e.gauss_weight[q] * (mu * mu + g1 * g1);
        }
    }
    return out;
}

PositivityReport positivity_and_kutta(const ProblemSetup& setup, const PrimitiveFields& fields) {
    const Mesh& m = setup.mesh();
    const CornerCells cc = corner_cells(m, setup.wall());
    const auto corners = setup.wall().corners();
    PositivityReport out;
    out.min_interior_u = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m.nodes(); ++k) {
        bool near = false;
        for (const Point& p : corners)
            if (std::hypot(m.x1[k] - p.x1, m.x2[k] - p.x2) < cc.radius) near = true;
        if (near) {
            ++out.excluded_nodes;
            continue;
        }
        out.min_interior_u = std::min(out.min_interior_u, fields.u[k]);
    }
    auto speed = [&](int k) { return k < 0 ? kNaN : std::hypot(fields.u[k], fields.v[k]); };
    out.corner_speed_p1 = speed(cc.p1_node);
    out.corner_speed_p2 = speed(cc.p2_node);
    return out;
}

FieldTable field_table(const ProblemSetup& setup, const FlowState& state, const PrimitiveFields& fields) {
    const Mesh& m = setup.mesh();
    return {m.x1, m.x2, state.psi, fields.rho, fields.u, fields.v, fields.mach, fields.omega};
}

FieldTable mirror_symmetric_body(const ProblemSetup& setup, const FieldTable& t) {
    const Mesh& m = setup.mesh();
    FieldTable out;
    auto push = [&](int k, double sign) {
        out.x1.push_back(t.x1[k]);
        out.x2.push_back(sign * t.x2[k]);
        out.psi.push_back(sign * t.psi[k]);
        out.rho.push_back(t.rho[k]);
        out.u.push_back(t.u[k]);
        out.v.push_back(sign * t.v[k]);
        out.mach.push_back(t.mach[k]);
        out.omega.push_back(sign * t.omega[k]);
    };
    for (int j = m.ny; j >= 1; --j)
        for (int i = 0; i <= m.nx; ++i) push(m.index(i, j), -1.0);
    for (int j = 0; j <= m.ny; ++j)
        for (int i = 0; i <= m.nx; ++i) push(m.index(i, j), 1.0);
    return out;
}

void write_field_csv(std::ostream& out, const FieldTable& t) {
    out << "x1,x2,psi,rho,u,v,mach,omega\n";
    out << std::setprecision(12);
    for (std::size_t k = 0; k < t.x1.size(); ++k) {
        out << t.x1[k] << ',' << t.x2[k] << ',' << t.psi[k] << ',' << t.rho[k] << ',' << t.u[k] << ',' << t.v[k]
            << ',' << t.mach[k] << ',' << t.omega[k] << '\n';
    }
}

}  // namespace subsonic

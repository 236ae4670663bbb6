#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "subsonic/diagnostics.hpp"

using namespace subsonic;

namespace {

const GasLaw kGas(2.0);

struct Run {
    ProblemSetup setup;
    SolveResult result;
    PrimitiveFields fields;
};

Run run(const UpstreamProfile& profile, double rho0, const WallShape& wall, double L, double N, int nx, int ny,
        SolverOptions opt = {}) {
    ProblemSetup s(kGas, profile, rho0, wall, L, N, nx, ny, opt);
    SolveResult r = picard_solve(s);
    REQUIRE(r.report.converged);
    PrimitiveFields f = primitives(s, r.state);
    return {std::move(s), std::move(r), std::move(f)};
}

}  // namespace

TEST_CASE("flat wall, constant profile: uniform primitives and vanishing diagnostics") {
    const Run r = run(UpstreamProfile::constant(1.0), 20.0, WallShape::flat(), 4.0, 4.0, 32, 32);
    const double c0 = std::sqrt(2.0 * 20.0);
    for (std::size_t k = 0; k < r.fields.rho.size(); ++k) {
        CHECK(r.fields.rho[k] == doctest::Approx(20.0).epsilon(1e-9));
        CHECK(r.fields.u[k] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(r.fields.v[k]) <= 1e-9);
        CHECK(std::abs(r.fields.omega[k]) <= 1e-8);
        CHECK(r.fields.mach[k] == doctest::Approx(1.0 / c0).epsilon(1e-9));
    }
    const BernoulliCheck b = bernoulli_check(r.setup, r.result.state, r.fields);
    CHECK(b.max_error <= 1e-10 * b.scale);
    const EnergyNorms e = energy_norms(r.setup, r.result.state);
    CHECK(e.grad_dev_sq <= 1e-14);
    CHECK(e.momentum_dev_sq <= 1e-14);
    for (const DecayRow& d : farfield_decay(r.setup, r.result.state, r.fields)) {
        CHECK(d.psi_dev <= 1e-9);
        CHECK(d.v_abs <= 1e-9);
        CHECK(d.rho_dev <= 1e-8);
    }
    const PositivityReport p = positivity_and_kutta(r.setup, r.fields);
    CHECK(p.min_interior_u == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isnan(p.corner_speed_p1));
    CHECK(p.excluded_nodes == 0);

    const auto lines = trace_default_streamlines(r.setup, r.fields, 4);
    REQUIRE(lines.size() == 4);
    for (const Streamline& s : lines) {
        CHECK_FALSE(s.truncated);
        CHECK(s.points.back().x1 == doctest::Approx(r.setup.mesh().x_center + 3.0));
        for (const Point& q : s.points) CHECK(q.x2 == doctest::Approx(s.seed.x2).epsilon(1e-9));
        CHECK(s.B_drift <= 1e-10);
    }
    const VorticityCheck v = vorticity_check(r.setup, r.result.state, r.fields);
    CHECK(v.max_abs <= 1e-8);
}

TEST_CASE("flat wall, convex profile: u follows u0L and vorticity converges") {
    const UpstreamProfile prof = UpstreamProfile::convex_decay(1.0, 0.5, 2.0);
    double prev_u = 0.0, prev_v = 0.0, prev_med = 0.0;
    for (int n : {32, 64, 128}) {
        const Run r = run(prof, 20.0, WallShape::flat(), 4.0, 4.0, n, n);
        const Mesh& m = r.setup.mesh();
        double eu = 0.0, ev = 0.0;
        for (int k = 0; k < m.nodes(); ++k) {
            eu = std::max(eu, std::abs(r.fields.u[k] - r.setup.tprofile().eval(m.x2[k]).u));
            ev = std::max(ev, std::abs(r.fields.v[k]));
        }
        const VorticityCheck v = vorticity_check(r.setup, r.result.state, r.fields);
        CHECK(v.samples > 0);
        if (n > 32) {
            CHECK(eu < prev_u / 3.0);
            CHECK(ev < prev_v / 3.0);
            CHECK(v.median_rel < prev_med);
        }
        prev_u = eu;
        prev_v = ev;
        prev_med = v.median_rel;
        const BernoulliCheck b = bernoulli_check(r.setup, r.result.state, r.fields);
        CHECK(b.max_error <= 1e-8 * b.scale);
    }
}

TEST_CASE("symmetric bump, constant profile: v is odd about the bump centre") {
    const Run r = run(UpstreamProfile::constant(1.0), 10.0, WallShape::smooth_bump(0.25), 4.0, 4.0, 64, 32);
    const Mesh& m = r.setup.mesh();
    double odd = 0.0, vmax = 0.0;
    for (int j = 0; j <= m.ny; ++j)
        for (int i = 0; i <= m.nx; ++i) {
            odd = std::max(odd, std::abs(r.fields.v[m.index(i, j)] + r.fields.v[m.index(m.nx - i, j)]));
            vmax = std::max(vmax, std::abs(r.fields.v[m.index(i, j)]));
        }
    CHECK(vmax > 1e-3);
    CHECK(odd <= 1e-7 * vmax);
    const VorticityCheck v = vorticity_check(r.setup, r.result.state, r.fields);
    const double h = m.dxi;
    CHECK(v.max_abs <= 10.0 * h * h * std::max(1.0, vmax));
}

TEST_CASE("bump, convex profile: invariants") {
    SolverOptions opt;
    opt.cutoff = Cutoff::from_eps(1.0 / 16.0);
    const Run r = run(UpstreamProfile::convex_decay(1.0, 0.5, 2.0), 45.0, WallShape::smooth_bump(0.25), 8.0, 8.0, 128,
                      64, opt);
    const BernoulliCheck b = bernoulli_check(r.setup, r.result.state, r.fields);
    CHECK(b.max_error <= 1e-8 * b.scale);
    for (double mach : r.fields.mach) CHECK(mach < 1.0);
    const PositivityReport p = positivity_and_kutta(r.setup, r.fields);
    CHECK(p.min_interior_u > 0.0);
    const auto rows = farfield_decay(r.setup, r.result.state, r.fields);
    REQUIRE(rows.size() == 3);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].distance > rows[k - 1].distance);
        CHECK(rows[k].psi_dev < rows[k - 1].psi_dev);
        CHECK(rows[k].grad_dev < rows[k - 1].grad_dev);
        CHECK(rows[k].v_abs < rows[k - 1].v_abs);
    }
    CHECK(rows.back().v_abs <= 1e-2);
    for (const Streamline& s : trace_default_streamlines(r.setup, r.fields)) {
        CHECK_FALSE(s.truncated);
        CHECK(s.B_drift <= 1e-3);
    }
    const EnergyNorms e = energy_norms(r.setup, r.result.state);
    CHECK(std::isfinite(e.grad_dev_sq));
    CHECK(e.grad_dev_sq > 0.0);
    CHECK(e.momentum_dev_sq > 0.0);
    // density window
    const Mesh& m = r.setup.mesh();
    for (int k = 0; k < m.nodes(); ++k) {
        const double B = r.setup.bernoulli(r.result.state.psi[k]);
        CHECK(r.fields.rho[k] >= B / 3.0 - 1e-12);  // sonic density for gamma = 2
        CHECK(r.fields.rho[k] <= B / 2.0 + 1e-12);  // stagnation density
    }
}

TEST_CASE("corner bump: corner speeds are reported and small relative to the free stream") {
    const Run r = run(UpstreamProfile::constant(1.0), 10.0, WallShape::corner_bump(0.2), 4.0, 4.0, 64, 32);
    const PositivityReport p = positivity_and_kutta(r.setup, r.fields);
    CHECK(std::isfinite(p.corner_speed_p1));
    CHECK(std::isfinite(p.corner_speed_p2));
    CHECK(p.excluded_nodes > 0);
    CHECK(p.min_interior_u > 0.0);
}

TEST_CASE("mirror and CSV export") {
    const Run r = run(UpstreamProfile::constant(1.0), 10.0, WallShape::flat(), 4.0, 4.0, 16, 16);
    const FieldTable t = field_table(r.setup, r.result.state, r.fields);
    const FieldTable mt = mirror_symmetric_body(r.setup, t);
    const Mesh& m = r.setup.mesh();
    CHECK(mt.x1.size() == static_cast<std::size_t>((2 * m.ny + 1) * (m.nx + 1)));
    const double top = *std::max_element(mt.psi.begin(), mt.psi.end());
    const double bottom = *std::min_element(mt.psi.begin(), mt.psi.end());
    CHECK(top - bottom == doctest::Approx(2.0 * r.setup.mass_flux()));
    for (std::size_t k = 0; k < mt.x1.size(); ++k) {
        CHECK(mt.u[k] > 0.0);
        CHECK(std::abs(mt.v[k]) <= 1e-9);
    }
    std::ostringstream os;
    write_field_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x1,x2,psi,rho,u,v,mach,omega");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == m.nodes());
}

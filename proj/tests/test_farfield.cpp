#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "subsonic/error.hpp"
#include "subsonic/farfield.hpp"

using namespace subsonic;

namespace {
// gamma = 2, rho0 = 5, ubar = 1, L = 10: G(rho) = 50 / (rho sqrt(21 - 4 rho))
double G_closed(double rho) { return 50.0 / (rho * std::sqrt(21.0 - 4.0 * rho)); }
}  // namespace

TEST_CASE("D evaluation") {
    const GasLaw gas(2.0);
    const TruncatedProfile tp(UpstreamProfile::constant(1.0), 5.0, 10.0);
    CHECK(D_eval(gas, tp, 5.0, 3.0) == doctest::Approx(1.0));
    CHECK(D_eval(gas, tp, 4.0, 3.0) == doctest::Approx(5.0));
    CHECK(D_eval(gas, tp, 4.933, 3.0) == doctest::Approx(21.0 - 4.0 * 4.933));
}

TEST_CASE("G for the constant profile matches the closed form") {
    const GasLaw gas(2.0);
    const TruncatedProfile tp(UpstreamProfile::constant(1.0), 5.0, 10.0);
    CHECK(G_eval(gas, tp, 5.0).G == doctest::Approx(10.0));
    CHECK(G_eval(gas, tp, 3.5).G == doctest::Approx(50.0 / (3.5 * std::sqrt(7.0))));
    for (double rho : {3.0, 4.0, 4.5, 4.9}) {
        const GValue g = G_eval(gas, tp, rho);
        CHECK(g.G == doctest::Approx(G_closed(rho)).epsilon(1e-10));
        const double h = 1e-6;
        CHECK(g.dG == doctest::Approx((G_closed(rho + h) - G_closed(rho - h)) / (2 * h)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(G_eval(gas, tp, 5.3), DomainError);
}

TEST_CASE("constant-profile triple") {
    const GasLaw gas(2.0);
    const TruncatedProfile tp(UpstreamProfile::constant(1.0), 5.0, 10.0);
    const FarfieldTriple t = solve_triple(gas, tp, 1.0);
    const double rho1 = oracle::bisect([](double r) { return r * r * (21.0 - 4.0 * r) - 2500.0 / 81.0; }, 3.5, 5.0);
    CHECK(t.rho1 == doctest::Approx(rho1).epsilon(1e-9));
    CHECK(t.rho1 == doctest::Approx(4.933).epsilon(1e-3));
    const double u1 = std::sqrt(21.0 - 4.0 * rho1);
    CHECK(t.u1_at(5.0) == doctest::Approx(u1).epsilon(1e-8));
    CHECK(u1 == doctest::Approx(1.126).epsilon(1e-3));
    CHECK(t.rho1 * u1 * 9.0 == doctest::Approx(50.0).epsilon(1e-8));
    for (double s : {0.0, 2.5, 7.0, 10.0}) CHECK(t.chi_at(s) == doctest::Approx(1.0 + 0.9 * s).epsilon(1e-9));
    CHECK(t.psihat_at(10.0) == doctest::Approx(tp.mass_flux()).epsilon(1e-9));

    const TripleReport r = verify_triple(gas, t, tp);
    CHECK(r.bernoulli_residual <= 1e-8 * tp.mass_flux());
    CHECK(r.mass_residual <= 1e-8 * tp.mass_flux());
    CHECK(r.shift_ok);
    CHECK(r.gap_ok);
    CHECK(r.subsonic_ok);
    CHECK(r.monotone_ok);
    CHECK_THROWS_AS(t.psihat_at(0.5), DomainError);
}

TEST_CASE("convex triple properties") {
    const GasLaw gas(2.0);
    const TruncatedProfile tp(UpstreamProfile::convex_decay(1.0, 0.5, 2.0), 4.5, 8.0);
    const double J = 0.25;
    const FarfieldTriple t = solve_triple(gas, tp, J);
    CHECK(t.rho1 > 0.0);
    CHECK(t.rho1 < tp.rho0());
    CHECK(t.chi.front() == doctest::Approx(J));
    CHECK(t.chi.back() == doctest::Approx(tp.L()).epsilon(1e-9));
    for (std::size_t k = 0; k < t.s.size(); ++k) {
        CHECK(t.chi[k] - t.s[k] >= -1e-9);
        CHECK(t.chi[k] - t.s[k] <= J + 1e-9);
        if (k > 0) CHECK(t.chi[k] > t.chi[k - 1]);
    }
    const TripleReport r = verify_triple(gas, t, tp);
    CHECK(r.shift_ok);
    CHECK(r.gap_ok);
    CHECK(r.subsonic_ok);
    CHECK(r.monotone_ok);
    CHECK(r.min_momentum_margin > 0.0);
    CHECK(r.min_gap >= -1e-9);
    CHECK(r.max_gap <= r.gap_bound);
    CHECK(r.mass_residual <= 1e-6 * tp.mass_flux());
}

TEST_CASE("flat wall: triple is the upstream state") {
    const GasLaw gas(2.0);
    const TruncatedProfile tp(UpstreamProfile::convex_decay(1.0, 0.5, 2.0), 4.5, 8.0);
    const FarfieldTriple t = solve_triple(gas, tp, 0.0);
    CHECK(t.rho1 == doctest::Approx(tp.rho0()));
    CHECK(t.psihat_at(3.0) == doctest::Approx(tp.barpsi(3.0)).epsilon(1e-8));
}

TEST_CASE("no admissible triple") {
    // a tall wall in a short nozzle leaves no room for the downstream state to stay subsonic
    const GasLaw gas(2.0);
    const TruncatedProfile tp(UpstreamProfile::constant(1.0), 0.6, 3.0);
    CHECK_THROWS_AS(solve_triple(gas, tp, 2.5), SolveError);
}

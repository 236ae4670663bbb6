#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "subsonic/continuation.hpp"
#include "subsonic/error.hpp"

using namespace subsonic;

namespace {

SetupTemplate flat_template(double gamma) {
    SetupTemplate t;
    t.gas = GasLaw(gamma);
    t.profile = UpstreamProfile::constant(1.0);
    t.wall = WallShape::flat();
    t.L = 4.0;
    t.N = 4.0;
    t.nx = 16;
    t.ny = 16;
    return t;
}

}  // namespace

TEST_CASE("density ladder") {
    const auto d = density_ladder(100.0, 1.0, 3);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == doctest::Approx(100.0));
    CHECK(d[1] == doctest::Approx(10.0));
    CHECK(d[2] == doctest::Approx(1.0));
    CHECK_THROWS(density_ladder(1.0, 2.0, 3));
}

TEST_CASE("rho0* of the template") {
    SetupTemplate t = flat_template(2.0);
    CHECK(t.rho0_star() == doctest::Approx(0.5));
    t.profile = UpstreamProfile::convex_decay(1.0, 0.5, 2.0);
    CHECK(t.rho0_star() == doctest::Approx(1.125));
    t.gas = GasLaw(1.4);
    CHECK(t.rho0_star() == doctest::Approx(std::pow(2.25 / 1.4, 2.5)));
}

TEST_CASE("flat wall, constant profile: max mach closed form and scaling slope") {
    for (double gamma : {2.0, 1.4}) {
        const SetupTemplate t = flat_template(gamma);
        const double rc = oracle::flat_wall_threshold(gamma, 1.0, 0.5);
        const ScanResult r = scan(t, density_ladder(1000.0 * rc, 1.01 * rc, 5), 2);
        REQUIRE(r.entries.size() == 5);
        for (std::size_t k = 0; k < r.entries.size(); ++k) {
            const ScanEntry& e = r.entries[k];
            CHECK(e.converged);
            CHECK(e.certified);
            CHECK(e.max_mach == doctest::Approx(1.0 / std::sqrt(gamma * std::pow(e.rho0, gamma - 1.0))).epsilon(1e-8));
            if (k > 0) CHECK(e.rho0 < r.entries[k - 1].rho0);
        }
        CHECK(r.monotone);
        CHECK(r.slope_points == 5);
        CHECK(r.slope == doctest::Approx(-(gamma - 1.0) / 2.0).epsilon(1e-6));
    }
    // below the threshold the run is not certified but the state is still the exact uniform flow
    const ScanEntry e = evaluate_density(flat_template(2.0), 5.0);
    CHECK(e.converged);
    CHECK_FALSE(e.certified);
    CHECK(e.M_ratio == doctest::Approx(0.54).epsilon(0.01));
    CHECK(e.max_mach == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-8));
}

TEST_CASE("scan brackets the certification threshold") {
    const SetupTemplate t = flat_template(2.0);
    const double rc = oracle::flat_wall_threshold(2.0, 1.0, 0.5);
    const ScanResult r = scan(t, density_ladder(4.0 * rc, rc / 3.0, 7), 0);
    CHECK(r.bracket_hi > rc);
    CHECK(r.bracket_lo < rc);
    CHECK(r.bracket_lo > 0.0);
    for (const ScanEntry& e : r.entries) CHECK(e.certified == (e.rho0 > rc));
}

TEST_CASE("reproducibility") {
    const SetupTemplate t = flat_template(2.0);
    const ScanEntry a = evaluate_density(t, 12.0);
    const ScanEntry b = evaluate_density(t, 12.0);
    CHECK(a.M_ratio == b.M_ratio);
}

TEST_CASE("locate_critical reproduces the closed-form threshold") {
    const SetupTemplate t = flat_template(2.0);
    const double star = t.rho0_star();
    const double rc = oracle::flat_wall_threshold(2.0, 1.0, 0.5);
    const double tol = 1e-3 * star;
    const CriticalResult c = locate_critical(t, rc / 2.0, 2.0 * rc, tol);
    CHECK(c.hi - c.lo <= tol);
    CHECK(c.lo <= rc + 1e-12);
    CHECK(c.hi >= rc - 1e-12);
    CHECK(c.solves <= 20);
    CHECK(c.monotone);
    CHECK(c.alternative == "M_ratio -> threshold");
    REQUIRE_FALSE(c.trajectory.empty());
    double hi_ratio = 0.0;
    for (const ScanEntry& e : c.trajectory)
        if (e.rho0 == c.hi) hi_ratio = e.M_ratio;
    CHECK(hi_ratio == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(c.hi - rc) / rc <= 1e-3);
}

TEST_CASE("locate_critical rejects a bracket that does not straddle") {
    const SetupTemplate t = flat_template(2.0);
    const double rc = oracle::flat_wall_threshold(2.0, 1.0, 0.5);
    CHECK_THROWS_AS(locate_critical(t, 2.0 * rc, 4.0 * rc, 1e-3), DomainError);
    CHECK_THROWS_AS(locate_critical(t, 0.6, 0.9 * rc, 1e-3), DomainError);
}

TEST_CASE("eps ladder moves the threshold toward criticality") {
    const SetupTemplate t = flat_template(2.0);
    const double star = t.rho0_star();
    const auto steps = critical_ladder(t, 1.01 * star, 20.0 * star, 1e-3 * star);
    REQUIRE(steps.size() == 3);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const double eps = steps[k].eps_n;
        const double rc = oracle::flat_wall_threshold(2.0, 1.0, 1.0 - 2.0 * eps);
        CHECK(std::abs(steps[k].result.hi - rc) <= 1e-3 * star + 1e-12);
        if (k > 0) CHECK(steps[k].result.hi < steps[k - 1].result.hi);
    }
}

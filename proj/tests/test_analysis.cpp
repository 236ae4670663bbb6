#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "subsonic/analysis.hpp"
#include "subsonic/error.hpp"

using namespace subsonic;

TEST_CASE("Poincare: g = 1 on the half line, l = 3") {
    const PoincareResult r = poincare_check({0.0, INFINITY, 3.0, [](double) { return 1.0; }, [](double) { return 0.0; }});
    CHECK(r.lhs == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.holds);
    CHECK(r.resolved);
}

TEST_CASE("Poincare: g = 0") {
    const PoincareResult r = poincare_check({0.0, INFINITY, 3.0, [](double) { return 0.0; }, [](double) { return 0.0; }});
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
    CHECK(r.holds);
}

TEST_CASE("Poincare: g = s exp(-s), l = 4") {
    auto g = [](double s) { return s * std::exp(-s); };
    auto dg = [](double s) { return (1.0 - s) * std::exp(-s); };
    const PoincareResult r = poincare_check({0.0, INFINITY, 4.0, g, dg});
    auto w = [&](double s) { return g(s) * g(s) / std::pow(1 + s, 4.0); };
    double lhs = 0.0;
    const double cuts[] = {0.0, 1.0, 4.0, 12.0, 30.0, 80.0};
    for (int k = 0; k < 5; ++k) lhs += oracle::adaptive_simpson(w, cuts[k], cuts[k + 1], 1e-15);
    CHECK(r.rhs == doctest::Approx(1.0 / 9.0).epsilon(1e-8));
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-7));
    CHECK(r.holds);
    CHECK(r.resolved);
}

TEST_CASE("Poincare: finite interval") {
    auto g = [](double s) { return s * s; };
    auto dg = [](double s) { return 2.0 * s; };
    const double l = 2.5;
    const PoincareResult r = poincare_check({1.0, 3.0, l, g, dg});
    const double lhs = oracle::adaptive_simpson([&](double s) { return s * s * s * s / std::pow(1 + s, l); }, 1.0, 3.0, 1e-14);
    const double rhs = 2.0 / (l - 1) + 4.0 / ((l - 1) * (l - 1)) * (4.0 * (27.0 - 1.0) / 3.0);
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(r.tail == 0.0);
    CHECK(r.holds);
}

TEST_CASE("Poincare: slowly decaying g keeps a tail bound") {
    auto g = [](double s) { return 1.0 / (1.0 + s); };
    auto dg = [](double s) { return -1.0 / ((1.0 + s) * (1.0 + s)); };
    const PoincareResult r = poincare_check({0.0, INFINITY, 2.5, g, dg});
    // int (1+s)^(-4.5) = 1/3.5 on the half line
    CHECK(r.lhs == doctest::Approx(1.0 / 3.5).epsilon(1e-6));
    CHECK(r.lhs >= 1.0 / 3.5 - 1e-12);
    CHECK(r.tail > 0.0);
    CHECK(r.holds);
}

TEST_CASE("Poincare: l <= 2 is rejected") {
    CHECK_THROWS_AS(poincare_check({0.0, 1.0, 2.0, [](double) { return 1.0; }, [](double) { return 0.0; }}), DomainError);
}

TEST_CASE("Poincare randomized sweep") {
    const PoincareSweep s = poincare_sweep(100, {2.5, 3.0, 4.0, 6.0}, 12345);
    CHECK(s.cases == 400);
    CHECK(s.failures == 0);
    CHECK(s.unresolved == 0);
    CHECK(s.min_margin > 0.0);
    const PoincareSweep again = poincare_sweep(100, {2.5, 3.0, 4.0, 6.0}, 12345);
    CHECK(again.min_margin == s.min_margin);
}

namespace {
SetupTemplate flat(UpstreamProfile p) {
    SetupTemplate t;
    t.profile = std::move(p);
    t.L = 4.0;
    t.N = 4.0;
    t.nx = 16;
    t.ny = 16;
    return t;
}
}  // namespace

TEST_CASE("grid convergence: flat wall, convex profile") {
    const ConvergenceStudy c = grid_convergence(flat(UpstreamProfile::convex_decay(1.0, 0.5, 2.0)), 20.0, 4,
                                                ConvergenceReference::barpsi);
    REQUIRE(c.errors.size() == 4);
    CHECK(c.nx.back() == 128);
    CHECK(c.monotone);
    CHECK(c.observed_order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("grid convergence: flat wall, constant profile is exact") {
    const ConvergenceStudy c =
        grid_convergence(flat(UpstreamProfile::constant(1.0)), 20.0, 3, ConvergenceReference::barpsi);
    for (double e : c.errors) CHECK(e <= 1e-9 * 80.0);
}

TEST_CASE("grid convergence: smooth bump, Richardson differences") {
    SetupTemplate t = flat(UpstreamProfile::convex_decay(1.0, 0.5, 2.0));
    t.wall = WallShape::smooth_bump(0.25);
    t.nx = 32;
    const ConvergenceStudy c = grid_convergence(t, 45.0, 4, ConvergenceReference::richardson);
    REQUIRE(c.errors.size() == 3);
    MESSAGE("bump orders " << c.orders[0] << " " << c.orders[1]);
    CHECK(c.monotone);
    CHECK(c.observed_order > 1.0);
    CHECK(c.observed_order < 2.5);
}

TEST_CASE("grid convergence preconditions") {
    CHECK_THROWS_AS(grid_convergence(flat(UpstreamProfile::constant(1.0)), 20.0, 2, ConvergenceReference::barpsi),
                    ConfigError);
    CHECK_THROWS_AS(grid_convergence(flat(UpstreamProfile::constant(1.0)), 20.0, 3, ConvergenceReference::richardson),
                    ConfigError);
}

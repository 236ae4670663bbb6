#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "subsonic/config.hpp"
#include "subsonic/error.hpp"

using namespace subsonic;

namespace {
RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}
}  // namespace

TEST_CASE("defaults describe the standard bump case") {
    const RunConfig c = parse("");
    CHECK(c.gamma == 2.0);
    CHECK(c.profile_kind == "convex_decay");
    CHECK(c.wall_kind == "smooth_bump");
    CHECK(c.wall_height == 0.25);
    CHECK(c.nx == 512);
    CHECK(c.ny == 256);
    const SetupTemplate t = c.setup_template();
    CHECK(t.rho0_star() == doctest::Approx(1.125));
    CHECK(c.run_density() == doctest::Approx(45.0));
    CHECK(c.solver_options().cutoff.t0() == doctest::Approx(0.5));
}

TEST_CASE("parsing values, comments and whitespace") {
    const RunConfig c = parse(R"(# flat wall
gas.gamma = 1.4
profile.kind = constant   # uniform stream
profile.ubar=2
wall.kind = flat
domain.L = 5
domain.nx = 32
domain.ny = 16
rho0 = 30
solver.eps_n = 0.125
)");
    CHECK(c.gamma == 1.4);
    CHECK(c.profile().eval(3.0).u == doctest::Approx(2.0));
    CHECK(c.wall().kind() == WallKind::flat);
    CHECK(c.L == 5.0);
    CHECK(c.run_density() == 30.0);
    CHECK(c.solver_options().cutoff.t0() == doctest::Approx(0.75));
}

TEST_CASE("multi bump supports") {
    const RunConfig c = parse("wall.kind = multi_bump\nwall.bumps = 0:1:0.2, 2:3:0.1\n");
    const WallShape w = c.wall();
    CHECK(w.kind() == WallKind::multi_bump);
    CHECK(w.f(2.5) == doctest::Approx(0.1));
    CHECK_THROWS_AS(parse("wall.kind = multi_bump\nwall.bumps = 0:1\n"), ConfigError);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(parse("no.such.key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("gas.gamma\n"), ConfigError);
    CHECK_THROWS_AS(parse("gas.gamma = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("gas.gamma = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse("domain.nx = 8\n"), ConfigError);
    CHECK_THROWS_AS(parse("domain.nx = 3.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("solver.eps_n = 0.1\nsolver.t0 = 0.5\nsolver.t1 = 0.7\nsolver.cap = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(parse("solver.t0 = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("solver.t0 = 0.8\nsolver.t1 = 0.7\nsolver.cap = 0.75\n"), ConfigError);
    CHECK_THROWS_AS(parse("profile.kind = wavy\n"), ConfigError);
    CHECK_THROWS_AS(parse("wall.kind = tabulated\n"), ConfigError);
    CHECK_THROWS_AS(parse("scan.hi = 1\nscan.lo = 2\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("apply_setting overrides") {
    RunConfig c = parse("");
    apply_setting(c, "domain.nx", "64");
    apply_setting(c, "rho0", "12.5");
    CHECK(c.nx == 64);
    CHECK(c.run_density() == 12.5);
    CHECK_THROWS_AS(apply_setting(c, "domain.bogus", "1"), ConfigError);
}

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "subsonic/continuation.hpp"

namespace subsonic {

/// Flat `key = value` run configuration; `#` starts a comment.
struct RunConfig {
    double gamma = 2.0;

    std::string profile_kind = "convex_decay";
    double profile_ubar = 1.0;
    double profile_a = 0.5;
    double profile_p = 2.0;
    double profile_eps = 0.1;
    double profile_k = 2.0;
    std::string profile_csv;

    std::string wall_kind = "smooth_bump";
    double wall_height = 0.25;
    std::string wall_csv;
    std::string wall_bumps;  ///< multi_bump supports "a:b:h,a:b:h"

    double L = 8.0;
    double N = 8.0;
    int nx = 512;
    int ny = 256;

    double theta = 0.7;
    double picard_tol = 1e-9;
    double lin_tol = 1e-10;
    int max_iters = 500;
    std::optional<double> t0, t1, cap, eps_n;

    std::optional<double> rho0;
    std::optional<double> scan_hi, scan_lo;
    int scan_steps = 8;

    std::string output_dir = ".";

    UpstreamProfile profile() const;
    WallShape wall() const;
    SolverOptions solver_options() const;
    SetupTemplate setup_template() const;
    /// Density for single runs: rho0 if set, else 40 rho0*.
    double run_density() const;
};

/// Throws ConfigError on unknown keys, malformed values or inconsistent settings.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Applies one `key = value` pair (also used for command-line overrides).
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Consistency checks: positivity, L > wall height, t0 < t1.
void validate(const RunConfig& cfg);

}  // namespace subsonic

#include "subsonic/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "subsonic/error.hpp"

namespace subsonic {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("bad number for " + key + ": '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("bad integer for " + key + ": '" + v + "'");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"gas.gamma", [](RunConfig& c, const auto& k, const auto& v) { c.gamma = to_double(k, v); }},
        {"profile.kind", [](RunConfig& c, const auto&, const auto& v) { c.profile_kind = v; }},
        {"profile.ubar", [](RunConfig& c, const auto& k, const auto& v) { c.profile_ubar = to_double(k, v); }},
        {"profile.a", [](RunConfig& c, const auto& k, const auto& v) { c.profile_a = to_double(k, v); }},
        {"profile.p", [](RunConfig& c, const auto& k, const auto& v) { c.profile_p = to_double(k, v); }},
        {"profile.eps", [](RunConfig& c, const auto& k, const auto& v) { c.profile_eps = to_double(k, v); }},
        {"profile.k", [](RunConfig& c, const auto& k, const auto& v) { c.profile_k = to_double(k, v); }},
        {"profile.csv_path", [](RunConfig& c, const auto&, const auto& v) { c.profile_csv = v; }},
        {"wall.kind", [](RunConfig& c, const auto&, const auto& v) { c.wall_kind = v; }},
        {"wall.height", [](RunConfig& c, const auto& k, const auto& v) { c.wall_height = to_double(k, v); }},
        {"wall.csv_path", [](RunConfig& c, const auto&, const auto& v) { c.wall_csv = v; }},
        {"wall.bumps", [](RunConfig& c, const auto&, const auto& v) { c.wall_bumps = v; }},
        {"domain.L", [](RunConfig& c, const auto& k, const auto& v) { c.L = to_double(k, v); }},
        {"domain.N", [](RunConfig& c, const auto& k, const auto& v) { c.N = to_double(k, v); }},
        {"domain.nx", [](RunConfig& c, const auto& k, const auto& v) { c.nx = to_int(k, v); }},
        {"domain.ny", [](RunConfig& c, const auto& k, const auto& v) { c.ny = to_int(k, v); }},
        {"solver.theta", [](RunConfig& c, const auto& k, const auto& v) { c.theta = to_double(k, v); }},
        {"solver.picard_tol", [](RunConfig& c, const auto& k, const auto& v) { c.picard_tol = to_double(k, v); }},
        {"solver.lin_tol", [](RunConfig& c, const auto& k, const auto& v) { c.lin_tol = to_double(k, v); }},
        {"solver.max_iters", [](RunConfig& c, const auto& k, const auto& v) { c.max_iters = to_int(k, v); }},
        {"solver.t0", [](RunConfig& c, const auto& k, const auto& v) { c.t0 = to_double(k, v); }},
        {"solver.t1", [](RunConfig& c, const auto& k, const auto& v) { c.t1 = to_double(k, v); }},
        {"solver.cap", [](RunConfig& c, const auto& k, const auto& v) { c.cap = to_double(k, v); }},
        {"solver.eps_n", [](RunConfig& c, const auto& k, const auto& v) { c.eps_n = to_double(k, v); }},
        {"rho0", [](RunConfig& c, const auto& k, const auto& v) { c.rho0 = to_double(k, v); }},
        {"scan.hi", [](RunConfig& c, const auto& k, const auto& v) { c.scan_hi = to_double(k, v); }},
        {"scan.lo", [](RunConfig& c, const auto& k, const auto& v) { c.scan_lo = to_double(k, v); }},
        {"scan.steps", [](RunConfig& c, const auto& k, const auto& v) { c.scan_steps = to_int(k, v); }},
        {"output.dir", [](RunConfig& c, const auto&, const auto& v) { c.output_dir = v; }},
    };
    return table;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key: " + key);
    it->second(cfg, key, value);
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        apply_setting(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config: " + path);
    return parse_config(in);
}

void validate(const RunConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
    };
    if (!(c.gamma > 1.0)) throw ConfigError("gas.gamma must exceed 1");
    positive(c.profile_ubar, "profile.ubar");
    positive(c.L, "domain.L");
    positive(c.N, "domain.N");
    positive(c.picard_tol, "solver.picard_tol");
    positive(c.lin_tol, "solver.lin_tol");
    if (c.nx < 16 || c.ny < 16) throw ConfigError("domain.nx and domain.ny must be >= 16");
    if (c.max_iters < 1) throw ConfigError("solver.max_iters must be >= 1");
    if (!(c.theta > 0.0 && c.theta <= 1.0)) throw ConfigError("solver.theta must be in (0, 1]");
    if (c.wall_height < 0.0) throw ConfigError("wall.height must be >= 0");
    if (!(c.L > c.wall_height)) throw ConfigError("domain.L must exceed wall.height");
    if (c.eps_n && (c.t0 || c.t1 || c.cap)) throw ConfigError("set either solver.eps_n or solver.t0/t1/cap");
    if ((c.t0 || c.t1 || c.cap) && !(c.t0 && c.t1 && c.cap))
        throw ConfigError("solver.t0, solver.t1 and solver.cap go together");
    if (c.t0 && !(*c.t0 < *c.t1)) throw ConfigError("solver.t0 must be below solver.t1");
    if (c.rho0) positive(*c.rho0, "rho0");
    if (c.scan_hi) positive(*c.scan_hi, "scan.hi");
    if (c.scan_lo) positive(*c.scan_lo, "scan.lo");
    if (c.scan_hi && c.scan_lo && !(*c.scan_hi > *c.scan_lo)) throw ConfigError("scan.hi must exceed scan.lo");
    if (c.scan_steps < 2) throw ConfigError("scan.steps must be >= 2");
    // constructing the pieces surfaces kind / parameter errors early
    (void)c.profile();
    (void)c.wall();
    (void)c.solver_options();
}

UpstreamProfile RunConfig::profile() const {
    if (profile_kind == "constant") return UpstreamProfile::constant(profile_ubar);
    if (profile_kind == "convex_decay") return UpstreamProfile::convex_decay(profile_ubar, profile_a, profile_p);
    if (profile_kind == "perturbation") return UpstreamProfile::perturbation(profile_ubar, profile_eps, profile_k);
    if (profile_kind == "tabulated") {
        if (profile_csv.empty()) throw ConfigError("profile.kind = tabulated needs profile.csv_path");
        return UpstreamProfile::from_csv(profile_csv);
    }
    throw ConfigError("unknown profile.kind: " + profile_kind);
}

WallShape RunConfig::wall() const {
    if (wall_kind == "flat") return WallShape::flat();
    if (wall_kind == "smooth_bump") return WallShape::smooth_bump(wall_height);
    if (wall_kind == "corner_bump") return WallShape::corner_bump(wall_height);
    if (wall_kind == "tabulated") {
        if (wall_csv.empty()) throw ConfigError("wall.kind = tabulated needs wall.csv_path");
        return WallShape::from_csv(wall_csv);
    }
    if (wall_kind == "multi_bump") {
        std::vector<BumpSupport> bumps;
        std::stringstream ss(wall_bumps);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            std::stringstream parts(item);
            std::string a, b, h;
            if (!std::getline(parts, a, ':') || !std::getline(parts, b, ':') || !std::getline(parts, h))
                throw ConfigError("wall.bumps entries are a:b:height");
            bumps.push_back({to_double("wall.bumps", trim(a)), to_double("wall.bumps", trim(b)),
                             to_double("wall.bumps", trim(h))});
        }
        return WallShape::multi_bump(std::move(bumps));
    }
    throw ConfigError("unknown wall.kind: " + wall_kind);
}

SolverOptions RunConfig::solver_options() const {
    SolverOptions o;
    o.theta = theta;
    o.picard_tol = picard_tol;
    o.lin_tol = lin_tol;
    o.max_iters = max_iters;
    if (eps_n)
        o.cutoff = Cutoff::from_eps(*eps_n);
    else if (t0)
        o.cutoff = Cutoff(*t0, *t1, *cap);
    return o;
}

SetupTemplate RunConfig::setup_template() const {
    SetupTemplate t;
    t.gas = GasLaw(gamma);
    t.profile = profile();
    t.wall = wall();
    t.L = L;
    t.N = N;
    t.nx = nx;
    t.ny = ny;
    t.options = solver_options();
    return t;
}

double RunConfig::run_density() const {
    if (rho0) return *rho0;
    return 40.0 * setup_template().rho0_star();
}

}  // namespace subsonic

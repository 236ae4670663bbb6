// Batch driver: solve, scan, critical, triple, verify, export.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "subsonic/analysis.hpp"
#include "subsonic/config.hpp"
#include "subsonic/diagnostics.hpp"
#include "subsonic/error.hpp"

namespace fs = std::filesystem;
using namespace subsonic;

namespace {

constexpr int kOk = 0;
constexpr int kUncertified = 2;
constexpr int kNoConvergence = 3;
constexpr int kConfigError = 4;

class Report {
public:
    template <typename T>
    void add(const std::string& key, const T& value) {
        std::ostringstream os;
        os << std::setprecision(12) << std::boolalpha << value;
        lines_.push_back(key + ": " + os.str());
    }

    void emit(const fs::path& file) const {
        for (const auto& l : lines_) std::cout << l << '\n';
        if (file.empty()) return;
        std::ofstream out(file);
        if (!out) throw ConfigError("cannot write " + file.string());
        for (const auto& l : lines_) out << l << '\n';
    }

private:
    std::vector<std::string> lines_;
};

fs::path output_dir(const RunConfig& cfg, const std::string& flag) {
    fs::path dir = flag.empty() ? fs::path(cfg.output_dir) : fs::path(flag);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    return dir;
}

void add_solve_report(Report& r, const ProblemSetup& setup, const SolveReport& rep) {
    r.add("rho0", setup.rho0());
    r.add("rho0_star", setup.rho0_star());
    r.add("mass_flux", setup.mass_flux());
    r.add("converged", rep.converged);
    r.add("status", rep.status);
    r.add("iterations", rep.iterations);
    r.add("update_norm", rep.update_norm);
    r.add("linear_residual", rep.linear_residual);
    r.add("theta", rep.theta);
    r.add("M_ratio", rep.M_ratio);
    r.add("t0", setup.options().cutoff.t0());
    r.add("truncation_active", rep.truncation_active);
    r.add("seconds", rep.seconds);
}

int exit_code(const SolveReport& rep) {
    if (!rep.converged) return kNoConvergence;
    return rep.truncation_active ? kUncertified : kOk;
}

int run_solve(const RunConfig& cfg, const fs::path& dir, bool mirror) {
    const ProblemSetup setup = cfg.setup_template().build(cfg.run_density());
    const SolveResult res = picard_solve(setup);
    const PrimitiveFields fields = primitives(setup, res.state);
    Report r;
    add_solve_report(r, setup, res.report);
    double max_mach = 0.0;
    for (double m : fields.mach) max_mach = std::max(max_mach, m);
    r.add("max_mach", max_mach);
    const PositivityReport pos = positivity_and_kutta(setup, fields);
    r.add("min_interior_u", pos.min_interior_u);
    if (!setup.wall().corners().empty()) {
        r.add("corner_speed_p1", pos.corner_speed_p1);
        r.add("corner_speed_p2", pos.corner_speed_p2);
    }
    const FarfieldTriple triple = solve_triple(setup.gas(), setup.tprofile(), setup.wall().max_height());
    const BoundViolations b = check_bounds(setup, res.state, triple);
    r.add("bound_above_barpsi", b.above_barpsi);
    r.add("bound_below_psihat", b.below_psihat);
    r.add("bound_negative_psi", b.negative_psi);
    const EnergyNorms e = energy_norms(setup, res.state);
    r.add("energy_grad_dev_sq", e.grad_dev_sq);
    r.add("energy_momentum_dev_sq", e.momentum_dev_sq);

    FieldTable table = field_table(setup, res.state, fields);
    std::string name = "field.csv";
    if (mirror) {
        table = mirror_symmetric_body(setup, table);
        name = "field_mirror.csv";
    }
    std::ofstream csv(dir / name);
    if (!csv) throw ConfigError("cannot write " + (dir / name).string());
    write_field_csv(csv, table);
    r.add("field_csv", (dir / name).string());
    r.emit(dir / (mirror ? "report_mirror.txt" : "report.txt"));
    return exit_code(res.report);
}

int run_scan(const RunConfig& cfg, const fs::path& dir, int threads) {
    const SetupTemplate tmpl = cfg.setup_template();
    const double star = tmpl.rho0_star();
    const double hi = cfg.scan_hi.value_or(100.0 * star);
    const double lo = cfg.scan_lo.value_or(2.0 * star);
    const ScanResult res = scan(tmpl, density_ladder(hi, lo, cfg.scan_steps), threads);
    std::ofstream csv(dir / "scan.csv");
    if (!csv) throw ConfigError("cannot write scan.csv");
    csv << "rho0,converged,M_ratio,max_mach,truncation_active\n" << std::setprecision(12);
    int certified = 0;
    for (const ScanEntry& e : res.entries) {
        csv << e.rho0 << ',' << e.converged << ',' << e.M_ratio << ',' << e.max_mach << ',' << e.truncation_active
            << '\n';
        certified += e.certified;
    }
    Report r;
    r.add("rho0_star", star);
    r.add("entries", res.entries.size());
    r.add("certified", certified);
    r.add("bracket_lo", res.bracket_lo);
    r.add("bracket_hi", res.bracket_hi);
    r.add("slope", res.slope);
    r.add("slope_points", res.slope_points);
    r.add("monotone", res.monotone);
    r.add("scan_csv", (dir / "scan.csv").string());
    r.emit(dir / "scan_report.txt");
    return certified > 0 ? kOk : kUncertified;
}

int run_critical(const RunConfig& cfg, const fs::path& dir) {
    const SetupTemplate tmpl = cfg.setup_template();
    const double star = tmpl.rho0_star();
    const double lo = cfg.scan_lo.value_or(1.01 * star);
    const double hi = cfg.scan_hi.value_or(100.0 * star);
    const double tol = 1e-3 * star;
    Report r;
    r.add("rho0_star", star);
    const CriticalResult c = locate_critical(tmpl, lo, hi, tol);
    r.add("rho_cr_lo", c.lo);
    r.add("rho_cr_hi", c.hi);
    r.add("solves", c.solves);
    r.add("alternative", c.alternative);
    r.add("monotone", c.monotone);
    if (!c.trajectory.empty()) {
        const auto it = std::find_if(c.trajectory.rbegin(), c.trajectory.rend(),
                                     [&](const ScanEntry& e) { return e.rho0 == c.hi; });
        if (it != c.trajectory.rend()) r.add("M_ratio_hi", it->M_ratio);
    }
    if (!cfg.eps_n && !cfg.t0) {
        for (double eps : {0.25, 0.125, 0.0625}) {
            SetupTemplate t = tmpl;
            t.options.cutoff = Cutoff::from_eps(eps);
            std::ostringstream key;
            key << "eps_" << eps;
            try {
                const CriticalResult s = locate_critical(t, lo, hi, tol);
                r.add(key.str() + "_lo", s.lo);
                r.add(key.str() + "_hi", s.hi);
                r.add(key.str() + "_alternative", s.alternative);
            } catch (const DomainError& ex) {
                r.add(key.str() + "_status", ex.what());
            }
        }
    }
    std::ofstream csv(dir / "critical.csv");
    csv << "rho0,converged,M_ratio,max_mach,truncation_active\n" << std::setprecision(12);
    for (const ScanEntry& e : c.trajectory)
        csv << e.rho0 << ',' << e.converged << ',' << e.M_ratio << ',' << e.max_mach << ',' << e.truncation_active
            << '\n';
    r.emit(dir / "critical_report.txt");
    return c.monotone ? kOk : kUncertified;
}

int run_triple(const RunConfig& cfg, const fs::path& dir) {
    const GasLaw gas(cfg.gamma);
    const double rho0 = cfg.run_density();
    const TruncatedProfile tp(cfg.profile(), rho0, cfg.L);
    const double J = cfg.wall().max_height();
    const FarfieldTriple t = solve_triple(gas, tp, J);
    const TripleReport v = verify_triple(gas, t, tp);
    Report r;
    r.add("rho0", rho0);
    r.add("J", J);
    r.add("rho1", t.rho1);
    r.add("bernoulli_residual", v.bernoulli_residual);
    r.add("mass_residual", v.mass_residual);
    r.add("shift_min", v.min_shift);
    r.add("shift_max", v.max_shift);
    r.add("gap_min", v.min_gap);
    r.add("gap_max", v.max_gap);
    r.add("gap_bound", v.gap_bound);
    r.add("max_u1_over_c", v.max_u1_over_c);
    r.add("shift_ok", v.shift_ok);
    r.add("gap_ok", v.gap_ok);
    r.add("subsonic_ok", v.subsonic_ok);
    r.add("monotone_ok", v.monotone_ok);
    std::ofstream csv(dir / "triple.csv");
    csv << "x2,u1,psihat\n" << std::setprecision(12);
    for (std::size_t k = 0; k < t.x2.size(); ++k) csv << t.x2[k] << ',' << t.u1[k] << ',' << t.psihat[k] << '\n';
    r.emit(dir / "triple_report.txt");
    return v.shift_ok && v.gap_ok && v.subsonic_ok && v.monotone_ok ? kOk : kUncertified;
}

int run_verify(const RunConfig& cfg, const fs::path& dir) {
    const ProblemSetup setup = cfg.setup_template().build(cfg.run_density());
    const SolveResult res = picard_solve(setup);
    Report r;
    add_solve_report(r, setup, res.report);
    bool green = res.report.converged && !res.report.truncation_active;
    auto check = [&](const std::string& name, bool ok) {
        r.add("check_" + name, ok ? "pass" : "FAIL");
        green = green && ok;
    };
    if (res.report.converged) {
        const PrimitiveFields f = primitives(setup, res.state);
        const BernoulliCheck bc = bernoulli_check(setup, res.state, f);
        r.add("bernoulli_error", bc.max_error);
        check("bernoulli", bc.max_error <= 1e-3 * bc.scale);

        const auto& tp = setup.tprofile();
        double wscale = 0.0;
        for (double x : tp.grid()) wscale = std::max(wscale, std::abs(tp.slope(x)) / tp.rho0());
        double b_drift = 0.0, w_drift = 0.0;
        bool truncated = false;
        for (const Streamline& s : trace_default_streamlines(setup, f)) {
            b_drift = std::max(b_drift, s.B_drift);
            w_drift = std::max(w_drift, s.omega_drift);
            truncated = truncated || s.truncated;
        }
        const double w_rel = wscale > 0.0 ? w_drift / wscale : w_drift;
        r.add("streamline_B_drift", b_drift);
        r.add("streamline_omega_drift", w_rel);
        check("streamlines_complete", !truncated);
        check("streamline_B", b_drift <= 1e-3);
        check("streamline_omega", w_rel <= 5e-3);

        const VorticityCheck vc = vorticity_check(setup, res.state, f);
        r.add("vorticity_median_rel", vc.median_rel);
        r.add("vorticity_max_rel", vc.max_rel);
        check("vorticity_median", vc.scale == 0.0 ? vc.median_abs < 1e-6 : vc.median_rel <= 0.05);

        double max_mach = 0.0;
        for (double m : f.mach) max_mach = std::max(max_mach, m);
        r.add("max_mach", max_mach);
        check("subsonic", max_mach < 1.0);
        const PositivityReport pos = positivity_and_kutta(setup, f);
        r.add("min_interior_u", pos.min_interior_u);
        check("positivity", pos.min_interior_u > 0.0);

        const FarfieldTriple triple = solve_triple(setup.gas(), tp, setup.wall().max_height());
        const BoundViolations b = check_bounds(setup, res.state, triple);
        const double btol = 1e-3 * setup.rho0();
        r.add("bound_above_barpsi", b.above_barpsi);
        r.add("bound_below_psihat", b.below_psihat);
        r.add("bound_negative_psi", b.negative_psi);
        check("bounds", b.above_barpsi <= btol && b.below_psihat <= btol && b.negative_psi <= btol);

        const auto decay = farfield_decay(setup, res.state, f);
        bool decreasing = true;
        for (std::size_t k = 0; k + 1 < decay.size(); ++k) {
            const DecayRow &a = decay[k], &c = decay[k + 1];
            if (setup.wall().max_height() > 0.0 &&
                !(c.psi_dev < a.psi_dev && c.grad_dev < a.grad_dev && c.rho_dev < a.rho_dev && c.v_abs < a.v_abs))
                decreasing = false;
        }
        for (const DecayRow& d : decay) {
            std::ostringstream key;
            key << "decay_" << d.distance;
            r.add(key.str() + "_psi", d.psi_dev);
            r.add(key.str() + "_v", d.v_abs);
        }
        check("farfield_decay", decreasing);
        const EnergyNorms e = energy_norms(setup, res.state);
        r.add("energy_grad_dev_sq", e.grad_dev_sq);
        r.add("energy_momentum_dev_sq", e.momentum_dev_sq);
        check("energy_finite", std::isfinite(e.grad_dev_sq) && std::isfinite(e.momentum_dev_sq));
    }

    const PoincareSweep ps = poincare_sweep(100, {2.5, 3.0, 4.0, 6.0}, 20261019);
    r.add("poincare_cases", ps.cases);
    r.add("poincare_min_margin", ps.min_margin);
    check("poincare", ps.failures == 0);
    r.add("all_green", green);
    r.emit(dir / "verify_report.txt");
    if (!res.report.converged) return kNoConvergence;
    return green ? kOk : kUncertified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady subsonic Euler flow past a wall bump (stream-function formulation)"};
    app.require_subcommand(1);
    std::string config_path, out_flag;
    int threads = 0;
    bool mirror = false;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_flag, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads for scans, 0 = auto")->check(CLI::NonNegativeNumber);
    app.fallthrough();
    auto* solve = app.add_subcommand("solve", "single density: field CSV and report");
    auto* scan_cmd = app.add_subcommand("scan", "density ladder with certification flags");
    auto* critical = app.add_subcommand("critical", "bisect for the critical incoming density");
    auto* triple = app.add_subcommand("triple", "far-field triple and lower barrier");
    auto* verify = app.add_subcommand("verify", "invariant suite");
    auto* exp = app.add_subcommand("export", "field export");
    exp->add_flag("--mirror", mirror, "reflect across the wall to the symmetric-body flow");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        const RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        const fs::path dir = output_dir(cfg, out_flag);
        if (*solve) return run_solve(cfg, dir, false);
        if (*scan_cmd) return run_scan(cfg, dir, threads);
        if (*critical) return run_critical(cfg, dir);
        if (*triple) return run_triple(cfg, dir);
        if (*verify) return run_verify(cfg, dir);
        if (*exp) return run_solve(cfg, dir, mirror);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUncertified;
    } catch (const SolveError& e) {
        std::cerr << "solve error: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNoConvergence;
    }
    return kOk;
}

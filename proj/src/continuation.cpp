#include "subsonic/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "subsonic/error.hpp"

namespace subsonic {

ProblemSetup SetupTemplate::build(double rho0) const {
    return ProblemSetup(gas, profile, rho0, wall, L, N, nx, ny, options);
}

double SetupTemplate::rho0_star() const {
    return upstream_density_floor(gas, profile.max_speed(profile.audit_extent()));
}

std::vector<double> density_ladder(double hi, double lo, int count) {
    if (!(hi > lo) || !(lo > 0.0) || count < 2) throw ConfigError("density ladder needs hi > lo > 0 and >= 2 steps");
    std::vector<double> out(count);
    const double r = std::log(lo / hi) / (count - 1);
    for (int k = 0; k < count; ++k) out[k] = hi * std::exp(r * k);
    out.back() = lo;
    return out;
}

ScanEntry evaluate_density(const SetupTemplate& tmpl, double rho0) {
    ScanEntry e;
    e.rho0 = rho0;
    const ProblemSetup setup = tmpl.build(rho0);
    const SolveResult res = picard_solve(setup);
    e.converged = res.report.converged;
    e.M_ratio = res.report.M_ratio;
    e.truncation_active = res.report.truncation_active;
    e.iterations = res.report.iterations;
    e.status = res.report.status;
    const FlowState& st = res.state;
    for (std::size_t k = 0; k < st.psi.size(); ++k) {
        const double speed = std::hypot(st.gx1[k], st.gx2[k]) / st.rho[k];
        e.max_mach = std::max(e.max_mach, setup.gas().mach(speed, st.rho[k]));
    }
    e.certified = e.converged && e.M_ratio < tmpl.options.cutoff.t0();
    return e;
}

ScanResult scan(const SetupTemplate& tmpl, const std::vector<double>& rho0s, int threads) {
    for (std::size_t k = 0; k < rho0s.size(); ++k) {
        if (!(rho0s[k] > 0.0)) throw ConfigError("scan densities must be positive");
        if (k > 0 && !(rho0s[k] < rho0s[k - 1])) throw ConfigError("scan densities must be strictly decreasing");
    }
    ScanResult out;
    out.entries.resize(rho0s.size());
    std::vector<std::string> errors(rho0s.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < rho0s.size(); k = next++) {
            try {
                out.entries[k] = evaluate_density(tmpl, rho0s[k]);
            } catch (const std::exception& ex) {
                out.entries[k].rho0 = rho0s[k];
                out.entries[k].status = ex.what();
            }
        }
    };
    unsigned n = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, rho0s.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }

    // bracket: walking down in rho0, the first loss of certification after a certified run
    for (std::size_t k = 0; k < out.entries.size(); ++k) {
        if (!out.entries[k].certified) continue;
        if (k + 1 < out.entries.size() && !out.entries[k + 1].certified) {
            out.bracket_hi = out.entries[k].rho0;
            out.bracket_lo = out.entries[k + 1].rho0;
            break;
        }
        out.bracket_hi = out.entries[k].rho0;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double prev_ratio = -1.0;
    for (const ScanEntry& e : out.entries) {
        if (!e.certified) continue;
        if (prev_ratio >= 0.0 && !(e.M_ratio > prev_ratio)) out.monotone = false;
        prev_ratio = e.M_ratio;
        const double x = std::log(e.rho0), y = std::log(e.max_mach);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++out.slope_points;
    }
    if (out.slope_points >= 2) {
        const double n_pts = out.slope_points;
        out.slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
    }
    return out;
}

CriticalResult locate_critical(const SetupTemplate& tmpl, double lo, double hi, double tol) {
    if (!(hi > lo) || !(lo > 0.0) || !(tol > 0.0)) throw ConfigError("critical search needs hi > lo > 0 and tol > 0");
    CriticalResult out;
    auto run = [&](double rho0) {
        ScanEntry e;
        try {
            e = evaluate_density(tmpl, rho0);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            e.rho0 = rho0;
            e.status = ex.what();
        }
        out.trajectory.push_back(e);
        ++out.solves;
        return e;
    };
    ScanEntry e_hi = run(hi);
    ScanEntry e_lo = run(lo);
    if (!e_hi.certified || e_lo.certified)
        throw DomainError("critical bracket must have a failing lower and a certified upper density");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        ScanEntry e = run(mid);
        if (e.certified) {
            if (e.M_ratio <= e_hi.M_ratio) out.monotone = false;
            hi = mid;
            e_hi = e;
        } else {
            if (e.converged && e_lo.converged && e.M_ratio >= e_lo.M_ratio) out.monotone = false;
            lo = mid;
            e_lo = e;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.alternative = e_lo.converged ? "M_ratio -> threshold" : "Picard divergence";
    if (!out.monotone) out.message = "M_ratio not monotone across the bracket; widen and rerun";
    return out;
}

std::vector<LadderStep> critical_ladder(const SetupTemplate& tmpl, double lo, double hi, double tol,
                                        const std::vector<double>& eps_values) {
    std::vector<LadderStep> out;
    for (double eps : eps_values) {
        SetupTemplate t = tmpl;
        t.options.cutoff = Cutoff::from_eps(eps);
        out.push_back({eps, locate_critical(t, lo, hi, tol)});
    }
    return out;
}

}  // namespace subsonic

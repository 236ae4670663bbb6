#include "subsonic/upstream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "subsonic/error.hpp"

namespace subsonic {

namespace {

/// Second derivatives of the natural cubic spline through (x, y).
std::vector<double> natural_spline_moments(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    // Thomas sweep on rows 1..n-2 (moments at the ends are zero).
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double lower = x[i] - x[i - 1];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m[i] = (rhs[i] - (i + 1 < n - 1 ? upper[i] * m[i + 1] : 0.0)) / diag[i];
        if (i == 1) break;
    }
    return m;
}

}  // namespace

UpstreamProfile UpstreamProfile::constant(double ubar) {
    if (!(ubar > 0.0)) throw ConfigError("profile ubar must be positive");
    UpstreamProfile p;
    p.kind_ = ProfileKind::constant;
    p.ubar_ = ubar;
    return p;
}

UpstreamProfile UpstreamProfile::convex_decay(double ubar, double a, double power) {
    if (!(ubar > 0.0)) throw ConfigError("profile ubar must be positive");
    if (!(a >= 0.0)) throw ConfigError("convex_decay amplitude must be >= 0");
    if (!(power >= 1.0)) throw ConfigError("convex_decay power must be >= 1");
    UpstreamProfile p;
    p.kind_ = ProfileKind::convex_decay;
    p.ubar_ = ubar;
    p.a_ = a;
    p.p_ = power;
    return p;
}

UpstreamProfile UpstreamProfile::perturbation(double ubar, double eps, double k) {
    if (!(ubar > 0.0)) throw ConfigError("profile ubar must be positive");
    if (!(k > 1.0)) throw ConfigError("perturbation decay exponent k must exceed 1");
    if (!(eps >= 0.0)) throw ConfigError("perturbation amplitude must be >= 0 (u0'(0) <= 0)");
    UpstreamProfile p;
    p.kind_ = ProfileKind::perturbation;
    p.ubar_ = ubar;
    p.eps_ = eps;
    p.k_ = k;
    // The scaling of phi makes the derivative bounds hold; audit them anyway.
    const auto issues = validate(p, Regime::perturbation, eps, k);
    if (!issues.empty()) throw ConfigError("perturbation profile violates its bounds: " + issues.front());
    return p;
}

UpstreamProfile UpstreamProfile::tabulated(std::vector<double> x2, std::vector<double> u0) {
    if (x2.size() != u0.size() || x2.size() < 4) throw ConfigError("tabulated profile needs >= 4 (x2,u0) pairs");
    if (x2.front() != 0.0) throw ConfigError("tabulated profile must start at x2 = 0");
    for (std::size_t i = 1; i < x2.size(); ++i) {
        if (!(x2[i] > x2[i - 1])) throw ConfigError("tabulated profile x2 samples must be strictly increasing");
    }
    UpstreamProfile p;
    p.kind_ = ProfileKind::tabulated;
    p.ubar_ = u0.back();
    p.m_ = natural_spline_moments(x2, u0);
    p.xs_ = std::move(x2);
    p.us_ = std::move(u0);
    return p;
}

UpstreamProfile UpstreamProfile::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("profile CSV is empty: " + path);
    std::vector<double> xs, us;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x = 0.0, u = 0.0;
        if (!(row >> x >> u)) throw ConfigError("malformed profile CSV row: " + line);
        xs.push_back(x);
        us.push_back(u);
    }
    return tabulated(std::move(xs), std::move(us));
}

ProfileSample UpstreamProfile::eval(double x2) const {
    if (!(x2 >= 0.0)) throw DomainError("profile evaluated at negative height");
    switch (kind_) {
        case ProfileKind::constant:
            return {ubar_, 0.0, 0.0};
        case ProfileKind::convex_decay: {
            const double b = 1.0 + x2;
            const double t = a_ * std::pow(b, -p_);
            return {ubar_ + t, -p_ * t / b, p_ * (p_ + 1.0) * t / (b * b)};
        }
        case ProfileKind::perturbation: {
            const double b = 1.0 + x2;
            const double t = eps_ * std::pow(b, -k_) / (k_ * (k_ + 1.0));
            return {ubar_ + t, -k_ * t / b, k_ * (k_ + 1.0) * t / (b * b)};
        }
        case ProfileKind::tabulated: {
            if (x2 >= xs_.back()) return {us_.back(), 0.0, 0.0};
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), x2);
            const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
            const double h = xs_[i + 1] - xs_[i];
            const double A = (xs_[i + 1] - x2) / h;
            const double B = (x2 - xs_[i]) / h;
            const double u = A * us_[i] + B * us_[i + 1] +
                             ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
            const double du = (us_[i + 1] - us_[i]) / h -
                              (3.0 * A * A - 1.0) / 6.0 * h * m_[i] + (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
            const double d2u = A * m_[i] + B * m_[i + 1];
            return {u, du, d2u};
        }
    }
    return {};
}

double UpstreamProfile::audit_extent() const {
    return kind_ == ProfileKind::tabulated ? xs_.back() : 100.0;
}

double UpstreamProfile::max_speed(double x_end) const {
    constexpr int n = 4096;
    double best = eval(0.0).u;
    for (int i = 1; i <= n; ++i) best = std::max(best, eval(x_end * i / n).u);
    return best;
}

Regime UpstreamProfile::declared_regime() const {
    switch (kind_) {
        case ProfileKind::constant:
        case ProfileKind::convex_decay:
            return Regime::convex;
        case ProfileKind::perturbation:
            return Regime::perturbation;
        case ProfileKind::tabulated:
            return Regime::basic;
    }
    return Regime::basic;
}

std::vector<std::string> validate(const UpstreamProfile& profile) {
    return validate(profile, profile.declared_regime(), profile.eps(), profile.decay());
}

std::vector<std::string> validate(const UpstreamProfile& profile, Regime regime, double eps, double k) {
    constexpr int n = 10000;
    const double extent = profile.audit_extent();
    std::vector<ProfileSample> s(n + 1);
    double max_d2 = 0.0, max_d1 = 0.0;
    for (int i = 0; i <= n; ++i) {
        s[i] = profile.eval(extent * i / n);
        max_d2 = std::max(max_d2, std::abs(s[i].d2u));
        max_d1 = std::max(max_d1, std::abs(s[i].du));
    }

    std::vector<std::string> issues;
    if (std::any_of(s.begin(), s.end(), [](const ProfileSample& p) { return !(p.u > 0.0); })) {
        issues.emplace_back("u0 positivity violation");
    }
    if (s.front().du > 1e-12) issues.emplace_back("u0'(0) sign violation");

    if (regime == Regime::convex) {
        const double tol = 1e-10 * (1.0 + max_d2);
        if (std::any_of(s.begin(), s.end(), [tol](const ProfileSample& p) { return p.d2u < -tol; })) {
            issues.emplace_back("u0'' sign violation");
        }
        if (std::abs(s.back().du) > 1e-2 * max_d1 + 1e-12) issues.emplace_back("u0' decay violation");
    }
    if (regime == Regime::perturbation) {
        const double e = std::abs(eps);
        for (int order = 1; order <= 2; ++order) {
            for (int i = 0; i <= n; ++i) {
                const double x = extent * i / n;
                const double bound = e / std::pow(1.0 + x, k + order) * (1.0 + 1e-12);
                const double d = order == 1 ? s[i].du : s[i].d2u;
                if (std::abs(d) > bound) {
                    issues.emplace_back("perturbation bound violation (i=" + std::to_string(order) + ")");
                    break;
                }
            }
        }
    }
    return issues;
}

// ---------------------------------------------------------------------------

TruncatedProfile::TruncatedProfile(const UpstreamProfile& profile, double rho0, double L, int intervals)
    : profile_(profile), rho0_(rho0), L_(L) {
    if (!(rho0 > 0.0)) throw DomainError("incoming density must be positive");
    if (!(L > 1.0)) throw ConfigError("nozzle height L must exceed 1");
    if (intervals < 8) throw ConfigError("flux table needs at least 8 intervals");

    const auto ramp = profile_.eval(L - 1.0);
    ramp_base_ = ramp.u;
    ramp_slope_ = ramp.du;

    const int n = intervals;
    h_ = L / n;
    x_.resize(n + 1);
    u_.resize(n + 1);
    cum_.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        x_[i] = (i == n) ? L : h_ * i;
        u_[i] = eval(x_[i]).u;
    }
    for (int i = 0; i < n; ++i) {
        const double mid = eval(0.5 * (x_[i] + x_[i + 1])).u;
        cum_[i + 1] = cum_[i] + (x_[i + 1] - x_[i]) / 6.0 * (u_[i] + 4.0 * mid + u_[i + 1]);
    }
    mass_flux_ = rho0_ * cum_.back();
    max_u_ = *std::max_element(u_.begin(), u_.end());
    min_u_ = *std::min_element(u_.begin(), u_.end());
    if (min_u_ < 0.5 * profile_.ubar()) {
        throw ConfigError("L too small: truncated profile dips below ubar/2");
    }

    const auto at0 = eval(0.0);
    F0_ = at0.u;
    Fp0_ = at0.du / (rho0_ * at0.u);
}

ProfileSample TruncatedProfile::eval(double x2) const {
    const double tol = 1e-12 * L_;
    if (x2 < -tol || x2 > L_ + tol) throw DomainError("truncated profile evaluated outside [0, L]");
    x2 = std::clamp(x2, 0.0, L_);
    if (x2 <= L_ - 1.0) return profile_.eval(x2);
    const double r = L_ - x2;
    return {ramp_base_ + 0.5 * ramp_slope_ * (1.0 - r * r), ramp_slope_ * r, -ramp_slope_};
}

double TruncatedProfile::flux(double x) const {
    x = std::clamp(x, 0.0, L_);
    const int n = static_cast<int>(x_.size()) - 1;
    const int i = std::min(static_cast<int>(x / h_), n - 1);
    const double dx = x - x_[i];
    if (dx <= 0.0) return cum_[i];
    const double mid = eval(x_[i] + 0.5 * dx).u;
    return cum_[i] + dx / 6.0 * (u_[i] + 4.0 * mid + eval(x).u);
}

double TruncatedProfile::barpsi(double x2) const {
    const double tol = 1e-12 * L_;
    if (x2 < -tol || x2 > L_ + tol) throw DomainError("barpsi evaluated outside [0, L]");
    return rho0_ * flux(x2);
}

double TruncatedProfile::kappa(double psi) const {
    const double tol = 1e-12 * mass_flux_;
    if (psi < -tol || psi > mass_flux_ + tol) throw RangeError("kappa: psi outside [0, m_L]");
    const double c = std::clamp(psi / rho0_, 0.0, cum_.back());
    auto it = std::upper_bound(cum_.begin(), cum_.end(), c);
    std::size_t i = (it == cum_.begin()) ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
    if (i + 1 >= cum_.size()) return L_;
    const double span = cum_[i + 1] - cum_[i];
    double k = x_[i] + (span > 0.0 ? (c - cum_[i]) / span : 0.0) * (x_[i + 1] - x_[i]);
    for (int it_newton = 0; it_newton < 4; ++it_newton) {
        const double r = flux(k) - c;
        if (std::abs(r) <= 1e-15 * cum_.back()) break;
        k = std::clamp(k - r / eval(k).u, x_[i], x_[i + 1]);
    }
    return k;
}

double TruncatedProfile::F(double psi) const {
    if (psi > mass_flux_) return eval(L_).u;
    if (psi >= 0.0) return eval(kappa(psi)).u;
    if (psi >= -1.0) return F0_ + 0.5 * Fp0_ * (psi + 0.5 * psi * psi);
    return F0_ - 0.25 * Fp0_;
}

double TruncatedProfile::F_prime(double psi) const {
    if (psi > mass_flux_) return 0.0;
    if (psi >= 0.0) {
        const auto s = eval(kappa(psi));
        return s.du / (rho0_ * s.u);
    }
    if (psi >= -1.0) return 0.5 * Fp0_ * (1.0 + psi);
    return 0.0;
}

double TruncatedProfile::memory_W(double psi) const {
    if (psi > mass_flux_ || psi < -1.0) return 0.0;
    if (psi >= 0.0) return eval(kappa(psi)).du / rho0_;
    return F(psi) * F_prime(psi);
}

double TruncatedProfile::convexity_surrogate(double psi) const {
    const auto s = eval(kappa(psi));
    return s.d2u / (rho0_ * rho0_ * s.u);
}

}  // namespace subsonic

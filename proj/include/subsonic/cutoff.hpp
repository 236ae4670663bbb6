#pragma once

namespace subsonic {

/// Smooth odd subsonic cutoff.
///
/// Identity on |s| <= t0, constant `cap` for s >= t1, and on (t0, t1) the quintic
/// Hermite blend matching value, slope and curvature at both ends (C^2).
class Cutoff {
public:
    /// Defaults (1/2, 3/4, 5/8).
    Cutoff();
    Cutoff(double t0, double t1, double cap);

    /// Thresholds (1 - 2 eps, 1 - eps, 1 - 3 eps / 2). eps = 1/4 reproduces the defaults.
    static Cutoff from_eps(double eps_n);

    double operator()(double s) const;
    double derivative(double s) const;

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    double cap() const { return cap_; }

private:
    double blend(double s) const;
    double blend_slope(double s) const;

    double t0_, t1_, cap_;
};

/// Free-function form of Cutoff{t0, t1, cap}(s).
double zeta(double s, double t0 = 0.5, double t1 = 0.75, double cap = 0.625);

}  // namespace subsonic

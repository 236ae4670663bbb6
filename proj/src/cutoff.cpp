#include "subsonic/cutoff.hpp"

#include <cmath>

#include "subsonic/error.hpp"

namespace subsonic {

Cutoff::Cutoff() : Cutoff(0.5, 0.75, 0.625) {}

Cutoff::Cutoff(double t0, double t1, double cap) : t0_(t0), t1_(t1), cap_(cap) {
    if (!(t0 > 0.0 && t0 < t1)) throw ConfigError("cutoff thresholds need 0 < t0 < t1");
    if (!(cap > t0 && cap < t1)) throw ConfigError("cutoff cap must lie in (t0, t1)");
    // The blend is monotone only for moderate (cap - t0)/(t1 - t0); audit it once.
    constexpr int samples = 400;
    for (int k = 0; k <= samples; ++k) {
        const double s = t0 + (t1 - t0) * k / samples;
        if (blend_slope(s) < -1e-12) throw ConfigError("cutoff blend is not monotone for these thresholds");
    }
}

Cutoff Cutoff::from_eps(double eps_n) {
    if (!(eps_n > 0.0 && eps_n <= 0.25)) throw ConfigError("eps_n must lie in (0, 1/4]");
    return Cutoff(1.0 - 2.0 * eps_n, 1.0 - eps_n, 1.0 - 1.5 * eps_n);
}

double Cutoff::blend(double s) const {
    const double d = t1_ - t0_;
    const double t = (s - t0_) / d;
    const double t3 = t * t * t;
    const double h5 = t3 * (10.0 - 15.0 * t + 6.0 * t * t);
    const double h1 = t - t3 * (6.0 - 8.0 * t + 3.0 * t * t);
    return t0_ + (cap_ - t0_) * h5 + d * h1;
}

double Cutoff::blend_slope(double s) const {
    const double d = t1_ - t0_;
    const double t = (s - t0_) / d;
    const double om = 1.0 - t;
    const double dh5 = 30.0 * t * t * om * om;
    const double dh1 = 1.0 - t * t * (18.0 - 32.0 * t + 15.0 * t * t);
    return (cap_ - t0_) / d * dh5 + dh1;
}

double Cutoff::operator()(double s) const {
    const double a = std::abs(s);
    double v;
    if (a <= t0_) v = a;
    else if (a >= t1_) v = cap_;
    else v = blend(a);
    return std::copysign(v, s);
}

double Cutoff::derivative(double s) const {
    const double a = std::abs(s);
    if (a <= t0_) return 1.0;
    if (a >= t1_) return 0.0;
    return blend_slope(a);
}

double zeta(double s, double t0, double t1, double cap) { return Cutoff(t0, t1, cap)(s); }

}  // namespace subsonic

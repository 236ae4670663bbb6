#pragma once

#include <span>
#include <vector>

namespace subsonic {

/// Piecewise-cubic monotone interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    /// Clamped to the end values outside the knot range.
    double operator()(double x) const;
    double derivative(double x) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_, y_, d_;
};

/// Linear interpolation on strictly increasing abscissae, clamped at the ends.
double interp_linear(std::span<const double> x, std::span<const double> y, double at);

}  // namespace subsonic

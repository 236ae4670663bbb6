#include "subsonic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "subsonic/error.hpp"
#include "subsonic/interp.hpp"

namespace subsonic {

namespace {

double bump_value(const BumpSupport& b, double x) {
    if (x <= b.a || x >= b.b) return 0.0;
    const double t = (2.0 * x - b.a - b.b) / (b.b - b.a);
    const double q = 1.0 - t * t;
    return b.height * std::exp(1.0 - 1.0 / q);
}

double bump_slope(const BumpSupport& b, double x) {
    if (x <= b.a || x >= b.b) return 0.0;
    const double w = b.b - b.a;
    const double t = (2.0 * x - b.a - b.b) / w;
    const double q = 1.0 - t * t;
    // d/dx exp(1 - 1/q) = exp(..) * (-2t/q^2) * 2/w
    return b.height * std::exp(1.0 - 1.0 / q) * (-2.0 * t / (q * q)) * (2.0 / w);
}

}  // namespace

WallShape WallShape::flat() {
    WallShape w;
    w.kind_ = WallKind::flat;
    w.finish();
    return w;
}

WallShape WallShape::smooth_bump(double height) {
    if (!(height >= 0.0) || !std::isfinite(height)) throw ConfigError("bump height must be >= 0");
    WallShape w;
    w.kind_ = WallKind::smooth_bump;
    w.bumps_.push_back({0.0, 1.0, height});
    w.finish();
    return w;
}

WallShape WallShape::corner_bump(double height) {
    if (!(height >= 0.0) || !std::isfinite(height)) throw ConfigError("bump height must be >= 0");
    WallShape w;
    w.kind_ = WallKind::corner_bump;
    w.bumps_.push_back({0.0, 1.0, height});
    w.finish();
    return w;
}

WallShape WallShape::multi_bump(std::vector<BumpSupport> bumps) {
    if (bumps.empty()) throw ConfigError("multi_bump needs at least one support");
    std::sort(bumps.begin(), bumps.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    for (std::size_t i = 0; i < bumps.size(); ++i) {
        if (!(bumps[i].b > bumps[i].a)) throw ConfigError("bump support must have a < b");
        if (!(bumps[i].height >= 0.0)) throw ConfigError("bump height must be >= 0");
        if (i > 0 && bumps[i].a < bumps[i - 1].b) throw ConfigError("bump supports must be disjoint");
    }
    WallShape w;
    w.kind_ = WallKind::multi_bump;
    w.bumps_ = std::move(bumps);
    w.finish();
    return w;
}

WallShape WallShape::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open wall CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("wall CSV is empty: " + path);
    WallShape w;
    w.kind_ = WallKind::tabulated;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x = 0.0, f = 0.0;
        if (!(row >> x >> f)) throw ConfigError("malformed wall CSV row: " + line);
        if (!(f >= 0.0)) throw ConfigError("wall CSV has negative height");
        if (!w.xs_.empty() && !(x > w.xs_.back())) throw ConfigError("wall CSV abscissae must increase");
        w.xs_.push_back(x);
        w.fs_.push_back(f);
    }
    if (w.xs_.size() < 2) throw ConfigError("wall CSV needs at least two rows");
    w.finish();
    return w;
}

void WallShape::finish() {
    switch (kind_) {
        case WallKind::flat:
            support_a_ = 0.0;
            support_b_ = 1.0;
            max_height_ = 0.0;
            break;
        case WallKind::smooth_bump:
        case WallKind::corner_bump:
            support_a_ = 0.0;
            support_b_ = 1.0;
            max_height_ = bumps_.front().height;
            break;
        case WallKind::multi_bump:
            support_a_ = bumps_.front().a;
            support_b_ = bumps_.back().b;
            max_height_ = 0.0;
            for (const auto& b : bumps_) max_height_ = std::max(max_height_, b.height);
            break;
        case WallKind::tabulated:
            support_a_ = xs_.front();
            support_b_ = xs_.back();
            max_height_ = *std::max_element(fs_.begin(), fs_.end());
            break;
    }
    center_ = 0.5 * (support_a_ + support_b_);
}

double WallShape::f(double x1) const {
    switch (kind_) {
        case WallKind::flat:
            return 0.0;
        case WallKind::smooth_bump:
        case WallKind::multi_bump: {
            double s = 0.0;
            for (const auto& b : bumps_) s += bump_value(b, x1);
            return s;
        }
        case WallKind::corner_bump:
            if (x1 <= 0.0 || x1 >= 1.0) return 0.0;
            return 4.0 * bumps_.front().height * x1 * (1.0 - x1);
        case WallKind::tabulated:
            if (x1 <= xs_.front() || x1 >= xs_.back()) return 0.0;
            return interp_linear(xs_, fs_, x1);
    }
    return 0.0;
}

double WallShape::slope(double x1) const {
    switch (kind_) {
        case WallKind::flat:
            return 0.0;
        case WallKind::smooth_bump:
        case WallKind::multi_bump: {
            double s = 0.0;
            for (const auto& b : bumps_) s += bump_slope(b, x1);
            return s;
        }
        case WallKind::corner_bump: {
            const double h = bumps_.front().height;
            if (x1 < 0.0 || x1 > 1.0) return 0.0;
            if (x1 == 0.0) return 2.0 * h;
            if (x1 == 1.0) return -2.0 * h;
            return 4.0 * h * (1.0 - 2.0 * x1);
        }
        case WallKind::tabulated: {
            if (x1 < xs_.front() || x1 > xs_.back()) return 0.0;
            auto seg = [&](std::size_t i) { return (fs_[i + 1] - fs_[i]) / (xs_[i + 1] - xs_[i]); };
            const auto it = std::lower_bound(xs_.begin(), xs_.end(), x1);
            const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
            if (k < xs_.size() && xs_[k] == x1) {
                const double left = k == 0 ? 0.0 : seg(k - 1);
                const double right = k + 1 == xs_.size() ? 0.0 : seg(k);
                return 0.5 * (left + right);
            }
            return seg(k - 1);
        }
    }
    return 0.0;
}

std::vector<Point> WallShape::corners() const {
    if (kind_ != WallKind::corner_bump || max_height_ == 0.0) return {};
    return {{0.0, 0.0}, {1.0, 0.0}};
}

double WallShape::area() const {
    // composite Simpson over the support; the integrands are smooth on each piece
    const int n = 20000;
    const double a = support_a_, b = support_b_;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

bool WallShape::symmetric() const {
    const double half = 0.5 * (support_b_ - support_a_);
    for (int i = 0; i <= 200; ++i) {
        const double d = half * i / 200.0;
        if (std::abs(f(center_ + d) - f(center_ - d)) > 1e-14 * (1.0 + max_height_)) return false;
    }
    return true;
}

int Mesh::column_of(double x1_value) const {
    const double t = (x1_value - (x_center - N)) / dxi;
    return std::clamp(static_cast<int>(std::lround(t)), 0, nx);
}

Mesh build_mesh(const WallShape& wall, double L, double N, int nx, int ny) {
    if (!(L > wall.max_height() + 1.0)) throw ConfigError("L must exceed wall height + 1");
    if (!(N >= 4.0)) throw ConfigError("N must be >= 4");
    if (nx < 16 || ny < 16) throw ConfigError("mesh needs nx, ny >= 16");
    const double half_support = 0.5 * (wall.support_end() - wall.support_begin());
    if (!(N > half_support)) throw ConfigError("lateral window must contain the wall support");

    Mesh m;
    m.L = L;
    m.N = N;
    m.nx = nx;
    m.ny = ny;
    m.x_center = wall.center();
    m.dxi = 2.0 * N / nx;
    m.deta = 1.0 / ny;
    const int n = m.nodes();
    m.x1.resize(n);
    m.x2.resize(n);
    m.dx2_dxi.resize(n);
    m.dx2_deta.resize(n);
    m.deta_dx1.resize(n);
    m.deta_dx2.resize(n);
    m.wall_f.resize(nx + 1);
    for (int i = 0; i <= nx; ++i) {
        const double xi = m.xi(i);
        const double f = wall.f(xi);
        const double fp = wall.slope(xi);
        const double jac = L - f;
        if (!(jac > 0.0)) throw ConfigError("degenerate mesh Jacobian");
        m.wall_f[i] = f;
        for (int j = 0; j <= ny; ++j) {
            const double eta = m.eta(j);
            const int k = m.index(i, j);
            m.x1[k] = xi;
            m.x2[k] = j == ny ? L : f + eta * jac;
            m.dx2_dxi[k] = fp * (1.0 - eta);
            m.dx2_deta[k] = jac;
            m.deta_dx1[k] = -(1.0 - eta) * fp / jac;
            m.deta_dx2[k] = 1.0 / jac;
        }
    }
    return m;
}

double mesh_area(const Mesh& m) {
    double area = 0.0;
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            const int k[4] = {m.index(i, j), m.index(i + 1, j), m.index(i + 1, j + 1), m.index(i, j + 1)};
            double s = 0.0;
            for (int a = 0; a < 4; ++a) {
                const int b = (a + 1) % 4;
                s += m.x1[k[a]] * m.x2[k[b]] - m.x1[k[b]] * m.x2[k[a]];
            }
            area += 0.5 * s;
        }
    }
    return area;
}

CornerCells corner_cells(const Mesh& m, const WallShape& wall) {
    CornerCells out;
    const auto pts = wall.corners();
    out.radius = 3.0 * std::max(m.dxi, m.L * m.deta);
    if (pts.empty()) return out;
    for (std::size_t c = 0; c < pts.size(); ++c) {
        auto& set = c == 0 ? out.near_p1 : out.near_p2;
        int& nearest = c == 0 ? out.p1_node : out.p2_node;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < m.nodes(); ++k) {
            const double d = std::hypot(m.x1[k] - pts[c].x1, m.x2[k] - pts[c].x2);
            if (d <= out.radius) set.push_back(k);
            if (d < best) {
                best = d;
                nearest = k;
            }
        }
    }
    return out;
}

}  // namespace subsonic

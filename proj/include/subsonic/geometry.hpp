#pragma once

#include <string>
#include <vector>

namespace subsonic {

enum class WallKind { flat, smooth_bump, corner_bump, multi_bump, tabulated };

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// One smooth bump h * exp(1 - 1/(1 - t^2)) on [a, b], t = (2x - a - b)/(b - a).
struct BumpSupport {
    double a = 0.0;
    double b = 1.0;
    double height = 0.0;
};

/// Wall graph x2 = f(x1) >= 0, vanishing outside a compact support.
class WallShape {
public:
    static WallShape flat();
    /// C-infinity bump of the given height on [0, 1].
    static WallShape smooth_bump(double height);
    /// Parabolic arc 4 h x (1 - x) on [0, 1]: smooth apex, genuine corners at (0,0) and (1,0).
    static WallShape corner_bump(double height);
    static WallShape multi_bump(std::vector<BumpSupport> bumps);
    /// Two-column CSV (x1,f) with a header line; piecewise linear, zero outside the samples.
    static WallShape from_csv(const std::string& path);

    double f(double x1) const;
    /// f'(x1); at a corner the mean of the one-sided slopes.
    double slope(double x1) const;

    WallKind kind() const { return kind_; }
    /// J = max f
    double max_height() const { return max_height_; }
    /// Midpoint of the support; the lateral window is centred here.
    double center() const { return center_; }
    double support_begin() const { return support_a_; }
    double support_end() const { return support_b_; }
    /// Corner points where the wall is not differentiable (corner_bump only).
    std::vector<Point> corners() const;
    /// int f dx1 (adaptive quadrature)
    double area() const;
    /// f(center + d) == f(center - d)
    bool symmetric() const;

private:
    WallShape() = default;
    void finish();

    WallKind kind_ = WallKind::flat;
    std::vector<BumpSupport> bumps_;
    std::vector<double> xs_, fs_;  // tabulated samples
    double max_height_ = 0.0;
    double center_ = 0.5;
    double support_a_ = 0.0, support_b_ = 1.0;
};

/// Sheared body-fitted grid of Omega_{L,N}: x1 = xi, x2 = f(xi) + eta (L - f(xi)),
/// (xi, eta) in [c - N, c + N] x [0, 1] with c the wall centre. Node (i, j) is stored at
/// j * (nx + 1) + i, i.e. row-major by eta then xi.
struct Mesh {
    double L = 0.0;
    double N = 0.0;
    int nx = 0;
    int ny = 0;
    double x_center = 0.0;
    double dxi = 0.0;
    double deta = 0.0;

    std::vector<double> x1, x2;        ///< node coordinates
    std::vector<double> dx2_dxi;       ///< f'(xi)(1 - eta)
    std::vector<double> dx2_deta;      ///< L - f(xi), the Jacobian
    std::vector<double> deta_dx1;      ///< -(1 - eta) f' / (L - f)
    std::vector<double> deta_dx2;      ///< 1 / (L - f)
    std::vector<double> wall_f;        ///< f at each column

    int index(int i, int j) const { return j * (nx + 1) + i; }
    int nodes() const { return (nx + 1) * (ny + 1); }
    int cells() const { return nx * ny; }
    double xi(int i) const { return x_center - N + dxi * i; }
    double eta(int j) const { return deta * j; }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx || j == ny; }
    /// Column index nearest to x1.
    int column_of(double x1_value) const;
};

Mesh build_mesh(const WallShape& wall, double L, double N, int nx, int ny);

/// Sum of cell areas (exact for the bilinear cells).
double mesh_area(const Mesh& mesh);

struct CornerCells {
    std::vector<int> near_p1;  ///< node indices within 3 max(dx1, dx2) of (0, 0)
    std::vector<int> near_p2;  ///< same for (1, 0)
    int p1_node = -1;          ///< node closest to the corner itself
    int p2_node = -1;
    double radius = 0.0;
};

CornerCells corner_cells(const Mesh& mesh, const WallShape& wall);

}  // namespace subsonic

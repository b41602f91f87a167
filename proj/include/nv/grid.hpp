#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace nv {

using Eigen::ArrayXd;

struct OutOfDomain : std::runtime_error {
    explicit OutOfDomain(const std::string& what) : std::runtime_error(what) {}
};

/// Uniform node-centered grid over [x_min, x_max], both endpoints included.
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    int nx = 0;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double node(int i) const { return x_min + i * dx(); }

    ArrayXd nodes() const {
        ArrayXd xs(nx);
        for (int i = 0; i < nx; ++i) xs[i] = node(i);
        return xs;
    }

    bool contains(double x) const { return x >= x_min && x <= x_max; }

    /// Linear interpolation of nodal values; exact on the nodes.
    double interp(const ArrayXd& g, double x) const {
        if (!contains(x))
            throw OutOfDomain("x = " + std::to_string(x) + " outside grid");
        const double u = (x - x_min) / dx();
        int i = static_cast<int>(u);
        if (i > nx - 2) i = nx - 2;
        const double w = u - i;
        return (1.0 - w) * g[i] + w * g[i + 1];
    }

    /// Same but values outside the grid count as zero (for compactly
    /// supported source grids queried along light cones).
    double interp_or_zero(const ArrayXd& g, double x) const {
        if (!contains(x)) return 0.0;
        return interp(g, x);
    }
};

/// Trapezoid rule over the nodal values of a SpatialGrid.
inline double trapezoid(const ArrayXd& g, double dx) {
    if (g.size() == 0) return 0.0;
    if (g.size() == 1) return 0.0;
    return dx * (g.sum() - 0.5 * (g[0] + g[g.size() - 1]));
}

}  // namespace nv

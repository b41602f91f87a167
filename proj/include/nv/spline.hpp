#pragma once

#include <Eigen/Dense>

namespace nv {

/// Natural cubic spline on a uniform grid. Provides the value, the first
/// derivative, and the exact integral of the interpolant, so that sampled
/// data can feed the d'Alembert formula without one-sided differencing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(double x0, double h, const Eigen::ArrayXd& values);

    double operator()(double x) const;
    double derivative(double x) const;
    /// Integral of the spline over [a, b]; arguments clamped to the grid.
    double integral(double a, double b) const;

    double x_begin() const { return x0_; }
    double x_end() const { return x0_ + h_ * (y_.size() - 1); }

private:
    /// Cumulative integral from x0 to x (x clamped to the grid).
    double cumulative(double x) const;
    void locate(double x, int& i, double& s) const;

    double x0_ = 0.0;
    double h_ = 1.0;
    Eigen::ArrayXd y_;    // nodal values
    Eigen::ArrayXd m_;    // nodal second derivatives
    Eigen::ArrayXd cum_;  // cumulative integral at nodes
};

}  // namespace nv

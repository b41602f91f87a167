#pragma once

#include <Eigen/Dense>
#include <functional>

#include "nv/config.hpp"

namespace nv {

using Eigen::Vector3d;

/// Smooth compactly supported bump, 1 at the origin, 0 for |u| >= 1.
double bump(double u);
double bump_derivative(double u);

/// Initial phase-space density and field data. All callables are defined on
/// the whole axis and vanish outside |x| <= support_radius; dphi0 is the
/// analytic derivative of phi0 (never a difference quotient of samples).
struct InitialData {
    std::function<double(double, const Vector3d&)> f_in;
    std::function<double(double)> phi0;
    std::function<double(double)> dphi0;
    std::function<double(double)> phi1;
    double support_radius = 0.0;
    // smallest axis-aligned momentum box containing supp f_in
    Vector3d p_lo = Vector3d::Zero();
    Vector3d p_hi = Vector3d::Zero();
    bool vacuum = false;
};

/// Build initial data from the named catalog (gaussian-bump, two-stream,
/// vacuum) or from a sampled-table file.
InitialData make_initial_data(const SimConfig& cfg);

/// Sampled-table format: one header line
///   nx np1 np2 np3 x_lo x_hi p1_lo p1_hi p2_lo p2_hi p3_lo p3_hi
/// followed by nx*np1*np2*np3 whitespace-separated values in row-major
/// order (x slowest). Values are interpolated multilinearly.
InitialData load_table(const std::string& path, const SimConfig& cfg);

}  // namespace nv

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace nv {

using Vector3d = Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;

struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(const std::string& w) : std::runtime_error(w) {}
};
struct SingularJacobian : std::runtime_error {
    explicit SingularJacobian(const std::string& w) : std::runtime_error(w) {}
};

/// Closed-form field on R^3 with analytically consistent derivatives.
struct PrescribedField {
    std::string name;
    std::function<double(double, const Vector3d&)> phi;
    std::function<double(double, const Vector3d&)> dphi_dt;
    std::function<Vector3d(double, const Vector3d&)> grad;
};

/// zero field, purely time dependent, separable, Gaussian pulse.
std::vector<PrescribedField> field_catalog();

/// Characteristic system in full 3D phase space.
Vector6d flow_rhs(double t, const Vector6d& z, const PrescribedField& field);

/// Adaptive RK4 with step doubling and Richardson correction.
Vector6d integrate_flow(const Vector6d& z0, const PrescribedField& field,
                        double t0, double t1, double tol);

/// Central-difference flow-map Jacobian determinant (12 integrations, LU
/// with partial pivoting). h defaults to 1e-4 * (1 + |z0|) when <= 0.
double jacobian_fd(const Vector6d& z0, const PrescribedField& field, double t0,
                   double t1, double h = 0.0, double tol = 1e-12);

struct LiouvilleQuadrature {
    int points_per_axis = 6;
    double x_radius = 2.0;
    double p_radius = 2.0;
    double ode_tol = 1e-10;
};

/// Tensor midpoint quadrature of the Casimir functional at time t; the
/// integrand is evaluated through the representation formula and the
/// volume factor e^{3(phi_in - phi)}, with the initial point recovered by
/// integrating back through the flow.
double liouville_functional(
    const std::function<double(const Vector3d&, const Vector3d&)>& f_in,
    double q, const PrescribedField& field, double t,
    const LiouvilleQuadrature& quad);

/// Same functional for several exponents and times at once, sharing the
/// characteristic integrations: forward pushes are chained through the
/// ascending times. result[ti][qi] matches times[ti] and qs[qi].
std::vector<std::vector<double>> liouville_functional_batch(
    const std::function<double(const Vector3d&, const Vector3d&)>& f_in,
    const std::vector<double>& qs, const PrescribedField& field,
    const std::vector<double>& times, const LiouvilleQuadrature& quad);

struct FlowcheckRow {
    std::string check;
    std::string field;
    double parameter = 0.0;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct FlowcheckOptions {
    int random_points = 20;
    double jacobian_tol = 1e-6;
    double liouville_tol = 1e-6;
    double jacobian_exponent = 3.0;  // test hook; the formula value
};

/// Runs the full catalog: Jacobian formula agreement, Liouville drift for
/// q in {1,2,3} and t in {0.5,1,2}, and flow reversibility.
std::vector<FlowcheckRow> run_flowcheck(const FlowcheckOptions& opts = {});

std::string flowcheck_csv(const std::vector<FlowcheckRow>& rows);

}  // namespace nv

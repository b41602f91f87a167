#include "nv/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace nv {

CubicSpline::CubicSpline(double x0, double h, const Eigen::ArrayXd& values)
    : x0_(x0), h_(h), y_(values) {
    const Eigen::Index n = y_.size();
    if (n < 2) throw std::invalid_argument("CubicSpline needs >= 2 nodes");
    m_ = Eigen::ArrayXd::Zero(n);
    if (n > 2) {
        // Thomas algorithm for the natural-spline tridiagonal system.
        const Eigen::Index k = n - 2;
        Eigen::ArrayXd diag = Eigen::ArrayXd::Constant(k, 4.0);
        Eigen::ArrayXd rhs(k);
        for (Eigen::Index i = 0; i < k; ++i)
            rhs[i] = 6.0 * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]) / (h_ * h_);
        for (Eigen::Index i = 1; i < k; ++i) {
            const double w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        m_[k] = rhs[k - 1] / diag[k - 1];
        for (Eigen::Index i = k - 1; i >= 1; --i)
            m_[i] = (rhs[i - 1] - m_[i + 1]) / diag[i - 1];
    }
    // Exact per-cell integrals of the cubic pieces.
    cum_ = Eigen::ArrayXd::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double cell = 0.5 * h_ * (y_[i] + y_[i + 1]) -
                            h_ * h_ * h_ / 24.0 * (m_[i] + m_[i + 1]);
        cum_[i + 1] = cum_[i] + cell;
    }
}

void CubicSpline::locate(double x, int& i, double& s) const {
    const Eigen::Index n = y_.size();
    double u = (x - x0_) / h_;
    if (u < 0.0) u = 0.0;
    if (u > static_cast<double>(n - 1)) u = static_cast<double>(n - 1);
    i = static_cast<int>(u);
    if (i > n - 2) i = static_cast<int>(n) - 2;
    s = u - i;
}

double CubicSpline::operator()(double x) const {
    if (x < x_begin()) return y_[0];
    if (x > x_end()) return y_[y_.size() - 1];
    int i;
    double s;
    locate(x, i, s);
    const double t = 1.0 - s;
    return t * y_[i] + s * y_[i + 1] +
           h_ * h_ / 6.0 *
               ((t * t * t - t) * m_[i] + (s * s * s - s) * m_[i + 1]);
}

double CubicSpline::derivative(double x) const {
    if (x < x_begin() || x > x_end()) return 0.0;
    int i;
    double s;
    locate(x, i, s);
    const double t = 1.0 - s;
    return (y_[i + 1] - y_[i]) / h_ +
           h_ / 6.0 *
               ((3.0 * s * s - 1.0) * m_[i + 1] - (3.0 * t * t - 1.0) * m_[i]);
}

double CubicSpline::cumulative(double x) const {
    if (x <= x_begin()) return 0.0;
    if (x >= x_end()) return cum_[cum_.size() - 1];
    int i;
    double s;
    locate(x, i, s);
    const double t = 1.0 - s;
    // integral of the cubic piece from the left node to local coordinate s
    const double part =
        h_ * (0.5 * (1.0 - t * t) * y_[i] + 0.5 * s * s * y_[i + 1]) +
        h_ * h_ * h_ / 24.0 *
            (-(t * t * t * t - 2.0 * t * t + 1.0) * m_[i] +
             (s * s * s * s - 2.0 * s * s) * m_[i + 1]);
    return cum_[i] + part;
}

double CubicSpline::integral(double a, double b) const {
    if (a > b) return -integral(b, a);
    return cumulative(b) - cumulative(a);
}

}  // namespace nv

#include "nv/flowcheck.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "nv/initial_data.hpp"

namespace nv {

std::vector<PrescribedField> field_catalog() {
    std::vector<PrescribedField> fields;
    {
        PrescribedField f;
        f.name = "zero";
        f.phi = [](double, const Vector3d&) { return 0.0; };
        f.dphi_dt = [](double, const Vector3d&) { return 0.0; };
        f.grad = [](double, const Vector3d&) { return Vector3d::Zero().eval(); };
        fields.push_back(f);
    }
    {
        const double alpha = 0.3;
        PrescribedField f;
        f.name = "linear-time";
        f.phi = [alpha](double t, const Vector3d&) { return alpha * t; };
        f.dphi_dt = [alpha](double, const Vector3d&) { return alpha; };
        f.grad = [](double, const Vector3d&) { return Vector3d::Zero().eval(); };
        fields.push_back(f);
    }
    {
        const double alpha = 0.2, beta = 0.1;
        PrescribedField f;
        f.name = "separable";
        f.phi = [alpha, beta](double t, const Vector3d& x) {
            return alpha * t + beta * std::sin(x[0]);
        };
        f.dphi_dt = [alpha](double, const Vector3d&) { return alpha; };
        f.grad = [beta](double, const Vector3d& x) {
            return Vector3d(beta * std::cos(x[0]), 0.0, 0.0).eval();
        };
        fields.push_back(f);
    }
    {
        const double amp = 0.2, w2 = 4.0;
        PrescribedField f;
        f.name = "gaussian-pulse";
        f.phi = [amp, w2](double t, const Vector3d& x) {
            return amp * std::exp(-(x.squaredNorm() + t * t) / w2);
        };
        f.dphi_dt = [amp, w2](double t, const Vector3d& x) {
            return amp * std::exp(-(x.squaredNorm() + t * t) / w2) *
                   (-2.0 * t / w2);
        };
        f.grad = [amp, w2](double t, const Vector3d& x) {
            const double v = amp * std::exp(-(x.squaredNorm() + t * t) / w2);
            return (v * (-2.0 / w2) * x).eval();
        };
        fields.push_back(f);
    }
    return fields;
}

Vector6d flow_rhs(double t, const Vector6d& z, const PrescribedField& field) {
    const Vector3d x = z.head<3>();
    const Vector3d p = z.tail<3>();
    const double gamma = std::sqrt(1.0 + p.squaredNorm());
    const Vector3d phat = p / gamma;
    const Vector3d g = field.grad(t, x);
    const double s_phi = field.dphi_dt(t, x) + phat.dot(g);
    Vector6d dz;
    dz.head<3>() = phat;
    dz.tail<3>() = -s_phi * p - g / gamma;
    return dz;
}

namespace {

Vector6d rk4_step(const Vector6d& z, double t, double h,
                  const PrescribedField& field) {
    const Vector6d k1 = flow_rhs(t, z, field);
    const Vector6d k2 = flow_rhs(t + 0.5 * h, z + 0.5 * h * k1, field);
    const Vector6d k3 = flow_rhs(t + 0.5 * h, z + 0.5 * h * k2, field);
    const Vector6d k4 = flow_rhs(t + h, z + h * k3, field);
    return z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vector6d integrate_flow(const Vector6d& z0, const PrescribedField& field,
                        double t0, double t1, double tol) {
    if (t0 == t1) return z0;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(0.1, std::abs(t1 - t0));
    Vector6d z = z0;
    int guard = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++guard > 1000000)
            throw StepUnderflow("integrate_flow: step budget exhausted");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        const Vector6d full = rk4_step(z, t, h, field);
        const Vector6d half =
            rk4_step(rk4_step(z, t, 0.5 * h, field), t + 0.5 * h, 0.5 * h, field);
        const double err = (full - half).cwiseAbs().maxCoeff() / 15.0;
        const double scale = tol * (1.0 + z.cwiseAbs().maxCoeff());
        if (err <= scale) {
            z = half + (half - full) / 15.0;
            t += h;
            if (err > 0.0)
                h *= std::min(4.0, 0.9 * std::pow(scale / err, 0.2));
            else
                h *= 4.0;
        } else {
            h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.2));
        }
        if (std::abs(h) < 1e-14)
            throw StepUnderflow("integrate_flow: step size underflow");
    }
    return z;
}

double jacobian_fd(const Vector6d& z0, const PrescribedField& field, double t0,
                   double t1, double h, double tol) {
    if (h <= 0.0) h = 1e-4 * (1.0 + z0.norm());
    Eigen::Matrix<double, 6, 6> jac;
    for (int i = 0; i < 6; ++i) {
        Vector6d zp = z0, zm = z0;
        zp[i] += h;
        zm[i] -= h;
        const Vector6d fp = integrate_flow(zp, field, t0, t1, tol);
        const Vector6d fm = integrate_flow(zm, field, t0, t1, tol);
        jac.col(i) = (fp - fm) / (2.0 * h);
    }
    const double det = jac.partialPivLu().determinant();
    if (std::abs(det) < 1e-12)
        throw SingularJacobian("flow-map Jacobian determinant near zero");
    return det;
}

std::vector<std::vector<double>> liouville_functional_batch(
    const std::function<double(const Vector3d&, const Vector3d&)>& f_in,
    const std::vector<double>& qs, const PrescribedField& field,
    const std::vector<double>& times, const LiouvilleQuadrature& quad) {
    const int n = quad.points_per_axis;
    const double hx = 2.0 * quad.x_radius / n;
    const double hp = 2.0 * quad.p_radius / n;
    const double vol = hx * hx * hx * hp * hp * hp;
    std::vector<std::vector<double>> total(
        times.size(), std::vector<double>(qs.size(), 0.0));
    std::vector<int> idx(6, 0);
    auto coord = [&](int a) {
        const double lo = a < 3 ? -quad.x_radius : -quad.p_radius;
        const double hh = a < 3 ? hx : hp;
        return lo + (idx[a] + 0.5) * hh;
    };
    while (true) {
        const Vector3d x(coord(0), coord(1), coord(2));
        const Vector3d p(coord(3), coord(4), coord(5));
        const double f0 = f_in(x, p);
        if (f0 > 0.0) {
            Vector6d z0;
            z0 << x, p;
            Vector6d zt = z0;
            double t_cur = 0.0;
            for (size_t ti = 0; ti < times.size(); ++ti) {
                const double t = times[ti];
                Vector3d xb = x;
                if (t != 0.0) {
                    zt = integrate_flow(zt, field, t_cur, t, quad.ode_tol);
                    t_cur = t;
                    const Vector6d zb =
                        integrate_flow(zt, field, t, 0.0, quad.ode_tol);
                    xb = zb.head<3>();
                    const Vector3d xt = zt.head<3>();
                    const double phi_t = field.phi(t, xt);
                    const double phi_b = field.phi(0.0, xb);
                    const double ft = f_in(xb, zb.tail<3>()) *
                                      std::exp(4.0 * phi_t - 4.0 * phi_b);
                    for (size_t qi = 0; qi < qs.size(); ++qi)
                        total[ti][qi] +=
                            std::pow(ft * std::exp(-4.0 * phi_t), qs[qi]) *
                            std::exp(3.0 * phi_t) *
                            std::exp(3.0 * (phi_b - phi_t)) * vol;
                } else {
                    const double phi0 = field.phi(0.0, x);
                    for (size_t qi = 0; qi < qs.size(); ++qi)
                        total[ti][qi] +=
                            std::pow(f0 * std::exp(-4.0 * phi0), qs[qi]) *
                            std::exp(3.0 * phi0) * vol;
                }
            }
        }
        int a = 0;
        for (; a < 6; ++a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
        }
        if (a == 6) break;
    }
    return total;
}

double liouville_functional(
    const std::function<double(const Vector3d&, const Vector3d&)>& f_in,
    double q, const PrescribedField& field, double t,
    const LiouvilleQuadrature& quad) {
    return liouville_functional_batch(f_in, {q}, field, {t}, quad)[0][0];
}

std::vector<FlowcheckRow> run_flowcheck(const FlowcheckOptions& opts) {
    std::vector<FlowcheckRow> rows;
    const auto catalog = field_catalog();
    auto f_in = [](const Vector3d& x, const Vector3d& p) {
        return bump(x.norm() / 1.5) * bump(p.norm() / 1.5);
    };

    for (const auto& field : catalog) {
        // Jacobian determinant versus the closed-form exponential
        std::mt19937 rng(1234);
        std::uniform_real_distribution<double> unif(-1.5, 1.5);
        double worst = 0.0;
        const double t = 1.0;
        for (int k = 0; k < opts.random_points; ++k) {
            Vector6d z;
            for (int i = 0; i < 6; ++i) z[i] = unif(rng);
            const double det = jacobian_fd(z, field, t, 0.0);
            const Vector6d z0 = integrate_flow(z, field, t, 0.0, 1e-12);
            const double expected =
                std::exp(opts.jacobian_exponent *
                         (field.phi(t, z.head<3>()) -
                          field.phi(0.0, z0.head<3>())));
            worst = std::max(worst, std::abs(det - expected) / expected);
        }
        rows.push_back({"jacobian", field.name, t, worst, opts.jacobian_tol,
                        worst <= opts.jacobian_tol});

        // Liouville functional drift; one chained characteristic sweep
        // serves every exponent and sample time
        {
            LiouvilleQuadrature quad;
            const std::vector<double> qs = {1.0, 2.0, 3.0};
            const std::vector<double> times = {0.0, 0.5, 1.0, 2.0};
            const auto vals =
                liouville_functional_batch(f_in, qs, field, times, quad);
            for (size_t qi = 0; qi < qs.size(); ++qi) {
                double drift = 0.0;
                for (size_t ti = 1; ti < times.size(); ++ti)
                    drift = std::max(drift,
                                     std::abs(vals[ti][qi] - vals[0][qi]) /
                                         std::abs(vals[0][qi]));
                rows.push_back({"liouville", field.name, qs[qi], drift,
                                opts.liouville_tol,
                                drift <= opts.liouville_tol});
            }
        }

        // flow reversibility
        {
            const double tol = 1e-10;
            Vector6d z;
            z << 0.3, -0.2, 0.1, 0.8, -0.4, 0.2;
            const Vector6d fwd = integrate_flow(z, field, 0.0, 2.0, tol);
            const Vector6d back = integrate_flow(fwd, field, 2.0, 0.0, tol);
            const double err = (back - z).cwiseAbs().maxCoeff();
            rows.push_back(
                {"reversibility", field.name, 2.0, err, 10.0 * tol,
                 err <= 10.0 * tol});
        }
    }
    return rows;
}

std::string flowcheck_csv(const std::vector<FlowcheckRow>& rows) {
    std::string out = "check,field,parameter,value,tolerance,pass\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%d\n",
                      r.check.c_str(), r.field.c_str(), r.parameter, r.value,
                      r.tolerance, r.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace nv

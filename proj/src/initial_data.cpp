#include "nv/initial_data.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace nv {

double bump(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

double bump_derivative(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    const double d = 1.0 - u2;
    return bump(u) * (-2.0 * u / (d * d));
}

namespace {

InitialData field_data(const SimConfig& cfg) {
    InitialData d;
    const double R0 = cfg.support_radius;
    const double b0 = cfg.phi0_amp;
    const double b1 = cfg.phi1_amp;
    d.support_radius = R0;
    d.phi0 = [b0, R0](double x) { return b0 * bump(x / R0); };
    d.dphi0 = [b0, R0](double x) { return b0 * bump_derivative(x / R0) / R0; };
    d.phi1 = [b1, R0](double x) { return b1 * bump(x / R0); };
    return d;
}

}  // namespace

InitialData make_initial_data(const SimConfig& cfg) {
    InitialData d = field_data(cfg);
    const double R0 = cfg.support_radius;
    const double A = cfg.f_amp;
    const double P = cfg.p_max;
    if (cfg.profile == "vacuum") {
        d.f_in = [](double, const Vector3d&) { return 0.0; };
        d.phi0 = [](double) { return 0.0; };
        d.dphi0 = [](double) { return 0.0; };
        d.phi1 = [](double) { return 0.0; };
        d.p_lo = Vector3d::Zero();
        d.p_hi = Vector3d::Zero();
        d.vacuum = true;
    } else if (cfg.profile == "gaussian-bump") {
        d.f_in = [A, P, R0](double x, const Vector3d& p) {
            return A * bump(x / R0) * bump(p.norm() / P);
        };
        d.p_lo = Vector3d::Constant(-P);
        d.p_hi = Vector3d::Constant(P);
    } else if (cfg.profile == "two-stream") {
        const double pd = cfg.p_drift;
        d.f_in = [A, P, R0, pd](double x, const Vector3d& p) {
            const Vector3d up(p[0] - pd, p[1], p[2]);
            const Vector3d dn(p[0] + pd, p[1], p[2]);
            return A * bump(x / R0) *
                   (bump(up.norm() / P) + bump(dn.norm() / P));
        };
        d.p_lo = Vector3d(-pd - P, -P, -P);
        d.p_hi = Vector3d(pd + P, P, P);
    } else if (cfg.profile == "table") {
        return load_table(cfg.table_path, cfg);
    } else {
        throw std::runtime_error("unknown profile: " + cfg.profile);
    }
    return d;
}

namespace {

struct Table {
    int n[4];
    double lo[4], hi[4];
    std::vector<double> v;

    double step(int a) const { return (hi[a] - lo[a]) / (n[a] - 1); }

    double at(int i, int j, int k, int l) const {
        return v[((static_cast<size_t>(i) * n[1] + j) * n[2] + k) * n[3] + l];
    }

    double eval(double x, const Vector3d& p) const {
        double c[4] = {x, p[0], p[1], p[2]};
        int idx[4];
        double w[4];
        for (int a = 0; a < 4; ++a) {
            if (c[a] < lo[a] || c[a] > hi[a]) return 0.0;
            double u = (c[a] - lo[a]) / step(a);
            int i = static_cast<int>(u);
            if (i > n[a] - 2) i = n[a] - 2;
            idx[a] = i;
            w[a] = u - i;
        }
        double r = 0.0;
        for (int b = 0; b < 16; ++b) {
            double ww = 1.0;
            int o[4];
            for (int a = 0; a < 4; ++a) {
                o[a] = (b >> a) & 1;
                ww *= o[a] ? w[a] : 1.0 - w[a];
            }
            r += ww * at(idx[0] + o[0], idx[1] + o[1], idx[2] + o[2],
                         idx[3] + o[3]);
        }
        return r;
    }
};

}  // namespace

InitialData load_table(const std::string& path, const SimConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    auto tab = std::make_shared<Table>();
    for (int a = 0; a < 4; ++a) {
        if (!(in >> tab->n[a]) || tab->n[a] < 2)
            throw std::runtime_error("table header: bad grid dims");
    }
    for (int a = 0; a < 4; ++a) {
        if (!(in >> tab->lo[a] >> tab->hi[a]) || tab->lo[a] >= tab->hi[a])
            throw std::runtime_error("table header: bad axis bounds");
    }
    const size_t count = static_cast<size_t>(tab->n[0]) * tab->n[1] *
                         tab->n[2] * tab->n[3];
    tab->v.resize(count);
    for (size_t i = 0; i < count; ++i) {
        if (!(in >> tab->v[i]))
            throw std::runtime_error("table payload shorter than header dims");
        if (tab->v[i] < 0.0)
            throw std::runtime_error("table contains negative f values");
    }
    InitialData d = field_data(cfg);
    d.support_radius =
        std::max({cfg.support_radius, std::abs(tab->lo[0]), std::abs(tab->hi[0])});
    d.f_in = [tab](double x, const Vector3d& p) { return tab->eval(x, p); };
    d.p_lo = Vector3d(tab->lo[1], tab->lo[2], tab->lo[3]);
    d.p_hi = Vector3d(tab->hi[1], tab->hi[2], tab->hi[3]);
    return d;
}

}  // namespace nv

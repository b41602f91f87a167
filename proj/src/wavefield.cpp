#include "nv/wavefield.hpp"

#include <cmath>

#include "nv/spline.hpp"

namespace nv {

// ---------------------------------------------------------------------------
// Mollifier

Mollifier Mollifier::make(int n, double dx, int nx) {
    Mollifier m;
    m.n = n;
    if (n <= 0) {
        m.half = 0;
        m.weights = ArrayXd::Ones(1);
        return m;
    }
    const double radius = 1.0 / n;
    int half = static_cast<int>(std::ceil(radius / dx)) - 1;
    if (half < 0) half = 0;
    if (2 * half + 1 >= nx)
        throw KernelWiderThanDomain("mollifier radius 1/" + std::to_string(n) +
                                    " does not fit the grid");
    m.half = half;
    m.weights = ArrayXd::Zero(2 * half + 1);
    for (int j = -half; j <= half; ++j) {
        const double u = j * dx * n;
        m.weights[j + half] = bump(u);
    }
    m.weights /= m.weights.sum();
    return m;
}

ArrayXd Mollifier::apply(const ArrayXd& g, int times) const {
    if (identity() || times <= 0) return g;
    ArrayXd cur = g;
    const int nx = static_cast<int>(g.size());
    for (int pass = 0; pass < times; ++pass) {
        ArrayXd out = ArrayXd::Zero(nx);
        for (int i = 0; i < nx; ++i) {
            double acc = 0.0;
            for (int j = -half; j <= half; ++j) {
                const int k = i - j;
                if (k < 0 || k >= nx) continue;
                acc += weights[j + half] * cur[k];
            }
            out[i] = acc;
        }
        cur = std::move(out);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// WaveData1D

namespace {

double gauss2(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const double d = 0.5 * (b - a) / std::sqrt(3.0);
    return 0.5 * (b - a) * (f(m - d) + f(m + d));
}

/// Per-cell two-point Gauss cumulative integral on a refined grid; O(h^4)
/// locally, positive weights not required here (phi1 may change sign).
class CumulativeQuadrature {
public:
    CumulativeQuadrature(std::function<double(double)> f, double x0, double x1,
                         int cells)
        : f_(std::move(f)), x0_(x0), h_((x1 - x0) / cells) {
        cum_.resize(cells + 1);
        cum_[0] = 0.0;
        for (int i = 0; i < cells; ++i)
            cum_[i + 1] = cum_[i] + gauss2(f_, x0_ + i * h_, x0_ + (i + 1) * h_);
    }

    double upto(double x) const {
        const int n = static_cast<int>(cum_.size()) - 1;
        if (x <= x0_) return 0.0;
        if (x >= x0_ + n * h_) return cum_[n];
        double u = (x - x0_) / h_;
        int i = static_cast<int>(u);
        if (i > n - 1) i = n - 1;
        return cum_[i] + gauss2(f_, x0_ + i * h_, x);
    }

    double over(double a, double b) const { return upto(b) - upto(a); }

private:
    std::function<double(double)> f_;
    double x0_, h_;
    std::vector<double> cum_;
};

}  // namespace

WaveData1D WaveData1D::analytic(const InitialData& data, const SpatialGrid& grid,
                                int refine) {
    WaveData1D w;
    w.phi0 = data.phi0;
    w.dphi0 = data.dphi0;
    w.phi1 = data.phi1;
    auto cum = std::make_shared<CumulativeQuadrature>(
        data.phi1, grid.x_min, grid.x_max, refine * (grid.nx - 1));
    w.phi1_integral = [cum](double a, double b) { return cum->over(a, b); };
    return w;
}

WaveData1D WaveData1D::mollified(const InitialData& data,
                                 const SpatialGrid& grid,
                                 const Mollifier& moll) {
    ArrayXd g0(grid.nx), g1(grid.nx);
    for (int i = 0; i < grid.nx; ++i) {
        g0[i] = data.phi0(grid.node(i));
        g1[i] = data.phi1(grid.node(i));
    }
    g0 = moll.apply(g0, 1);
    g1 = moll.apply(g1, 1);
    auto s0 = std::make_shared<CubicSpline>(grid.x_min, grid.dx(), g0);
    auto s1 = std::make_shared<CubicSpline>(grid.x_min, grid.dx(), g1);
    WaveData1D w;
    w.phi0 = [s0](double x) { return (*s0)(x); };
    w.dphi0 = [s0](double x) { return s0->derivative(x); };
    w.phi1 = [s1](double x) { return (*s1)(x); };
    w.phi1_integral = [s1](double a, double b) { return s1->integral(a, b); };
    return w;
}

WaveData1D WaveData1D::zero() {
    WaveData1D w;
    auto z = [](double) { return 0.0; };
    w.phi0 = z;
    w.dphi0 = z;
    w.phi1 = z;
    w.phi1_integral = [](double, double) { return 0.0; };
    return w;
}

// ---------------------------------------------------------------------------
// Homogeneous part

HomFields eval_phi_hom(const WaveData1D& data, double t, const SpatialGrid& grid) {
    HomFields h;
    h.phi.resize(grid.nx);
    h.dphi_dt.resize(grid.nx);
    h.dphi_dx.resize(grid.nx);
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.node(i);
        const double xp = x + t;
        const double xm = x - t;
        const double f0p = data.phi0(xp), f0m = data.phi0(xm);
        const double d0p = data.dphi0(xp), d0m = data.dphi0(xm);
        const double f1p = data.phi1(xp), f1m = data.phi1(xm);
        h.phi[i] = 0.5 * (f0p + f0m) + 0.5 * data.phi1_integral(xm, xp);
        h.dphi_dt[i] = 0.5 * (d0p - d0m) + 0.5 * (f1p + f1m);
        h.dphi_dx[i] = 0.5 * (d0p + d0m) + 0.5 * (f1p - f1m);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Retarded part

void MuHistory::set_level(int k, const ArrayXd& mu) {
    if (mu.minCoeff() < -1e-12)
        throw NegativeSource("mu level " + std::to_string(k) +
                             " has negative entries");
    if (k == size()) {
        levels.push_back(mu);
    } else if (k >= 0 && k < size()) {
        levels[k] = mu;
    } else {
        throw HistoryGap("set_level " + std::to_string(k) +
                         " would leave a gap (size " + std::to_string(size()) +
                         ")");
    }
}

int MuHistory::level_for(double t) const {
    if (dt <= 0.0) throw HistoryGap("history has no time step");
    const int k = static_cast<int>(std::lround(t / dt));
    if (std::abs(t - k * dt) > 1e-9 * std::max(1.0, std::abs(t)))
        throw HistoryGap("t is not a stored level time");
    if (k < 0 || k >= size()) throw HistoryGap("history does not cover t");
    return k;
}

namespace {

/// Prefix integrals of the linear interpolant of one mu level; evaluation
/// outside the grid clamps to 0 on the left and the total on the right
/// (sources vanish near the boundary by light-cone sizing).
struct PrefixLevel {
    const ArrayXd* mu;
    ArrayXd pre;

    void build(const ArrayXd& g, double dx) {
        mu = &g;
        const int nx = static_cast<int>(g.size());
        pre.resize(nx);
        pre[0] = 0.0;
        for (int i = 0; i + 1 < nx; ++i)
            pre[i + 1] = pre[i] + 0.5 * dx * (g[i] + g[i + 1]);
    }

    double integral_upto(double y, const SpatialGrid& grid) const {
        if (y <= grid.x_min) return 0.0;
        if (y >= grid.x_max) return pre[pre.size() - 1];
        const double dx = grid.dx();
        double u = (y - grid.x_min) / dx;
        int i = static_cast<int>(u);
        if (i > grid.nx - 2) i = grid.nx - 2;
        const double s = u - i;
        const double a = (*mu)[i], b = (*mu)[i + 1];
        return pre[i] + dx * (a * s + 0.5 * (b - a) * s * s);
    }
};

}  // namespace

HomFields duhamel_psi(const MuHistory& hist, double t, const SpatialGrid& grid) {
    HomFields h;
    h.phi = ArrayXd::Zero(grid.nx);
    h.dphi_dt = ArrayXd::Zero(grid.nx);
    h.dphi_dx = ArrayXd::Zero(grid.nx);
    if (t == 0.0) return h;
    const int K = hist.level_for(t);
    if (K == 0) return h;

    const double dt = hist.dt;
    std::vector<PrefixLevel> pref(K + 1);
    for (int k = 0; k <= K; ++k) pref[k].build(hist.levels[k], grid.dx());

    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.node(i);
        double acc_psi = 0.0, acc_t = 0.0, acc_x = 0.0;
        for (int k = 0; k <= K; ++k) {
            const double w = (k == 0 || k == K) ? 0.5 * dt : dt;
            const double r = t - k * dt;
            const double lo = pref[k].integral_upto(x - r, grid);
            const double hi = pref[k].integral_upto(x + r, grid);
            // clamp: the exact cell sums are non-negative, so a sub-ulp
            // negative difference must not flip the sign of psi
            acc_psi += w * std::max(hi - lo, 0.0);
            const double mp = grid.interp_or_zero(hist.levels[k], x + r);
            const double mm = grid.interp_or_zero(hist.levels[k], x - r);
            acc_t += w * (mp + mm);
            acc_x += w * (mp - mm);
        }
        h.phi[i] = -0.5 * acc_psi;
        h.dphi_dt[i] = -0.5 * acc_t;
        h.dphi_dx[i] = -0.5 * acc_x;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Assembly

FieldSlice FieldSlice::zero(double t, int nx) {
    FieldSlice s;
    s.t = t;
    s.phi = ArrayXd::Zero(nx);
    s.dphi_dt = ArrayXd::Zero(nx);
    s.dphi_dx = ArrayXd::Zero(nx);
    s.phi_hom = ArrayXd::Zero(nx);
    s.psi = ArrayXd::Zero(nx);
    return s;
}

FieldSlice FieldAssembler::assemble(const MuHistory& hist, double t) const {
    if (force_zero) return FieldSlice::zero(t, grid.nx);

    const HomFields hom = eval_phi_hom(data, t, grid);
    HomFields ret;
    if (t == 0.0 || hist.size() == 0) {
        ret.phi = ArrayXd::Zero(grid.nx);
        ret.dphi_dt = ArrayXd::Zero(grid.nx);
        ret.dphi_dx = ArrayXd::Zero(grid.nx);
    } else if (moll.identity() || mu_smoothing <= 0) {
        ret = duhamel_psi(hist, t, grid);
    } else {
        MuHistory smooth;
        smooth.dt = hist.dt;
        const int K = hist.level_for(t);
        smooth.levels.reserve(K + 1);
        for (int k = 0; k <= K; ++k)
            smooth.levels.push_back(moll.apply(hist.levels[k], mu_smoothing));
        ret = duhamel_psi(smooth, t, grid);
    }

    FieldSlice s;
    s.t = t;
    s.phi_hom = hom.phi;
    s.psi = ret.phi;
    s.phi = hom.phi + ret.phi;
    s.dphi_dt = hom.dphi_dt + ret.dphi_dt;
    s.dphi_dx = hom.dphi_dx + ret.dphi_dx;
    return s;
}

}  // namespace nv

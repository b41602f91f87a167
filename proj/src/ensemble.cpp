#include "nv/ensemble.hpp"

#include <cmath>
#include <vector>

namespace nv {

SampleStrides resolve_strides(const SimConfig& cfg) {
    if (cfg.sample_nx > 0 && cfg.sample_np > 0)
        return {cfg.sample_nx, cfg.sample_np};
    const double n = static_cast<double>(cfg.n_particles);
    int np = std::max(4, static_cast<int>(std::lround(std::pow(n, 0.25))));
    int nxs = std::max(
        4, static_cast<int>(std::lround(n / (static_cast<double>(np) * np * np))));
    return {nxs, np};
}

Ensemble sample_ensemble(const InitialData& data, const SimConfig& cfg,
                         const std::function<double(double)>& phi0_at) {
    Ensemble ens;
    ens.resize(0);
    if (data.vacuum) return ens;

    const SampleStrides s = resolve_strides(cfg);
    const double R0 = data.support_radius;
    const double dxs = 2.0 * R0 / s.nx;
    Vector3d dp;
    for (int a = 0; a < 3; ++a) dp[a] = (data.p_hi[a] - data.p_lo[a]) / s.np;
    const double V0 = dxs * dp[0] * dp[1] * dp[2];
    if (V0 <= 0.0) return ens;

    std::vector<double> xs, q1, q2, q3, av, mv, cv;
    for (int i = 0; i < s.nx; ++i) {
        const double x = -R0 + (i + 0.5) * dxs;
        const double phi0 = phi0_at(x);
        const double ea = std::exp(-4.0 * phi0);
        const double ec = std::exp(3.0 * phi0);
        for (int j = 0; j < s.np; ++j)
            for (int k = 0; k < s.np; ++k)
                for (int l = 0; l < s.np; ++l) {
                    const Vector3d p(data.p_lo[0] + (j + 0.5) * dp[0],
                                     data.p_lo[1] + (k + 0.5) * dp[1],
                                     data.p_lo[2] + (l + 0.5) * dp[2]);
                    const double f = data.f_in(x, p);
                    if (f <= 0.0) continue;
                    const double a = f * ea;
                    const double c = V0 * ec;
                    xs.push_back(x);
                    q1.push_back(p[0]);
                    q2.push_back(p[1]);
                    q3.push_back(p[2]);
                    av.push_back(a);
                    cv.push_back(c);
                    mv.push_back(a * c);
                }
    }
    const long n = static_cast<long>(xs.size());
    ens.resize(n);
    for (long k = 0; k < n; ++k) {
        ens.x[k] = xs[k];
        ens.p1[k] = q1[k];
        ens.p2[k] = q2[k];
        ens.p3[k] = q3[k];
        ens.a[k] = av[k];
        ens.m[k] = mv[k];
        ens.c[k] = cv[k];
    }
    return ens;
}

}  // namespace nv

#include "nv/kinetic.hpp"

#include <cassert>
#include <cmath>
#include <vector>

#include "nv/parallel.hpp"

namespace nv {

PhaseDeriv characteristic_rhs(double x, const Vector3d& p,
                              const ForceField& field, double t) {
    const double gamma = std::sqrt(1.0 + p.squaredNorm());
    const double phat1 = p[0] / gamma;
    const double dt_phi = field.dphi_dt(t, x);
    const double dx_phi = field.dphi_dx(t, x);
    const double s_phi = dt_phi + phat1 * dx_phi;
    PhaseDeriv d;
    d.dx = phat1;
    d.dp = -s_phi * p - (dx_phi / gamma) * Vector3d::UnitX();
    assert(std::abs(d.dx) < 1.0);
    return d;
}

void push(Ensemble& ens, const ForceField& field, double t, double dt,
          int threads) {
    parallel_for(ens.size(), threads, [&](long b, long e, int) {
        for (long k = b; k < e; ++k) {
            const Vector3d p(ens.p1[k], ens.p2[k], ens.p3[k]);
            const PhaseDeriv k1 = characteristic_rhs(ens.x[k], p, field, t);
            const double xm = ens.x[k] + 0.5 * dt * k1.dx;
            const Vector3d pm = p + 0.5 * dt * k1.dp;
            const PhaseDeriv k2 = characteristic_rhs(xm, pm, field, t + 0.5 * dt);
            ens.x[k] += dt * k2.dx;
            const Vector3d pn = p + dt * k2.dp;
            ens.p1[k] = pn[0];
            ens.p2[k] = pn[1];
            ens.p3[k] = pn[2];
        }
    });
}

MomentGrids MomentGrids::zero(int nx) {
    MomentGrids m;
    m.mu = ArrayXd::Zero(nx);
    m.sigma = ArrayXd::Zero(nx);
    m.rho = ArrayXd::Zero(nx);
    m.j = ArrayXd::Zero(nx);
    m.ekin = ArrayXd::Zero(nx);
    m.mom = ArrayXd::Zero(nx);
    return m;
}

MomentGrids deposit(const Ensemble& ens, const FieldSlice& slice,
                    const SpatialGrid& grid, int threads) {
    const int nx = grid.nx;
    const double dx = grid.dx();
    MomentGrids m = MomentGrids::zero(nx);
    ArrayXd jhat = ArrayXd::Zero(nx);

    const int nth = (threads > 1 && ens.size() >= 2 * threads) ? threads : 1;
    // per-thread partial grids merged in thread-index order: deterministic
    // for a fixed thread count
    std::vector<MomentGrids> part(nth, MomentGrids::zero(nx));
    std::vector<ArrayXd> part_jhat(nth, ArrayXd::Zero(nx));

    parallel_for(ens.size(), nth, [&](long b, long e, int tid) {
        MomentGrids& g = part[tid];
        ArrayXd& gj = part_jhat[tid];
        for (long k = b; k < e; ++k) {
            const double phi = grid.interp(slice.phi, ens.x[k]);
            const double w = ens.a[k] * ens.c[k] * std::exp(phi);  // f * V
            const double gamma = ens.gamma(k);
            const double u = (ens.x[k] - grid.x_min) / dx;
            int i = static_cast<int>(u);
            if (i > nx - 2) i = nx - 2;
            const double s = u - i;
            const double w0 = (1.0 - s) / dx;
            const double w1 = s / dx;
            const double phat1 = ens.p1[k] / gamma;
            g.mu[i] += w0 * w / gamma;
            g.mu[i + 1] += w1 * w / gamma;
            g.sigma[i] += w0 * w;
            g.sigma[i + 1] += w1 * w;
            g.ekin[i] += w0 * w * gamma;
            g.ekin[i + 1] += w1 * w * gamma;
            g.mom[i] += w0 * w * ens.p1[k];
            g.mom[i + 1] += w1 * w * ens.p1[k];
            gj[i] += w0 * w * phat1;
            gj[i + 1] += w1 * w * phat1;
        }
    });
    for (int taccum = 0; taccum < nth; ++taccum) {
        m.mu += part[taccum].mu;
        m.sigma += part[taccum].sigma;
        m.ekin += part[taccum].ekin;
        m.mom += part[taccum].mom;
        jhat += part_jhat[taccum];
    }
    const ArrayXd emphi = (-slice.phi).exp();
    m.rho = emphi * m.sigma;
    m.j = emphi * jhat;
    return m;
}

void advance(SimState& state, const FieldAssembler& assembler, double dt,
             int threads) {
    const double t0 = state.t;
    const double t1 = t0 + dt;
    const int k1 = static_cast<int>(std::lround(t1 / state.hist.dt));

    // (1) Euler predictor against the frozen slice at t0
    Ensemble pred = state.ens;
    {
        ForceField frozen{&assembler.grid, &state.slice, &state.slice};
        parallel_for(pred.size(), threads, [&](long b, long e, int) {
            for (long k = b; k < e; ++k) {
                const Vector3d p(pred.p1[k], pred.p2[k], pred.p3[k]);
                const PhaseDeriv d = characteristic_rhs(pred.x[k], p, frozen, t0);
                pred.x[k] += dt * d.dx;
                const Vector3d pn = p + dt * d.dp;
                pred.p1[k] = pn[0];
                pred.p2[k] = pn[1];
                pred.p3[k] = pn[2];
            }
        });
    }

    // (2) provisional source level at t1 (phi weights from the t0 slice)
    state.hist.set_level(k1, deposit(pred, state.slice, assembler.grid, threads).mu);

    // (3) the one field assembly of this step
    FieldSlice next = assembler.assemble(state.hist, t1);

    // (4) corrected RK2 push through the time-interpolated field
    {
        ForceField field{&assembler.grid, &state.slice, &next};
        push(state.ens, field, t0, dt, threads);
    }

    // (5) final deposit overwrites the provisional level
    state.moments = deposit(state.ens, next, assembler.grid, threads);
    state.hist.set_level(k1, state.moments.mu);

    state.slice = std::move(next);
    state.t = t1;
    state.step += dt > 0 ? 1 : -1;
}

}  // namespace nv

#pragma once

#include <Eigen/Dense>

#include "nv/ensemble.hpp"
#include "nv/wavefield.hpp"

namespace nv {

/// Field accessor for the characteristic system: linear interpolation in x
/// on the slice grids and linear interpolation in t between two bracketing
/// slices (pass the same slice twice for a frozen field).
struct ForceField {
    const SpatialGrid* grid;
    const FieldSlice* s0;
    const FieldSlice* s1;

    double phi(double t, double x) const { return blend(t, x, &FieldSlice::phi); }
    double dphi_dt(double t, double x) const {
        return blend(t, x, &FieldSlice::dphi_dt);
    }
    double dphi_dx(double t, double x) const {
        return blend(t, x, &FieldSlice::dphi_dx);
    }

private:
    double blend(double t, double x, ArrayXd FieldSlice::* member) const {
        const double v0 = grid->interp(s0->*member, x);
        if (s0 == s1 || s1->t == s0->t) return v0;
        const double v1 = grid->interp(s1->*member, x);
        double tau = (t - s0->t) / (s1->t - s0->t);
        if (tau < 0.0) tau = 0.0;
        if (tau > 1.0) tau = 1.0;
        return (1.0 - tau) * v0 + tau * v1;
    }
};

struct PhaseDeriv {
    double dx;
    Vector3d dp;
};

/// dx/ds = p1/sqrt(1+p^2), dp/ds = -(S phi) p - (1+p^2)^{-1/2} grad phi,
/// with S phi = d_t phi + (p1/gamma) d_x phi in slab symmetry.
PhaseDeriv characteristic_rhs(double x, const Vector3d& p,
                              const ForceField& field, double t);

/// Explicit midpoint (RK2): stage 1 at (t, z), stage 2 at t + dt/2 with
/// time-interpolated fields. Invariants a, m, c are untouched.
void push(Ensemble& ens, const ForceField& field, double t, double dt,
          int threads = 1);

/// Source moments at one time, all divided by dx (densities per unit x).
/// mu >= 0, sigma >= 0, rho >= 0 and |j| <= rho hold by construction.
struct MomentGrids {
    ArrayXd mu;     // int f dp / sqrt(1+p^2)
    ArrayXd sigma;  // int f dp
    ArrayXd rho;    // e^{-phi} sigma
    ArrayXd j;      // e^{-phi} int phat_1 f dp
    ArrayXd ekin;   // int sqrt(1+p^2) f dp
    ArrayXd mom;    // int p_1 f dp

    static MomentGrids zero(int nx);
};

/// Cloud-in-cell deposition of the reconstructed f-values: per particle
/// f = a e^{4 phi}, V = c e^{-3 phi}, both from phi interpolated at the
/// particle position on the given slice.
MomentGrids deposit(const Ensemble& ens, const FieldSlice& slice,
                    const SpatialGrid& grid, int threads = 1);

struct SimState {
    double t = 0.0;
    int step = 0;
    Ensemble ens;
    MuHistory hist;
    FieldSlice slice;
    MomentGrids moments;
};

/// One predictor-corrector cycle: Euler predictor on the current slice,
/// provisional deposit, one field assembly at t + dt, RK2 corrector with
/// both slices, final deposit overwriting the provisional level. Works
/// with negative dt against an existing history (time reversal).
void advance(SimState& state, const FieldAssembler& assembler, double dt,
             int threads = 1);

}  // namespace nv

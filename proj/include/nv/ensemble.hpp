#pragma once

#include <Eigen/Dense>
#include <functional>

#include "nv/config.hpp"
#include "nv/initial_data.hpp"

namespace nv {

/// Characteristic-curve samples, structure-of-arrays. x and p evolve; the
/// per-particle invariants a (Vlasov invariant f e^{-4 phi}), m (mass
/// charge f V0 e^{-phi}) and c (Casimir volume factor V0 e^{3 phi}) are
/// fixed at creation and never mutated. m = a * c by construction.
struct Ensemble {
    Eigen::ArrayXd x;
    Eigen::ArrayXd p1, p2, p3;
    Eigen::ArrayXd a, m, c;

    long size() const { return static_cast<long>(x.size()); }
    void resize(long n) {
        x.resize(n);
        p1.resize(n);
        p2.resize(n);
        p3.resize(n);
        a.resize(n);
        m.resize(n);
        c.resize(n);
    }
    double gamma(long k) const {
        return std::sqrt(1.0 + p1[k] * p1[k] + p2[k] * p2[k] + p3[k] * p3[k]);
    }
};

struct SampleStrides {
    int nx;  // spatial cells
    int np;  // momentum cells per axis
};

SampleStrides resolve_strides(const SimConfig& cfg);

/// Deterministic tensor-grid (quiet start) sampling of f_in over its
/// support box; cells with f_in = 0 produce no particle. phi0_at is the
/// effective initial field (mollified when the run is regularized).
Ensemble sample_ensemble(const InitialData& data, const SimConfig& cfg,
                         const std::function<double(double)>& phi0_at);

}  // namespace nv

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "nv/grid.hpp"
#include "nv/initial_data.hpp"

namespace nv {

struct HistoryGap : std::runtime_error {
    explicit HistoryGap(const std::string& w) : std::runtime_error(w) {}
};
struct NegativeSource : std::runtime_error {
    explicit NegativeSource(const std::string& w) : std::runtime_error(w) {}
};
struct KernelWiderThanDomain : std::runtime_error {
    explicit KernelWiderThanDomain(const std::string& w)
        : std::runtime_error(w) {}
};

/// Discrete even non-negative unit-mass kernel of radius 1/n on the grid
/// spacing dx. n = 0 (or a radius below dx) degenerates to the identity.
struct Mollifier {
    int n = 0;
    int half = 0;         // kernel covers nodes -half..half
    ArrayXd weights;      // length 2*half+1, sums to exactly 1

    static Mollifier make(int n, double dx, int nx);
    bool identity() const { return half == 0; }
    ArrayXd apply(const ArrayXd& g, int times) const;
};

/// Field initial data in a form the d'Alembert evaluation can consume:
/// phi0, its analytic derivative, phi1, and a precomputed cumulative
/// quadrature of phi1. Two constructions: directly from the analytic
/// callables, or from mollified grid samples via cubic splines.
struct WaveData1D {
    std::function<double(double)> phi0;
    std::function<double(double)> dphi0;
    std::function<double(double)> phi1;
    std::function<double(double, double)> phi1_integral;  // over [a, b]

    static WaveData1D analytic(const InitialData& data, const SpatialGrid& grid,
                               int refine = 8);
    static WaveData1D mollified(const InitialData& data,
                                const SpatialGrid& grid, const Mollifier& moll);
    static WaveData1D zero();
};

/// phi = phi_hom + psi holds pointwise by construction; psi <= 0 for
/// non-negative source histories.
struct FieldSlice {
    double t = 0.0;
    ArrayXd phi, dphi_dt, dphi_dx;
    ArrayXd phi_hom, psi;

    static FieldSlice zero(double t, int nx);
};

/// Append-only ring of source grids, level k at time k*dt. Levels beyond
/// the requested evaluation time are ignored, which lets a reversed run
/// overwrite the tail of a forward history.
struct MuHistory {
    double dt = 0.0;
    std::vector<ArrayXd> levels;

    int size() const { return static_cast<int>(levels.size()); }
    /// k == size() appends, k < size() overwrites; both validate mu >= 0.
    void set_level(int k, const ArrayXd& mu);
    int level_for(double t) const;  // throws HistoryGap when uncovered
};

struct HomFields {
    ArrayXd phi, dphi_dt, dphi_dx;
};

/// Classical d'Alembert solution of the homogeneous 1D wave equation,
/// with derivatives from the differentiated representation.
HomFields eval_phi_hom(const WaveData1D& data, double t, const SpatialGrid& grid);

/// Retarded integral over the backward light triangle: trapezoid in s,
/// exact integration of the linear interpolant in y. All quadrature
/// weights are non-negative, so psi <= 0 holds exactly in floating point
/// whenever the history is non-negative.
HomFields duhamel_psi(const MuHistory& hist, double t, const SpatialGrid& grid);

/// Composes the homogeneous and retarded parts into one slice; mu levels
/// are smoothed `mu_smoothing` times with the mollifier first (2 for the
/// regularized system, 1 for its once-smoothed companion field).
struct FieldAssembler {
    SpatialGrid grid;
    WaveData1D data;
    Mollifier moll;
    int mu_smoothing = 2;
    bool force_zero = false;

    FieldSlice assemble(const MuHistory& hist, double t) const;
};

}  // namespace nv

#pragma once

#include <string>
#include <vector>

#include "nv/config.hpp"
#include "nv/initial_data.hpp"
#include "nv/kinetic.hpp"

namespace nv {

struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& w) : std::runtime_error(w) {}
};

/// Field records at a fixed set of sample times on one grid.
struct FieldSnapshots {
    SpatialGrid grid;
    std::vector<double> times;
    std::vector<ArrayXd> mu;
    std::vector<ArrayXd> phi;
};

/// Discrete space-time L2 for mu and phi, L4 for e^phi on a compact box,
/// trapezoid weights in both t and x.
struct MetricTriple {
    double mu_l2 = 0.0;
    double phi_l2 = 0.0;
    double ephi_l4 = 0.0;
};

struct CompactBox {
    double x_lo = 0.0;
    double x_hi = 0.0;
};

MetricTriple cauchy_metrics(const FieldSnapshots& a, const FieldSnapshots& b,
                            const CompactBox& box);

struct LadderRung {
    int n = 0;
    double energy0 = 0.0;
    double energy_max = 0.0;
    double energy_ratio = 0.0;        // max_t energy / reference energy
    double field_energy_max = 0.0;    // field part only, this rung
    double companion_field_energy_max = 0.0;  // once-smoothed companion
    FieldSnapshots snaps;
};

struct LadderReport {
    std::vector<int> n_list;
    std::vector<LadderRung> rungs;
    std::vector<MetricTriple> metrics;  // consecutive pairs
    double reference_energy0 = 0.0;     // unmollified initial energy
    double energy_tol = 0.02;
    double companion_tol = 0.02;

    bool energy_uniform_ok() const;
    bool companion_ok() const;
    std::string csv() const;
    /// one two-column (n, metric) file per metric, keyed by metric name
    std::vector<std::pair<std::string, std::string>> metric_files() const;
};

/// Runs the coupled solver once per n on a shared grid and time box and
/// computes consecutive Cauchy metrics plus the n-uniform energy bound.
/// Requires at least two strictly increasing rungs.
LadderReport run_ladder(const SimConfig& cfg, const InitialData& data,
                        const std::vector<int>& n_list);

}  // namespace nv

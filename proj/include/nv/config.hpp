#pragma once

#include <string>
#include <vector>

#include "nv/grid.hpp"

namespace nv {

/// Run parameters. Units are geometric: particle mass, the gravitational
/// constant, and the speed of light all equal one.
struct SimConfig {
    // domain and discretization
    double x_min = -24.0;
    double x_max = 24.0;
    int nx = 512;
    double dt = 0.0;          // explicit step; 0 means use dt_over_dx
    double dt_over_dx = 0.5;  // step as a fraction of dx (<= 1)
    double t_final = 2.0;

    // phase-space sampling (quiet start)
    long n_particles = 200000;  // target cell count when strides unset
    int sample_nx = 0;          // explicit spatial stride (0 = derive)
    int sample_np = 0;          // explicit per-axis momentum stride

    // regularization
    int mollifier_n = 0;  // 0 = no mollification

    std::string deposition = "cic";
    double margin = 1.0;  // light-cone slack between support and boundary

    // initial-data catalog
    std::string profile = "gaussian-bump";  // | two-stream | vacuum | table
    std::string table_path;
    double support_radius = 2.0;
    double f_amp = 1.0;
    double p_max = 1.5;
    double p_drift = 0.8;
    double phi0_amp = 0.05;
    double phi1_amp = 0.0;

    // diagnostics
    double momentum_warn_factor = 2.0;
    bool force_zero_fields = false;  // free-transport validation mode

    // output
    std::string out_dir = "out";
    int snapshot_stride = 0;  // 0 = no snapshots
    int threads = 1;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double step_size() const { return dt > 0.0 ? dt : dt_over_dx * dx(); }
    int n_steps() const;
    SpatialGrid grid() const { return SpatialGrid{x_min, x_max, nx}; }
};

/// Parse the key = value configuration format ('#' starts a comment).
SimConfig parse_config_file(const std::string& path);
SimConfig parse_config_text(const std::string& text);

/// One line per entry, for print-config-schema and the README.
std::string config_schema();

struct InitialData;

/// Every violated invariant is reported; an empty vector means accepted.
std::vector<std::string> validate_config(const SimConfig& cfg,
                                         const InitialData& data);

}  // namespace nv

#pragma once

#include <string>

#include "nv/kinetic.hpp"

namespace nv {

/// Binary state snapshot, magic "NVKN", version 1, little-endian 64-bit
/// floats throughout; grid and particle counts declared in the header and
/// validated against the payload on read. Round-trips bitwise.
struct Snapshot {
    static constexpr uint32_t kVersion = 1;

    double t = 0.0;
    SpatialGrid grid;
    ArrayXd phi, dphi_dt, dphi_dx, psi;
    ArrayXd mu, sigma, rho, j, ekin;
    Ensemble particles;

    static Snapshot from_state(const SimState& state, const SpatialGrid& grid);
    void write(const std::string& path) const;
    static Snapshot read(const std::string& path);
};

}  // namespace nv

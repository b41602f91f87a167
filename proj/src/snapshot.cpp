#include "nv/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nv {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

namespace {

void put_u32(std::ostream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ostream& os, uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_array(std::ostream& os, const ArrayXd& a) {
    os.write(reinterpret_cast<const char*>(a.data()),
             static_cast<std::streamsize>(a.size() * sizeof(double)));
}

uint32_t get_u32(std::istream& is) {
    uint32_t v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
uint64_t get_u64(std::istream& is) {
    uint64_t v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
double get_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
ArrayXd get_array(std::istream& is, long n) {
    ArrayXd a(n);
    is.read(reinterpret_cast<char*>(a.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    return a;
}

}  // namespace

Snapshot Snapshot::from_state(const SimState& state, const SpatialGrid& grid) {
    Snapshot s;
    s.t = state.t;
    s.grid = grid;
    s.phi = state.slice.phi;
    s.dphi_dt = state.slice.dphi_dt;
    s.dphi_dx = state.slice.dphi_dx;
    s.psi = state.slice.psi;
    s.mu = state.moments.mu;
    s.sigma = state.moments.sigma;
    s.rho = state.moments.rho;
    s.j = state.moments.j;
    s.ekin = state.moments.ekin;
    s.particles = state.ens;
    return s;
}

void Snapshot::write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write snapshot: " + path);
    os.write("NVKN", 4);
    put_u32(os, kVersion);
    put_f64(os, t);
    put_u64(os, static_cast<uint64_t>(grid.nx));
    put_f64(os, grid.x_min);
    put_f64(os, grid.x_max);
    put_u64(os, static_cast<uint64_t>(particles.size()));
    for (const ArrayXd* g : {&phi, &dphi_dt, &dphi_dx, &psi, &mu, &sigma, &rho,
                             &j, &ekin})
        put_array(os, *g);
    for (const ArrayXd* g : {&particles.x, &particles.p1, &particles.p2,
                             &particles.p3, &particles.a, &particles.m,
                             &particles.c})
        put_array(os, *g);
    if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

Snapshot Snapshot::read(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read snapshot: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "NVKN", 4) != 0)
        throw std::runtime_error("bad snapshot magic: " + path);
    const uint32_t version = get_u32(is);
    if (version != kVersion)
        throw std::runtime_error("snapshot version mismatch: " + path);
    Snapshot s;
    s.t = get_f64(is);
    const long nx = static_cast<long>(get_u64(is));
    s.grid.x_min = get_f64(is);
    s.grid.x_max = get_f64(is);
    s.grid.nx = static_cast<int>(nx);
    const long np = static_cast<long>(get_u64(is));
    if (nx < 2 || np < 0)
        throw std::runtime_error("bad snapshot header counts: " + path);
    for (ArrayXd* g : {&s.phi, &s.dphi_dt, &s.dphi_dx, &s.psi, &s.mu, &s.sigma,
                       &s.rho, &s.j, &s.ekin})
        *g = get_array(is, nx);
    s.particles.resize(np);
    for (ArrayXd* g : {&s.particles.x, &s.particles.p1, &s.particles.p2,
                       &s.particles.p3, &s.particles.a, &s.particles.m,
                       &s.particles.c})
        *g = get_array(is, np);
    if (!is) throw std::runtime_error("snapshot payload shorter than header: " + path);
    is.peek();
    if (!is.eof())
        throw std::runtime_error("snapshot payload longer than header: " + path);
    return s;
}

}  // namespace nv

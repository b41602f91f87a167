#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "nv/simulation.hpp"
#include "nv/snapshot.hpp"

using nv::SimConfig;
using nv::Snapshot;

namespace {

const char* kPath = "/tmp/nv_snapshot_test.nvkn";

Snapshot sample_snapshot() {
    SimConfig cfg;
    cfg.x_min = -8.0;
    cfg.x_max = 8.0;
    cfg.nx = 65;
    cfg.t_final = 0.5;
    cfg.f_amp = 0.3;
    cfg.sample_nx = 8;
    cfg.sample_np = 6;
    nv::Simulation sim(cfg, nv::make_initial_data(cfg));
    sim.init();
    sim.step();
    sim.step();
    return Snapshot::from_state(sim.state(), sim.grid());
}

}  // namespace

TEST_CASE("snapshot round-trips bitwise") {
    const Snapshot s = sample_snapshot();
    s.write(kPath);
    const Snapshot r = Snapshot::read(kPath);
    CHECK(r.t == s.t);
    CHECK(r.grid.nx == s.grid.nx);
    CHECK(r.grid.x_min == s.grid.x_min);
    CHECK(r.grid.x_max == s.grid.x_max);
    CHECK((r.phi == s.phi).all());
    CHECK((r.dphi_dt == s.dphi_dt).all());
    CHECK((r.dphi_dx == s.dphi_dx).all());
    CHECK((r.psi == s.psi).all());
    CHECK((r.mu == s.mu).all());
    CHECK((r.sigma == s.sigma).all());
    CHECK((r.rho == s.rho).all());
    CHECK((r.j == s.j).all());
    CHECK((r.ekin == s.ekin).all());
    REQUIRE(r.particles.size() == s.particles.size());
    CHECK((r.particles.x == s.particles.x).all());
    CHECK((r.particles.p1 == s.particles.p1).all());
    CHECK((r.particles.p2 == s.particles.p2).all());
    CHECK((r.particles.p3 == s.particles.p3).all());
    CHECK((r.particles.a == s.particles.a).all());
    CHECK((r.particles.m == s.particles.m).all());
    CHECK((r.particles.c == s.particles.c).all());
    // writing the reread snapshot reproduces the file bytes
    const char* second = "/tmp/nv_snapshot_test2.nvkn";
    r.write(second);
    std::ifstream f1(kPath, std::ios::binary), f2(second, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), {});
    const std::string b2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(b1 == b2);
    CHECK(!b1.empty());
}

TEST_CASE("snapshot read rejects corrupted files") {
    const Snapshot s = sample_snapshot();
    s.write(kPath);
    std::ifstream in(kPath, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    in.close();

    auto write_bytes = [](const std::string& b) {
        std::ofstream os("/tmp/nv_snapshot_bad.nvkn", std::ios::binary);
        os.write(b.data(), static_cast<std::streamsize>(b.size()));
    };

    // bad magic
    std::string bad = bytes;
    bad[0] = 'X';
    write_bytes(bad);
    CHECK_THROWS(Snapshot::read("/tmp/nv_snapshot_bad.nvkn"));

    // version mismatch
    bad = bytes;
    bad[4] = 99;
    write_bytes(bad);
    CHECK_THROWS(Snapshot::read("/tmp/nv_snapshot_bad.nvkn"));

    // truncated payload
    write_bytes(bytes.substr(0, bytes.size() - 16));
    CHECK_THROWS(Snapshot::read("/tmp/nv_snapshot_bad.nvkn"));

    // trailing junk
    write_bytes(bytes + "extra");
    CHECK_THROWS(Snapshot::read("/tmp/nv_snapshot_bad.nvkn"));

    CHECK_THROWS(Snapshot::read("/tmp/nv_missing_snapshot.nvkn"));
}

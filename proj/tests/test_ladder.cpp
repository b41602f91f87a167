#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nv/ladder.hpp"

using nv::ArrayXd;
using nv::CompactBox;
using nv::FieldSnapshots;
using nv::MetricTriple;
using nv::SimConfig;
using nv::SpatialGrid;

namespace {

FieldSnapshots make_snaps(const SpatialGrid& grid,
                          const std::vector<double>& times, double mu_val,
                          double phi_val) {
    FieldSnapshots s;
    s.grid = grid;
    s.times = times;
    for (size_t k = 0; k < times.size(); ++k) {
        s.mu.push_back(ArrayXd::Constant(grid.nx, mu_val));
        s.phi.push_back(ArrayXd::Constant(grid.nx, phi_val));
    }
    return s;
}

}  // namespace

TEST_CASE("identical snapshot sets have zero distance") {
    SpatialGrid grid{-4.0, 4.0, 33};
    const auto a = make_snaps(grid, {0.0, 0.5, 1.0}, 1.0, 0.2);
    const auto m = nv::cauchy_metrics(a, a, CompactBox{-2.0, 2.0});
    CHECK(m.mu_l2 == 0.0);
    CHECK(m.phi_l2 == 0.0);
    CHECK(m.ephi_l4 == 0.0);
}

TEST_CASE("constant difference gives c sqrt(V) in the L2 metric") {
    SpatialGrid grid{-4.0, 4.0, 201};
    const std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto a = make_snaps(grid, times, 0.0, 0.0);
    const auto b = make_snaps(grid, times, 0.7, 0.0);
    const auto m = nv::cauchy_metrics(a, b, CompactBox{-4.0, 4.0});
    // spacetime measure: T = 1 in time, L = 8 in space
    CHECK(m.mu_l2 == doctest::Approx(0.7 * std::sqrt(8.0)).epsilon(1e-12));
    CHECK(m.phi_l2 == 0.0);
}

TEST_CASE("bump against zero recovers its quadrature norm") {
    SpatialGrid grid{-4.0, 4.0, 801};
    const std::vector<double> times = {0.0, 1.0};
    auto a = make_snaps(grid, times, 0.0, 0.0);
    auto b = a;
    ArrayXd bumpv(grid.nx);
    for (int i = 0; i < grid.nx; ++i)
        bumpv[i] = nv::bump(grid.node(i) / 2.0);
    for (auto& g : b.mu) g = bumpv;
    const auto m = nv::cauchy_metrics(a, b, CompactBox{-4.0, 4.0});
    // independent fine quadrature of int bump(x/2)^2 dx
    double ref = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const double x = -4.0 + (i + 0.5) * 8.0 / n;
        ref += nv::bump(x / 2.0) * nv::bump(x / 2.0);
    }
    ref *= 8.0 / n;
    CHECK(m.mu_l2 == doctest::Approx(std::sqrt(ref)).epsilon(1e-5));
}

TEST_CASE("metrics are symmetric and satisfy the triangle inequality") {
    SpatialGrid grid{-4.0, 4.0, 65};
    const std::vector<double> times = {0.0, 0.5, 1.0};
    auto a = make_snaps(grid, times, 0.0, 0.0);
    auto b = make_snaps(grid, times, 0.0, 0.0);
    auto c = make_snaps(grid, times, 0.0, 0.0);
    unsigned st = 77;
    auto rnd = [&st] {
        st = st * 1664525u + 1013904223u;
        return (st >> 8) * (1.0 / (1 << 24));
    };
    for (auto* s : {&a, &b, &c})
        for (size_t k = 0; k < times.size(); ++k)
            for (int i = 0; i < grid.nx; ++i) {
                s->mu[k][i] = rnd();
                s->phi[k][i] = rnd() - 0.5;
            }
    const CompactBox box{-3.0, 3.0};
    const auto mab = nv::cauchy_metrics(a, b, box);
    const auto mba = nv::cauchy_metrics(b, a, box);
    const auto mac = nv::cauchy_metrics(a, c, box);
    const auto mcb = nv::cauchy_metrics(c, b, box);
    CHECK(mab.mu_l2 == mba.mu_l2);
    CHECK(mab.phi_l2 == mba.phi_l2);
    CHECK(mab.ephi_l4 == doctest::Approx(mba.ephi_l4).epsilon(1e-14));
    CHECK(mab.mu_l2 <= mac.mu_l2 + mcb.mu_l2 + 1e-12);
    CHECK(mab.phi_l2 <= mac.phi_l2 + mcb.phi_l2 + 1e-12);
    CHECK(mab.ephi_l4 <= mac.ephi_l4 + mcb.ephi_l4 + 1e-12);
}

TEST_CASE("mismatched frames are rejected") {
    SpatialGrid g1{-4.0, 4.0, 33};
    SpatialGrid g2{-4.0, 4.0, 65};
    const auto a = make_snaps(g1, {0.0, 1.0}, 0.0, 0.0);
    const auto b = make_snaps(g2, {0.0, 1.0}, 0.0, 0.0);
    CHECK_THROWS_AS((void)nv::cauchy_metrics(a, b, CompactBox{-1.0, 1.0}),
                    nv::GridMismatch);
    const auto c = make_snaps(g1, {0.0, 0.5}, 0.0, 0.0);
    CHECK_THROWS_AS((void)nv::cauchy_metrics(a, c, CompactBox{-1.0, 1.0}),
                    nv::GridMismatch);
}

TEST_CASE("ladder rejects degenerate rung lists") {
    SimConfig cfg;
    const auto data = nv::make_initial_data(cfg);
    CHECK_THROWS_AS((void)nv::run_ladder(cfg, data, {4}), std::invalid_argument);
    CHECK_THROWS_AS((void)nv::run_ladder(cfg, data, {8, 4}),
                    std::invalid_argument);
}

TEST_CASE("vacuum ladder yields zero metrics and passes the energy bound") {
    SimConfig cfg;
    cfg.profile = "vacuum";
    cfg.x_min = -8.0;
    cfg.x_max = 8.0;
    cfg.nx = 129;
    cfg.t_final = 0.5;
    const auto data = nv::make_initial_data(cfg);
    const auto rep = nv::run_ladder(cfg, data, {4, 8});
    REQUIRE(rep.metrics.size() == 1);
    CHECK(rep.metrics[0].mu_l2 == 0.0);
    CHECK(rep.metrics[0].phi_l2 == 0.0);
    CHECK(rep.metrics[0].ephi_l4 == 0.0);
    CHECK(rep.energy_uniform_ok());
    CHECK(rep.companion_ok());
    CHECK(rep.csv().find("\n") != std::string::npos);
    CHECK(rep.metric_files().size() == 3);
}

TEST_CASE("small coupled ladder produces finite decreasing-scale metrics") {
    SimConfig cfg;
    cfg.x_min = -8.0;
    cfg.x_max = 8.0;
    cfg.nx = 257;
    cfg.t_final = 0.5;
    cfg.f_amp = 0.3;
    cfg.sample_nx = 16;
    cfg.sample_np = 8;
    const auto data = nv::make_initial_data(cfg);
    // rungs chosen so every mollifier radius spans at least one cell;
    // an identity-kernel rung keeps deposition noise and breaks the ordering
    const auto rep = nv::run_ladder(cfg, data, {2, 4, 8});
    REQUIRE(rep.rungs.size() == 3);
    REQUIRE(rep.metrics.size() == 2);
    for (const auto& m : rep.metrics) {
        CHECK(std::isfinite(m.mu_l2));
        CHECK(std::isfinite(m.phi_l2));
        CHECK(std::isfinite(m.ephi_l4));
    }
    CHECK(rep.metrics[1].mu_l2 < rep.metrics[0].mu_l2);
    CHECK(rep.metrics[1].phi_l2 < rep.metrics[0].phi_l2);
    CHECK(rep.energy_uniform_ok());
    CHECK(rep.companion_ok());
}

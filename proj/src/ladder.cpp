#include "nv/ladder.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nv/diagnostics.hpp"
#include "nv/simulation.hpp"

namespace nv {

namespace {

bool same_frame(const FieldSnapshots& a, const FieldSnapshots& b) {
    if (a.grid.nx != b.grid.nx || a.grid.x_min != b.grid.x_min ||
        a.grid.x_max != b.grid.x_max)
        return false;
    if (a.times.size() != b.times.size()) return false;
    for (size_t k = 0; k < a.times.size(); ++k)
        if (a.times[k] != b.times[k]) return false;
    return true;
}

// trapezoid weights over sample times (half weight at the ends)
std::vector<double> time_weights(const std::vector<double>& times) {
    const size_t n = times.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) {
        if (n == 1) w[0] = 1.0;
        return w;
    }
    for (size_t k = 0; k + 1 < n; ++k) {
        const double h = times[k + 1] - times[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    return w;
}

double field_energy(const FieldSlice& slice, const SpatialGrid& grid) {
    const ArrayXd dens =
        0.5 * (slice.dphi_dt.square() + slice.dphi_dx.square());
    return trapezoid(dens, grid.dx());
}

}  // namespace

MetricTriple cauchy_metrics(const FieldSnapshots& a, const FieldSnapshots& b,
                            const CompactBox& box) {
    if (!same_frame(a, b))
        throw GridMismatch("cauchy_metrics: grids or sample times differ");
    const SpatialGrid& grid = a.grid;
    const double dx = grid.dx();
    ArrayXd wx = ArrayXd::Constant(grid.nx, dx);
    wx[0] = 0.5 * dx;
    wx[grid.nx - 1] = 0.5 * dx;
    // box weights: trapezoid over the nodes inside [x_lo, x_hi]
    int lo = 0, hi = grid.nx - 1;
    while (lo < grid.nx && grid.node(lo) < box.x_lo) ++lo;
    while (hi >= 0 && grid.node(hi) > box.x_hi) --hi;
    ArrayXd wbox = ArrayXd::Zero(grid.nx);
    if (lo <= hi) {
        wbox.segment(lo, hi - lo + 1).setConstant(dx);
        wbox[lo] = 0.5 * dx;
        wbox[hi] = 0.5 * dx;
        if (lo == hi) wbox[lo] = dx;
    }

    const std::vector<double> wt = time_weights(a.times);
    double s_mu = 0.0, s_phi = 0.0, s_ephi = 0.0;
    for (size_t k = 0; k < a.times.size(); ++k) {
        const ArrayXd dmu = a.mu[k] - b.mu[k];
        const ArrayXd dphi = a.phi[k] - b.phi[k];
        const ArrayXd dephi = a.phi[k].exp() - b.phi[k].exp();
        s_mu += wt[k] * (wx * dmu.square()).sum();
        s_phi += wt[k] * (wx * dphi.square()).sum();
        s_ephi += wt[k] * (wbox * dephi.square().square()).sum();
    }
    MetricTriple m;
    m.mu_l2 = std::sqrt(s_mu);
    m.phi_l2 = std::sqrt(s_phi);
    m.ephi_l4 = std::pow(s_ephi, 0.25);
    return m;
}

LadderReport run_ladder(const SimConfig& cfg, const InitialData& data,
                        const std::vector<int>& n_list) {
    if (n_list.size() < 2)
        throw std::invalid_argument("ladder needs at least 2 rungs");
    for (size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] <= n_list[k - 1])
            throw std::invalid_argument("ladder n values must strictly increase");

    LadderReport report;
    report.n_list = n_list;

    // reference: initial energy of the unmollified system
    {
        SimConfig base = cfg;
        base.mollifier_n = 0;
        Simulation sim(base, data);
        sim.init();
        auto [ek, ef, et] = DiagnosticsMonitor::energy(
            sim.state().ens, sim.state().slice, base.grid());
        (void)ek;
        (void)ef;
        report.reference_energy0 = et;
    }

    for (int n : n_list) {
        SimConfig rung_cfg = cfg;
        rung_cfg.mollifier_n = n;
        Simulation sim(rung_cfg, data);
        LadderRung rung;
        rung.n = n;
        rung.snaps.grid = rung_cfg.grid();
        bool first = true;
        sim.run([&](const SimState& state) {
            rung.snaps.times.push_back(state.t);
            rung.snaps.mu.push_back(state.moments.mu);
            rung.snaps.phi.push_back(state.slice.phi);
            auto [ek, ef, et] = DiagnosticsMonitor::energy(
                state.ens, state.slice, rung.snaps.grid);
            (void)ek;
            if (first) {
                rung.energy0 = et;
                first = false;
            }
            rung.energy_max = std::max(rung.energy_max, et);
            const double fe = field_energy(state.slice, rung.snaps.grid);
            rung.field_energy_max = std::max(rung.field_energy_max, fe);
            const FieldSlice companion = sim.assemble_companion(state.t);
            rung.companion_field_energy_max = std::max(
                rung.companion_field_energy_max,
                field_energy(companion, rung.snaps.grid));
        });
        const double ref = std::max(report.reference_energy0, 1e-300);
        rung.energy_ratio = rung.energy_max / ref;
        report.rungs.push_back(std::move(rung));
    }

    const CompactBox box{-(data.support_radius + cfg.t_final),
                         data.support_radius + cfg.t_final};
    for (size_t k = 0; k + 1 < report.rungs.size(); ++k)
        report.metrics.push_back(cauchy_metrics(report.rungs[k].snaps,
                                                report.rungs[k + 1].snaps, box));
    return report;
}

bool LadderReport::energy_uniform_ok() const {
    if (reference_energy0 == 0.0) {
        for (const auto& r : rungs)
            if (r.energy_max > energy_tol) return false;
        return true;
    }
    for (const auto& r : rungs)
        if (r.energy_ratio > 1.0 + energy_tol) return false;
    return true;
}

bool LadderReport::companion_ok() const {
    for (const auto& r : rungs) {
        const double slack = companion_tol * std::max(1.0, r.companion_field_energy_max);
        if (r.field_energy_max > r.companion_field_energy_max + slack)
            return false;
    }
    return true;
}

std::string LadderReport::csv() const {
    std::string out =
        "n,energy0,energy_max,energy_ratio,field_energy_max,"
        "companion_field_energy_max,mu_l2_next,phi_l2_next,ephi_l4_next\n";
    char buf[320];
    for (size_t k = 0; k < rungs.size(); ++k) {
        const bool has_pair = k < metrics.size();
        std::snprintf(buf, sizeof(buf),
                      "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      rungs[k].n, rungs[k].energy0, rungs[k].energy_max,
                      rungs[k].energy_ratio, rungs[k].field_energy_max,
                      rungs[k].companion_field_energy_max,
                      has_pair ? metrics[k].mu_l2 : 0.0,
                      has_pair ? metrics[k].phi_l2 : 0.0,
                      has_pair ? metrics[k].ephi_l4 : 0.0);
        out += buf;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> LadderReport::metric_files()
    const {
    auto column = [&](double MetricTriple::* member) {
        std::string out;
        char buf[80];
        for (size_t k = 0; k < metrics.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%d %.17g\n", rungs[k].n,
                          metrics[k].*member);
            out += buf;
        }
        return out;
    };
    return {{"mu_l2", column(&MetricTriple::mu_l2)},
            {"phi_l2", column(&MetricTriple::phi_l2)},
            {"ephi_l4", column(&MetricTriple::ephi_l4)}};
}

}  // namespace nv

// Acceptance gate: one line per criterion on stdout, progress on stderr,
// exit code = number of failed criteria. Heavy runs are shared between
// criteria; the whole suite is sized for a single core.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "nv/flowcheck.hpp"
#include "nv/ladder.hpp"
#include "nv/simulation.hpp"
#include "nv/snapshot.hpp"

using nv::ArrayXd;
using nv::DiagnosticsMonitor;
using nv::RunSummary;
using nv::SimConfig;

namespace {

int g_failures = 0;

void criterion(int k, bool pass, const std::string& what,
               const std::string& detail) {
    if (!pass) ++g_failures;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << k << ": "
              << what << " (" << detail << ")\n"
              << std::flush;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

// Baseline: [-24,24], nx = 512, dt = dx/2, t_final = 2, Gaussian-bump data
// with spatial support radius 2, 48*16^3 = 196608 quiet-start particles.
// The amplitude keeps the run in the moderately coupled regime where the
// momentum support stays well inside its sampling box.
SimConfig baseline_cfg() {
    SimConfig cfg;
    cfg.f_amp = 0.3;
    cfg.sample_nx = 48;
    cfg.sample_np = 16;
    return cfg;
}

RunSummary run_monitored(const SimConfig& cfg) {
    const auto data = nv::make_initial_data(cfg);
    nv::Simulation sim(cfg, data);
    DiagnosticsMonitor mon(cfg.grid(), cfg.step_size(), data.support_radius);
    sim.run([&](const nv::SimState& st) { mon.record(st); });
    return mon.summary();
}

// Free transport of the Gaussian-bump data: sigma(t,x) reduced to a 2D
// quadrature in (r, u = cos theta) of
//   2 pi A int r^2 bump(r/P) int bump((x - (r u / gamma) t)/R0) du dr.
double sigma_oracle(double t, double x, double A, double P, double R0, int nq) {
    const double hr = P / nq;
    const double hu = 2.0 / nq;
    double total = 0.0;
    for (int i = 0; i < nq; ++i) {
        const double r = (i + 0.5) * hr;
        const double gamma = std::sqrt(1.0 + r * r);
        double inner = 0.0;
        for (int k = 0; k < nq; ++k) {
            const double u = -1.0 + (k + 0.5) * hu;
            inner += nv::bump((x - (r * u / gamma) * t) / R0);
        }
        total += r * r * nv::bump(r / P) * inner * hu;
    }
    return 2.0 * M_PI * A * total * hr;
}

// L1 distance between the deposited sigma at the final time and the oracle.
double free_transport_l1(const SimConfig& cfg, int nq) {
    const auto data = nv::make_initial_data(cfg);
    nv::Simulation sim(cfg, data);
    sim.run();
    const auto& st = sim.state();
    const auto grid = cfg.grid();
    double l1 = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        const double w = (i == 0 || i == grid.nx - 1) ? 0.5 : 1.0;
        const double ref = sigma_oracle(st.t, grid.node(i), cfg.f_amp,
                                        cfg.p_max, cfg.support_radius, nq);
        l1 += w * std::abs(st.moments.sigma[i] - ref);
    }
    return l1 * grid.dx();
}

}  // namespace

int main() {
    Timer total;

    // ---- baseline run: criteria 1, 2, 6 and the coarse half of 5 ----
    std::cerr << "[info] baseline run ([-24,24], nx=512, t_final=2)\n";
    const SimConfig base_cfg = baseline_cfg();
    Timer t_base;
    const RunSummary base = run_monitored(base_cfg);
    std::cerr << "[info] baseline done in " << fmt(t_base.seconds()) << " s\n";

    criterion(1, base.mass_bitwise && base.casimir_bitwise,
              "particle mass and Casimirs (q=1,2) bitwise constant",
              std::string("mass_bitwise=") + (base.mass_bitwise ? "1" : "0") +
                  " casimir_bitwise=" + (base.casimir_bitwise ? "1" : "0"));

    criterion(2, base.psi_max_global <= 0.0,
              "retarded field psi <= 0 at every node and step",
              "max psi = " + fmt(base.psi_max_global));

    // ---- prescribed-field flow checks: criteria 3 and 4 ----
    std::cerr << "[info] flow checks over the prescribed-field catalog\n";
    const auto rows = nv::run_flowcheck();
    bool jac_ok = true, liu_ok = true;
    double jac_worst = 0.0, liu_worst = 0.0;
    for (const auto& r : rows) {
        if (r.check == "jacobian") {
            jac_ok = jac_ok && r.pass;
            jac_worst = std::max(jac_worst, r.value);
        } else if (r.check == "liouville") {
            liu_ok = liu_ok && r.pass;
            liu_worst = std::max(liu_worst, r.value);
        }
    }
    criterion(3, jac_ok,
              "flow-map determinant matches exp(3 dphi) within 1e-6",
              "worst relative error = " + fmt(jac_worst) +
                  " over 20 points x 4 fields");
    criterion(4, liu_ok,
              "Liouville functional drift <= 1e-6 for q in {1,2,3}, t <= 2",
              "worst relative drift = " + fmt(liu_worst));

    // ---- refined run: criterion 5 (with the baseline) ----
    std::cerr << "[info] refined run (nx=1023, strides doubled)\n";
    SimConfig fine_cfg = baseline_cfg();
    fine_cfg.nx = 1023;  // nx - 1 doubles, so dx and dt halve exactly
    fine_cfg.sample_nx = 96;
    fine_cfg.sample_np = 32;
    Timer t_fine;
    const RunSummary fine = run_monitored(fine_cfg);
    std::cerr << "[info] refined done in " << fmt(t_fine.seconds()) << " s\n";

    auto ratio = [](double coarse, double refined) {
        return refined > 0.0 ? coarse / refined
                             : std::numeric_limits<double>::infinity();
    };
    const double r_mass = ratio(base.mass_grid_drift, fine.mass_grid_drift);
    const double r_energy = ratio(base.energy_drift, fine.energy_drift);
    const double r_mres = ratio(base.mass_residual_max, fine.mass_residual_max);
    const double r_eres =
        ratio(base.energy_residual_max, fine.energy_residual_max);
    const bool c5 = base.mass_grid_drift <= 0.02 && base.energy_drift <= 0.02 &&
                    r_mass >= 1.8 && r_energy >= 1.8 && r_mres >= 1.8 &&
                    r_eres >= 1.8;
    criterion(5, c5,
              "drifts <= 2% and shrink >= 1.8x under (dx, dt, sampling)/2",
              "mass drift " + fmt(base.mass_grid_drift) + " (x" + fmt(r_mass) +
                  "), energy drift " + fmt(base.energy_drift) + " (x" +
                  fmt(r_energy) + "), residual ratios x" + fmt(r_mres) + ", x" +
                  fmt(r_eres));

    const bool c6 = base.supnorm_slack_min >= -RunSummary::slack_tol &&
                    base.est2_slack_min >= -RunSummary::slack_tol &&
                    base.mu_slack_min >= -RunSummary::slack_tol &&
                    base.rho_slack_min >= -RunSummary::slack_tol &&
                    base.propagation_max == 0.0;
    criterion(6, c6, "a-priori inequality monitors never go negative",
              "slack mins " + fmt(base.supnorm_slack_min) + ", " +
                  fmt(base.est2_slack_min) + ", " + fmt(base.mu_slack_min) +
                  ", " + fmt(base.rho_slack_min) +
                  "; propagation excess = " + fmt(base.propagation_max));

    // ---- mollifier ladder: criterion 7 ----
    // Same initial data on a grid fine enough that every kernel radius 1/n
    // spans at least one cell; on the baseline spacing the two narrowest
    // kernels both degenerate to the identity and their Cauchy distance
    // measures only particle sampling noise. The light cone of the data
    // stays inside [-8,8] up to t = 2 (finite propagation), and the
    // particle count is raised so sampling noise sits below the n = 32
    // regularization error.
    std::cerr << "[info] ladder runs (n = 4, 8, 16, 32; nx=801 on [-8,8])\n";
    SimConfig lad_cfg = baseline_cfg();
    lad_cfg.x_min = -8.0;
    lad_cfg.x_max = 8.0;
    lad_cfg.nx = 801;
    lad_cfg.sample_nx = 64;
    lad_cfg.sample_np = 16;
    Timer t_lad;
    const auto lad_data = nv::make_initial_data(lad_cfg);
    const auto ladder = nv::run_ladder(lad_cfg, lad_data, {4, 8, 16, 32});
    std::cerr << "[info] ladder done in " << fmt(t_lad.seconds()) << " s\n";
    bool monotone = true;
    std::string chain;
    for (size_t k = 0; k < ladder.metrics.size(); ++k) {
        if (k > 0)
            monotone = monotone &&
                       ladder.metrics[k].mu_l2 < ladder.metrics[k - 1].mu_l2 &&
                       ladder.metrics[k].phi_l2 < ladder.metrics[k - 1].phi_l2;
        chain += (k ? " " : "") + fmt(ladder.metrics[k].mu_l2) + "/" +
                 fmt(ladder.metrics[k].phi_l2);
    }
    double worst_ratio = 0.0;
    for (const auto& rung : ladder.rungs)
        worst_ratio = std::max(worst_ratio, rung.energy_ratio);
    const bool c7 = monotone && ladder.energy_uniform_ok();
    criterion(7, c7,
              "Cauchy metrics decrease along n = 4,8,16,32 and energy(t) <= "
              "1.02 energy(0) per rung",
              "mu/phi pair metrics: " + chain +
                  "; worst energy ratio = " + fmt(worst_ratio));

    // ---- free-transport oracle: criterion 8 ----
    std::cerr << "[info] free-transport refinement pair\n";
    SimConfig ft_cfg = baseline_cfg();
    ft_cfg.x_min = -8.0;
    ft_cfg.x_max = 8.0;
    ft_cfg.nx = 257;
    ft_cfg.t_final = 1.0;
    ft_cfg.force_zero_fields = true;
    ft_cfg.sample_nx = 32;
    ft_cfg.sample_np = 12;
    const double e_coarse = free_transport_l1(ft_cfg, 256);
    ft_cfg.nx = 513;
    ft_cfg.sample_nx = 64;
    ft_cfg.sample_np = 24;
    const double e_fine = free_transport_l1(ft_cfg, 256);
    const double r_ft = ratio(e_coarse, e_fine);
    criterion(8, r_ft >= 3.0,
              "zero-field sigma matches the transported profile at O(dx^2)",
              "L1 errors " + fmt(e_coarse) + " -> " + fmt(e_fine) + " (x" +
                  fmt(r_ft) + " under halving, need >= 3)");

    // ---- time reversal: criterion 9 ----
    std::cerr << "[info] reversibility run (t = 0 -> 1 -> 0)\n";
    SimConfig rev_cfg = baseline_cfg();
    rev_cfg.t_final = 1.0;
    {
        const auto data = nv::make_initial_data(rev_cfg);
        nv::Simulation fwd(rev_cfg, data);
        fwd.init();
        const ArrayXd x0 = fwd.state().ens.x;
        fwd.run();
        fwd.run_reverse(0.0);
        const double err = (fwd.state().ens.x - x0).abs().maxCoeff();
        const double dt = rev_cfg.step_size();
        // second-order integrator: 10x its global accuracy scale dt^2
        const double tol = 10.0 * dt * dt;
        criterion(9, err <= tol,
                  "positions recovered after reversing the baseline from t=1",
                  "max |x - x0| = " + fmt(err) + ", tol = " + fmt(tol));
    }

    // ---- snapshot round-trip and determinism: criterion 10 ----
    std::cerr << "[info] snapshot round-trip and CSV determinism\n";
    SimConfig det_cfg;
    det_cfg.x_min = -8.0;
    det_cfg.x_max = 8.0;
    det_cfg.nx = 129;
    det_cfg.t_final = 0.5;
    det_cfg.f_amp = 0.3;
    det_cfg.sample_nx = 16;
    det_cfg.sample_np = 8;
    det_cfg.threads = 1;
    auto csv_run = [&det_cfg](nv::Snapshot* snap) {
        const auto data = nv::make_initial_data(det_cfg);
        nv::Simulation sim(det_cfg, data);
        DiagnosticsMonitor mon(det_cfg.grid(), det_cfg.step_size(),
                               data.support_radius);
        std::string csv = nv::diagnostics_csv_header();
        sim.run([&](const nv::SimState& st) {
            csv += nv::diagnostics_csv_row(mon.record(st));
        });
        if (snap) *snap = nv::Snapshot::from_state(sim.state(), sim.grid());
        return csv;
    };
    nv::Snapshot snap;
    const std::string csv1 = csv_run(&snap);
    const std::string csv2 = csv_run(nullptr);
    const char* p1 = "/tmp/nv_acceptance_snapshot.nvkn";
    const char* p2 = "/tmp/nv_acceptance_snapshot2.nvkn";
    snap.write(p1);
    nv::Snapshot::read(p1).write(p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), {});
    const std::string b2((std::istreambuf_iterator<char>(f2)), {});
    const bool roundtrip = !b1.empty() && b1 == b2;
    const bool deterministic = csv1 == csv2;
    criterion(10, roundtrip && deterministic,
              "snapshot write-read-write is bitwise and single-thread CSV is "
              "deterministic",
              std::string("roundtrip=") + (roundtrip ? "1" : "0") +
                  " identical_csv=" + (deterministic ? "1" : "0"));

    std::cerr << "[info] total acceptance time " << fmt(total.seconds())
              << " s\n";
    return g_failures;
}

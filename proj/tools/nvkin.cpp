// nvkin: slab-symmetric Nordstrom-Vlasov kinetic solver front end.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "nv/config.hpp"
#include "nv/diagnostics.hpp"
#include "nv/flowcheck.hpp"
#include "nv/initial_data.hpp"
#include "nv/ladder.hpp"
#include "nv/simulation.hpp"
#include "nv/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

int cmd_run(const std::string& config_path, int threads, int snapshot_stride,
            const std::string& out_override) {
    nv::SimConfig cfg;
    try {
        cfg = nv::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (threads > 0) cfg.threads = threads;
    if (snapshot_stride >= 0) cfg.snapshot_stride = snapshot_stride;
    if (!out_override.empty()) cfg.out_dir = out_override;

    nv::InitialData data;
    try {
        data = nv::make_initial_data(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const auto problems = nv::validate_config(cfg, data);
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << p << "\n";
        return 2;
    }

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    std::ofstream csv(out / "diagnostics.csv");
    csv << nv::diagnostics_csv_header();

    nv::Simulation sim(cfg, data);
    nv::DiagnosticsMonitor monitor(cfg.grid(), cfg.step_size(),
                                   data.support_radius,
                                   cfg.momentum_warn_factor);
    sim.run([&](const nv::SimState& state) {
        const auto& rec = monitor.record(state);
        csv << nv::diagnostics_csv_row(rec);
        if (cfg.snapshot_stride > 0 && state.step % cfg.snapshot_stride == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%06d.nvkn", state.step);
            nv::Snapshot::from_state(state, sim.grid())
                .write((out / name).string());
        }
    });
    csv.close();

    // plot-ready final field profile: x phi mu rho
    {
        std::ofstream prof(out / "fields_final.dat");
        const auto& st = sim.state();
        for (int i = 0; i < sim.grid().nx; ++i)
            prof << sim.grid().node(i) << ' ' << st.slice.phi[i] << ' '
                 << st.moments.mu[i] << ' ' << st.moments.rho[i] << '\n';
    }

    const nv::RunSummary summary = monitor.summary();
    std::cout << summary.report();
    return summary.monitors_pass() ? 0 : 1;
}

int cmd_verify_flow(const std::string& out_dir, double jacobian_exponent) {
    nv::FlowcheckOptions opts;
    opts.jacobian_exponent = jacobian_exponent;
    const auto rows = nv::run_flowcheck(opts);
    const std::string csv = nv::flowcheck_csv(rows);
    write_text(fs::path(out_dir) / "flowcheck.csv", csv);
    std::cout << csv;
    for (const auto& r : rows)
        if (!r.pass) return 1;
    return 0;
}

int cmd_ladder(const std::string& config_path, std::vector<int> n_list,
               int threads, const std::string& out_override) {
    nv::SimConfig cfg;
    try {
        cfg = nv::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (threads > 0) cfg.threads = threads;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (n_list.size() < 2) {
        std::cerr << "ladder needs at least 2 rungs\n";
        return 2;
    }
    nv::InitialData data;
    try {
        data = nv::make_initial_data(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const auto problems = nv::validate_config(cfg, data);
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << p << "\n";
        return 2;
    }

    nv::LadderReport report;
    try {
        report = nv::run_ladder(cfg, data, n_list);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    const fs::path out(cfg.out_dir);
    write_text(out / "ladder.csv", report.csv());
    for (const auto& [name, body] : report.metric_files())
        write_text(out / ("ladder_" + name + ".dat"), body);
    std::cout << report.csv();

    bool finite = true;
    for (const auto& m : report.metrics)
        finite = finite && std::isfinite(m.mu_l2) && std::isfinite(m.phi_l2) &&
                 std::isfinite(m.ephi_l4);
    const bool ok = finite && report.energy_uniform_ok();
    std::cout << (report.energy_uniform_ok() ? "[PASS]" : "[FAIL]")
              << " n-uniform energy bound\n";
    std::cout << (report.companion_ok() ? "[PASS]" : "[FAIL]")
              << " once-smoothed companion energy comparison\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nordstrom-Vlasov kinetic solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    int snapshot_stride = -1;

    auto* run = app.add_subcommand("run", "full coupled evolution");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--threads", threads, "worker threads (default 1)");
    run->add_option("--snapshot-stride", snapshot_stride,
                    "steps between snapshots (0 disables)");
    run->add_option("--out", out_dir, "output directory");

    double jacobian_exponent = 3.0;
    auto* vf = app.add_subcommand("verify-flow", "prescribed-field flow checks");
    vf->add_option("--out", out_dir, "output directory");
    vf->add_option("--jacobian-exponent", jacobian_exponent,
                   "determinant formula exponent")
        ->group("");  // hidden test hook

    std::vector<int> n_list;
    auto* ladder = app.add_subcommand("ladder", "regularization ladder study");
    ladder->add_option("--config", config_path, "configuration file")->required();
    ladder->add_option("--n", n_list, "mollifier parameters, ascending")
        ->required();
    ladder->add_option("--threads", threads, "worker threads (default 1)");
    ladder->add_option("--out", out_dir, "output directory");

    auto* schema =
        app.add_subcommand("print-config-schema", "list configuration keys");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, threads, snapshot_stride, out_dir);
        if (vf->parsed())
            return cmd_verify_flow(out_dir.empty() ? "out" : out_dir,
                                   jacobian_exponent);
        if (ladder->parsed())
            return cmd_ladder(config_path, n_list, threads, out_dir);
        if (schema->parsed()) {
            std::cout << nv::config_schema();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

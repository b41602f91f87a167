#include "nv/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nv/initial_data.hpp"

namespace nv {

int SimConfig::n_steps() const {
    return static_cast<int>(std::lround(t_final / step_size()));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

SimConfig parse_config_text(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto num = [&] { return std::stod(val); };
        if (key == "x_min") cfg.x_min = num();
        else if (key == "x_max") cfg.x_max = num();
        else if (key == "nx") cfg.nx = static_cast<int>(num());
        else if (key == "dt") cfg.dt = num();
        else if (key == "dt_over_dx") cfg.dt_over_dx = num();
        else if (key == "t_final") cfg.t_final = num();
        else if (key == "n_particles") cfg.n_particles = static_cast<long>(num());
        else if (key == "sample_nx") cfg.sample_nx = static_cast<int>(num());
        else if (key == "sample_np") cfg.sample_np = static_cast<int>(num());
        else if (key == "mollifier_n") cfg.mollifier_n = static_cast<int>(num());
        else if (key == "deposition") cfg.deposition = val;
        else if (key == "margin") cfg.margin = num();
        else if (key == "profile") cfg.profile = val;
        else if (key == "table_path") cfg.table_path = val;
        else if (key == "support_radius") cfg.support_radius = num();
        else if (key == "f_amp") cfg.f_amp = num();
        else if (key == "p_max") cfg.p_max = num();
        else if (key == "p_drift") cfg.p_drift = num();
        else if (key == "phi0_amp") cfg.phi0_amp = num();
        else if (key == "phi1_amp") cfg.phi1_amp = num();
        else if (key == "momentum_warn_factor") cfg.momentum_warn_factor = num();
        else if (key == "force_zero_fields") cfg.force_zero_fields = num() != 0.0;
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "snapshot_stride") cfg.snapshot_stride = static_cast<int>(num());
        else if (key == "threads") cfg.threads = static_cast<int>(num());
        else
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
    }
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_schema() {
    return
        "# nvkin configuration, one 'key = value' per line, '#' comments\n"
        "x_min = -24            # left domain edge\n"
        "x_max = 24             # right domain edge\n"
        "nx = 512               # grid nodes (>= 16)\n"
        "dt = 0                 # explicit time step; 0 selects dt_over_dx*dx\n"
        "dt_over_dx = 0.5       # time step as fraction of dx (<= 1)\n"
        "t_final = 2            # end time (> 0)\n"
        "n_particles = 200000   # target phase-cell count for the quiet start\n"
        "sample_nx = 0          # explicit spatial sampling stride (0 = derive)\n"
        "sample_np = 0          # explicit per-axis momentum stride (0 = derive)\n"
        "mollifier_n = 0        # regularization index n; 0 = no mollification\n"
        "deposition = cic       # deposition kernel (cic)\n"
        "margin = 1             # light-cone slack required beyond t_final\n"
        "profile = gaussian-bump  # gaussian-bump | two-stream | vacuum | table\n"
        "table_path =           # sampled-table file when profile = table\n"
        "support_radius = 2     # R0: support radius of f_in and field data\n"
        "f_amp = 1              # amplitude of f_in\n"
        "p_max = 1.5            # momentum support radius\n"
        "p_drift = 0.8          # stream offset (two-stream only)\n"
        "phi0_amp = 0.05        # amplitude of phi(0)\n"
        "phi1_amp = 0           # amplitude of dphi/dt(0)\n"
        "momentum_warn_factor = 2  # warn when max|p| exceeds this multiple\n"
        "force_zero_fields = 0  # 1 = free-transport validation mode\n"
        "out_dir = out          # output directory\n"
        "snapshot_stride = 0    # steps between snapshots; 0 = none\n"
        "threads = 1            # worker threads (1 = bitwise reproducible)\n";
}

std::vector<std::string> validate_config(const SimConfig& cfg,
                                         const InitialData& data) {
    std::vector<std::string> errors;
    const double R0 = data.support_radius;
    if (cfg.t_final <= 0.0)
        errors.push_back("NonpositiveRun: t_final must be > 0");
    if (cfg.nx < 16)
        errors.push_back("NonpositiveRun: nx must be >= 16");
    if (cfg.n_particles < 1)
        errors.push_back("NonpositiveRun: n_particles must be >= 1");
    if (cfg.x_min >= cfg.x_max)
        errors.push_back("NonpositiveRun: x_min must be < x_max");
    if (cfg.step_size() <= 0.0)
        errors.push_back("NonpositiveRun: dt must be > 0");
    if (cfg.x_min < cfg.x_max) {
        const double reach = R0 + cfg.t_final + cfg.margin;
        if (cfg.x_max < reach || -cfg.x_min < reach)
            errors.push_back(
                "DomainTooSmall: need min(x_max, -x_min) >= R0 + t_final + "
                "margin = " + std::to_string(reach));
        if (cfg.step_size() > cfg.dx() * (1.0 + 1e-12))
            errors.push_back("CflViolation: dt = " +
                             std::to_string(cfg.step_size()) + " exceeds dx = " +
                             std::to_string(cfg.dx()));
    }
    return errors;
}

}  // namespace nv

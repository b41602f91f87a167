#include "nv/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nv {

namespace {

constexpr double kTwoPiPlusOne = 2.0 * M_PI + 1.0;
constexpr double kFourPiThirds = 4.0 * M_PI / 3.0;

double rel_drift(double v, double v0) {
    const double scale = std::abs(v0);
    if (scale < 1e-300) return std::abs(v);
    return std::abs(v - v0) / scale;
}

double norm_slack(double slack, double rhs) {
    return slack / std::max(1.0, std::abs(rhs));
}

}  // namespace

std::vector<std::string> diagnostics_columns() {
    return {"t",
            "mass_particle",
            "mass_grid",
            "energy_kinetic",
            "energy_field",
            "energy_total",
            "casimir1_exact",
            "casimir1_grid",
            "casimir2_exact",
            "casimir2_grid",
            "est2_lhs",
            "est2_rhs",
            "est2_slack",
            "f_sup",
            "sup_bound_rhs",
            "supnorm_slack",
            "phihom_sup",
            "psi_max",
            "mu_l2",
            "rho_l43",
            "momentum_support",
            "propagation_excess",
            "mass_residual",
            "energy_residual",
            "mu_slack_min",
            "rho_slack_min",
            "dphi_dt_l2",
            "phi_rate_l2"};
}

std::string diagnostics_csv_header() {
    std::string out;
    const auto cols = diagnostics_columns();
    for (size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    return out;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
    const double vals[] = {r.t,
                           r.mass_particle,
                           r.mass_grid,
                           r.energy_kinetic,
                           r.energy_field,
                           r.energy_total,
                           r.casimir1_exact,
                           r.casimir1_grid,
                           r.casimir2_exact,
                           r.casimir2_grid,
                           r.est2_lhs,
                           r.est2_rhs,
                           r.est2_slack,
                           r.f_sup,
                           r.sup_bound_rhs,
                           r.supnorm_slack,
                           r.phihom_sup,
                           r.psi_max,
                           r.mu_l2,
                           r.rho_l43,
                           r.momentum_support,
                           r.propagation_excess,
                           r.mass_residual,
                           r.energy_residual,
                           r.mu_slack_min,
                           r.rho_slack_min,
                           r.dphi_dt_l2,
                           r.phi_rate_l2};
    std::string out;
    char buf[40];
    for (size_t i = 0; i < sizeof(vals) / sizeof(vals[0]); ++i) {
        if (i) out += ',';
        std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
        out += buf;
    }
    out += '\n';
    return out;
}

DiagnosticsMonitor::DiagnosticsMonitor(const SpatialGrid& grid, double dt,
                                       double support_radius,
                                       double momentum_warn_factor)
    : grid_(grid),
      dt_(dt),
      support_radius_(support_radius),
      warn_factor_(momentum_warn_factor) {
    const double centers[kTestFns] = {-support_radius, 0.0, support_radius};
    const double radius = support_radius + 3.0;
    for (int c = 0; c < kTestFns; ++c) {
        ArrayXd chi(grid_.nx), dchi(grid_.nx);
        for (int i = 0; i < grid_.nx; ++i) {
            const double u = (grid_.node(i) - centers[c]) / radius;
            chi[i] = bump(u);
            dchi[i] = bump_derivative(u) / radius;
        }
        chi_.push_back(std::move(chi));
        dchi_.push_back(std::move(dchi));
    }
}

std::pair<double, double> DiagnosticsMonitor::mass(const Ensemble& ens,
                                                   const MomentGrids& m,
                                                   const SpatialGrid& grid) {
    const double mp = ens.size() ? ens.m.sum() : 0.0;
    const double mg = m.rho.sum() * grid.dx();
    return {mp, mg};
}

std::tuple<double, double, double> DiagnosticsMonitor::energy(
    const Ensemble& ens, const FieldSlice& slice, const SpatialGrid& grid) {
    double kin = 0.0;
    for (long k = 0; k < ens.size(); ++k) {
        const double phi = grid.interp(slice.phi, ens.x[k]);
        kin += ens.a[k] * ens.c[k] * std::exp(phi) * ens.gamma(k);
    }
    const ArrayXd dens =
        0.5 * (slice.dphi_dt.square() + slice.dphi_dx.square());
    const double field = trapezoid(dens, grid.dx());
    return {kin, field, kin + field};
}

DiagnosticsMonitor::CasimirValues DiagnosticsMonitor::casimir(
    const Ensemble& ens, const FieldSlice& slice, const SpatialGrid& grid,
    const CasimirSpec& spec) {
    spec.validate();
    const double q = spec.q;
    const int nx = grid.nx;
    const double dx = grid.dx();
    double exact_sum = 0.0;
    double est2_sum = 0.0;
    ArrayXd dep = ArrayXd::Zero(nx);
    for (long k = 0; k < ens.size(); ++k) {
        const double phi = grid.interp(slice.phi, ens.x[k]);
        exact_sum += std::pow(ens.a[k], q) * ens.c[k];
        // |e^{gamma phi} f|^q * V
        const double fval = ens.a[k] * std::exp(4.0 * phi);
        const double vol = ens.c[k] * std::exp(-3.0 * phi);
        est2_sum += std::pow(std::exp(spec.gamma * phi) * fval, q) * vol;
        // grid route: CIC of Q(a) c e^{-3 phi(x_k)}, re-weighted by the
        // nodal e^{3 phi}
        const double u = (ens.x[k] - grid.x_min) / dx;
        int i = static_cast<int>(u);
        if (i > nx - 2) i = nx - 2;
        const double s = u - i;
        const double contrib = std::pow(ens.a[k], q) * ens.c[k] * std::exp(-3.0 * phi);
        dep[i] += (1.0 - s) * contrib;
        dep[i + 1] += s * contrib;
    }
    const double grid_sum = (dep * (3.0 * slice.phi).exp()).sum();
    CasimirValues v;
    v.exact = exact_sum > 0.0 ? std::pow(exact_sum, 1.0 / q) : 0.0;
    v.grid = grid_sum > 0.0 ? std::pow(grid_sum, 1.0 / q) : 0.0;
    // est2_monitor carries the measured norm ||e^{gamma phi} f(t)||_q; the
    // caller compares it against f_in_norm_q times the exponential factor
    v.est2_monitor = est2_sum > 0.0 ? std::pow(est2_sum, 1.0 / q) : 0.0;
    return v;
}

const DiagnosticsRecord& DiagnosticsMonitor::record(const SimState& state) {
    const Ensemble& ens = state.ens;
    const FieldSlice& slice = state.slice;
    const MomentGrids& m = state.moments;
    const double dx = grid_.dx();
    DiagnosticsRecord r;
    r.t = state.t;

    std::tie(r.mass_particle, r.mass_grid) = mass(ens, m, grid_);
    std::tie(r.energy_kinetic, r.energy_field, r.energy_total) =
        energy(ens, slice, grid_);

    // pointwise reconstructions shared by the monitors
    double f_sup = 0.0, a_sup = 0.0, p_sup = 0.0;
    for (long k = 0; k < ens.size(); ++k) {
        const double phi = grid_.interp(slice.phi, ens.x[k]);
        f_sup = std::max(f_sup, ens.a[k] * std::exp(4.0 * phi));
        a_sup = std::max(a_sup, ens.a[k]);
        p_sup = std::max(p_sup, std::sqrt(ens.p1[k] * ens.p1[k] +
                                          ens.p2[k] * ens.p2[k] +
                                          ens.p3[k] * ens.p3[k]));
    }
    r.f_sup = f_sup;
    r.momentum_support = p_sup;
    r.phihom_sup = slice.phi_hom.abs().maxCoeff();
    r.psi_max = slice.psi.maxCoeff();
    r.mu_l2 = std::sqrt(m.mu.square().sum() * dx);
    r.rho_l43 = std::pow(m.rho.pow(4.0 / 3.0).sum() * dx, 0.75);

    if (!initialized_) {
        f_in_sup_ = f_sup;
        a_sup_ = a_sup;
        phi0_sup_ = slice.phi.abs().maxCoeff();
        momentum0_ = p_sup;
    }

    // a-priori sup-norm bound on the reconstructed density
    r.sup_bound_rhs =
        f_in_sup_ * std::exp(4.0 * (r.phihom_sup + phi0_sup_));
    r.supnorm_slack = r.sup_bound_rhs - r.f_sup;

    // Casimir functionals, q = 1 and q = 2; the q = 2 one doubles as the
    // growth monitor with gamma = 0
    const CasimirValues c1 = casimir(ens, slice, grid_, CasimirSpec{1.0, 0.0});
    const CasimirValues c2 = casimir(ens, slice, grid_, CasimirSpec{2.0, 0.0});
    r.casimir1_exact = c1.exact;
    r.casimir1_grid = c1.grid;
    r.casimir2_exact = c2.exact;
    r.casimir2_grid = c2.grid;
    if (!initialized_) f_in_l2_ = c2.est2_monitor;
    r.est2_lhs = c2.est2_monitor;
    r.est2_rhs = f_in_l2_ * std::exp(7.0 * (r.phihom_sup + phi0_sup_));
    r.est2_slack = r.est2_rhs - r.est2_lhs;

    // pointwise interpolation bounds; the constants come from the two-term
    // momentum split: int_{|p|<=R} dp/sqrt(1+p^2) <= 2 pi R^2 with
    // R = (k/||f||_inf)^{1/4} gives (2 pi + 1) sqrt(||f||_inf k), and the
    // ball volume (4 pi/3) R^3 with R = e^{-phi} k^{1/4} gives
    // ((4 pi/3)||a||_inf + 1) k^{3/4}
    double mu_slack = 0.0, rho_slack = 0.0;
    bool first = true;
    for (int i = 0; i < grid_.nx; ++i) {
        const double k = std::max(m.ekin[i], 0.0);
        const double mu_rhs = kTwoPiPlusOne * std::sqrt(f_sup * k);
        const double rho_rhs =
            (kFourPiThirds * a_sup_ + 1.0) * std::pow(k, 0.75);
        const double ms = norm_slack(mu_rhs - m.mu[i], mu_rhs);
        const double rs = norm_slack(rho_rhs - m.rho[i], rho_rhs);
        if (first) {
            mu_slack = ms;
            rho_slack = rs;
            first = false;
        } else {
            mu_slack = std::min(mu_slack, ms);
            rho_slack = std::min(rho_slack, rs);
        }
    }
    r.mu_slack_min = mu_slack;
    r.rho_slack_min = rho_slack;

    // finite propagation: deposition reaches at most one cell beyond the
    // light cone of the initial support
    {
        const double reach = support_radius_ + std::abs(state.t) + dx + 1e-9;
        double excess = 0.0;
        for (int i = 0; i < grid_.nx; ++i)
            if (std::abs(grid_.node(i)) > reach) excess += m.rho[i] * dx;
        r.propagation_excess = excess;
    }

    // weak-form local conservation residuals, centered on the previous
    // level: d/dt <chi, density> = <chi', flux>
    {
        const ArrayXd edens =
            m.ekin + 0.5 * (slice.dphi_dt.square() + slice.dphi_dx.square());
        const ArrayXd pflux = m.mom - slice.dphi_dt * slice.dphi_dx;
        Level cur;
        for (int c = 0; c < kTestFns; ++c) {
            cur.rho_ip[c] = (chi_[c] * m.rho).sum() * dx;
            cur.j_ip[c] = (dchi_[c] * m.j).sum() * dx;
            cur.e_ip[c] = (chi_[c] * edens).sum() * dx;
            cur.p_ip[c] = (dchi_[c] * pflux).sum() * dx;
        }
        flux_history_.push_back(cur);
        if (flux_history_.size() > 3)
            flux_history_.erase(flux_history_.begin());
        if (flux_history_.size() == 3) {
            const Level& a = flux_history_[0];
            const Level& b = flux_history_[1];
            const Level& c = flux_history_[2];
            double rm = 0.0, re = 0.0;
            for (int k = 0; k < kTestFns; ++k) {
                rm = std::max(rm, std::abs((c.rho_ip[k] - a.rho_ip[k]) /
                                               (2.0 * dt_) -
                                           b.j_ip[k]));
                re = std::max(re, std::abs((c.e_ip[k] - a.e_ip[k]) /
                                               (2.0 * dt_) -
                                           b.p_ip[k]));
            }
            r.mass_residual = rm;
            r.energy_residual = re;
        }
    }

    // time continuity
    r.dphi_dt_l2 = std::sqrt(slice.dphi_dt.square().sum() * dx);
    if (prev_phi_) {
        r.phi_rate_l2 =
            std::sqrt((slice.phi - *prev_phi_).square().sum() * dx) / dt_;
    }
    prev_phi_ = slice.phi;

    if (!initialized_) {
        mass0_bits_ = r.mass_particle;
        cas1_bits_ = r.casimir1_exact;
        cas2_bits_ = r.casimir2_exact;
        initialized_ = true;
    } else {
        if (r.mass_particle != mass0_bits_) mass_bitwise_ = false;
        if (r.casimir1_exact != cas1_bits_ || r.casimir2_exact != cas2_bits_)
            casimir_bitwise_ = false;
        if (momentum0_ > 0.0 && p_sup > warn_factor_ * momentum0_)
            momentum_warning_ = true;
    }

    records_.push_back(r);
    return records_.back();
}

RunSummary DiagnosticsMonitor::summary() const {
    RunSummary s;
    s.mass_bitwise = mass_bitwise_;
    s.casimir_bitwise = casimir_bitwise_;
    s.momentum_warning = momentum_warning_;
    if (records_.empty()) return s;
    const DiagnosticsRecord& r0 = records_.front();
    double lip_num = 0.0, lip_den = 0.0;
    bool first = true;
    for (const auto& r : records_) {
        const double sup_ns = norm_slack(r.supnorm_slack, r.sup_bound_rhs);
        const double est_ns = norm_slack(r.est2_slack, r.est2_rhs);
        if (first) {
            s.psi_max_global = r.psi_max;
            s.supnorm_slack_min = sup_ns;
            s.est2_slack_min = est_ns;
            s.mu_slack_min = r.mu_slack_min;
            s.rho_slack_min = r.rho_slack_min;
            first = false;
        } else {
            s.psi_max_global = std::max(s.psi_max_global, r.psi_max);
            s.supnorm_slack_min = std::min(s.supnorm_slack_min, sup_ns);
            s.est2_slack_min = std::min(s.est2_slack_min, est_ns);
            s.mu_slack_min = std::min(s.mu_slack_min, r.mu_slack_min);
            s.rho_slack_min = std::min(s.rho_slack_min, r.rho_slack_min);
        }
        s.propagation_max = std::max(s.propagation_max, r.propagation_excess);
        s.mass_grid_drift =
            std::max(s.mass_grid_drift, rel_drift(r.mass_grid, r0.mass_grid));
        s.energy_drift =
            std::max(s.energy_drift, rel_drift(r.energy_total, r0.energy_total));
        s.casimir1_grid_drift = std::max(
            s.casimir1_grid_drift, rel_drift(r.casimir1_grid, r0.casimir1_grid));
        s.casimir2_grid_drift = std::max(
            s.casimir2_grid_drift, rel_drift(r.casimir2_grid, r0.casimir2_grid));
        s.mass_residual_max = std::max(s.mass_residual_max, r.mass_residual);
        s.energy_residual_max = std::max(s.energy_residual_max, r.energy_residual);
        s.phihom_growth_c =
            std::max(s.phihom_growth_c, r.phihom_sup / (1.0 + std::abs(r.t)));
        lip_num = std::max(lip_num, r.phi_rate_l2);
        lip_den = std::max(lip_den, r.dphi_dt_l2);
    }
    s.lipschitz_ratio = lip_den > 0.0 ? lip_num / lip_den : 0.0;
    return s;
}

bool RunSummary::monitors_pass() const {
    return mass_bitwise && casimir_bitwise && psi_max_global <= 0.0 &&
           supnorm_slack_min >= -slack_tol && est2_slack_min >= -slack_tol &&
           mu_slack_min >= -slack_tol && rho_slack_min >= -slack_tol &&
           propagation_max == 0.0;
}

std::string RunSummary::report() const {
    std::ostringstream os;
    auto line = [&os](const char* name, bool ok, double value) {
        os << (ok ? "[PASS] " : "[FAIL] ") << name << " = " << value << "\n";
    };
    line("mass_particle bitwise-constant", mass_bitwise, mass_bitwise ? 1 : 0);
    line("casimir exact bitwise-constant", casimir_bitwise,
         casimir_bitwise ? 1 : 0);
    line("psi_max <= 0", psi_max_global <= 0.0, psi_max_global);
    line("supnorm slack", supnorm_slack_min >= -slack_tol, supnorm_slack_min);
    line("est2 slack", est2_slack_min >= -slack_tol, est2_slack_min);
    line("mu interpolation slack", mu_slack_min >= -slack_tol, mu_slack_min);
    line("rho interpolation slack", rho_slack_min >= -slack_tol, rho_slack_min);
    line("finite propagation excess == 0", propagation_max == 0.0,
         propagation_max);
    os << "[info] mass_grid drift = " << mass_grid_drift << "\n";
    os << "[info] energy drift = " << energy_drift << "\n";
    os << "[info] casimir grid drift (q=1,2) = " << casimir1_grid_drift << ", "
       << casimir2_grid_drift << "\n";
    os << "[info] residual max (mass, energy) = " << mass_residual_max << ", "
       << energy_residual_max << "\n";
    os << "[info] Lipschitz ratio = " << lipschitz_ratio << "\n";
    os << "[info] phi_hom growth constant C = " << phihom_growth_c << "\n";
    if (momentum_warning)
        os << "[warn] momentum support exceeded its configured multiple\n";
    return os.str();
}

}  // namespace nv

#include "nv/simulation.hpp"

#include <cmath>
#include <stdexcept>

namespace nv {

Simulation::Simulation(const SimConfig& cfg, const InitialData& data)
    : cfg_(cfg), data_(data), grid_(cfg.grid()) {
    moll_ = Mollifier::make(cfg.mollifier_n, grid_.dx(), grid_.nx);
    const bool regularized = cfg.mollifier_n > 0 && !moll_.identity();
    const WaveData1D wave =
        regularized ? WaveData1D::mollified(data_, grid_, moll_)
                    : WaveData1D::analytic(data_, grid_);
    assembler_ = FieldAssembler{grid_, wave, moll_, 2, cfg.force_zero_fields};
    companion_ = FieldAssembler{grid_, WaveData1D::analytic(data_, grid_),
                                moll_, 1, cfg.force_zero_fields};
}

void Simulation::init() {
    state_ = SimState{};
    state_.t = 0.0;
    state_.step = 0;
    state_.hist.dt = cfg_.step_size();
    state_.slice = assembler_.assemble(state_.hist, 0.0);

    const ArrayXd& phi0 = state_.slice.phi;
    auto phi0_at = [this, &phi0](double x) { return grid_.interp(phi0, x); };
    state_.ens = sample_ensemble(data_, cfg_, phi0_at);

    state_.moments = deposit(state_.ens, state_.slice, grid_, cfg_.threads);
    state_.hist.set_level(0, state_.moments.mu);
}

void Simulation::step() {
    advance(state_, assembler_, cfg_.step_size(), cfg_.threads);
}

void Simulation::run(const std::function<void(const SimState&)>& on_step) {
    init();
    if (on_step) on_step(state_);
    const int n = cfg_.n_steps();
    for (int k = 0; k < n; ++k) {
        step();
        if (on_step) on_step(state_);
    }
}

void Simulation::run_reverse(double t_target,
                             const std::function<void(const SimState&)>& on_step) {
    const double dt = cfg_.step_size();
    while (state_.t > t_target + 0.5 * dt) {
        advance(state_, assembler_, -dt, cfg_.threads);
        if (on_step) on_step(state_);
    }
}

FieldSlice Simulation::assemble_companion(double t) const {
    return companion_.assemble(state_.hist, t);
}

}  // namespace nv

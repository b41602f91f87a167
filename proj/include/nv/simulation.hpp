#pragma once

#include <functional>

#include "nv/diagnostics.hpp"
#include "nv/kinetic.hpp"

namespace nv {

/// Owns the coupled field/particle loop for one configuration. The field
/// assembler carries the regularization: data mollified once, source
/// mollified twice when mollifier_n > 0.
class Simulation {
public:
    Simulation(const SimConfig& cfg, const InitialData& data);

    /// Builds the t = 0 state: slice from the (possibly mollified) data
    /// with an empty source history, quiet-start ensemble, first deposit.
    void init();

    void step();
    /// Runs to t_final, invoking on_step after init and after every step.
    void run(const std::function<void(const SimState&)>& on_step = {});

    /// Steps backward to time t_target against the existing history.
    void run_reverse(double t_target,
                     const std::function<void(const SimState&)>& on_step = {});

    const SimState& state() const { return state_; }
    SimState& mutable_state() { return state_; }
    const SimConfig& config() const { return cfg_; }
    const SpatialGrid& grid() const { return grid_; }
    const FieldAssembler& assembler() const { return assembler_; }
    const Mollifier& mollifier() const { return moll_; }

    /// Companion field of the once-smoothed source with raw data, used by
    /// the regularization energy comparison.
    FieldSlice assemble_companion(double t) const;

private:
    SimConfig cfg_;
    InitialData data_;
    SpatialGrid grid_;
    Mollifier moll_;
    FieldAssembler assembler_;
    FieldAssembler companion_;
    SimState state_;
};

}  // namespace nv

// trajectories.hpp — Quantum-jump (Monte-Carlo wavefunction) unraveling
//
// Between jumps the unnormalized state follows d psi/dt = -i H_eff psi with
// H_eff = H - (i/2) sum_k rate_k L_k^dagger L_k. A jump fires when |psi|^2 falls
// to a uniform random threshold; the crossing is bisected inside the step, a
// channel is drawn with weight rate_k |L_k psi|^2, and psi -> L_k psi / |L_k psi|.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmode/algebra.hpp"
#include "pmode/dynamics.hpp"

namespace pmode {

struct TrajectoryConfig {
    std::size_t n_traj{1};
    std::uint64_t seed{0};
    double dt_max{0.05};
    TimeGrid grid;
    IntegratorConfig integrator{1e-8, 1e-10, 0.05, 1e-3};

    void validate() const;
};

struct JumpEvent {
    double time{0.0};
    std::size_t channel{0};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states; // normalized, one per grid instant
    std::vector<JumpEvent> jumps;
};

// Trajectory `index` of the ensemble keyed by cfg.seed; a pure function of its arguments.
Trajectory mcwf_run(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                    std::size_t index = 0);

struct EnsembleStats {
    std::size_t n_traj{0};
    std::vector<double> times;
    std::vector<Operator> mean_states;                 // per instant
    std::vector<std::vector<Complex>> observable_means; // [observable][instant]
    // sample std / sqrt(n_traj); absent for a single trajectory
    std::optional<std::vector<std::vector<double>>> observable_stderr;
    std::vector<std::size_t> jump_histogram; // [number of jumps] -> trajectory count
};

// Number of worker threads used when none is requested: hardware concurrency,
// capped by PSEUDOMODE_NUM_THREADS when that is set.
std::size_t default_thread_count();

// Trajectories are reduced in fixed index-ordered blocks, so results are
// bit-identical for any thread count.
EnsembleStats ensemble_average(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                               const std::vector<Operator>& observables, std::size_t n_threads = 0);

} // namespace pmode

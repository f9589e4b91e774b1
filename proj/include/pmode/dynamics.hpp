// dynamics.hpp — Lindblad generator, propagation, and regression correlators

#pragma once

#include <cstddef>
#include <vector>

#include "pmode/algebra.hpp"
#include "pmode/integrator.hpp"

namespace pmode {

struct JumpChannel {
    double rate{0.0};
    Operator op;
};

// Generator d rho/dt = -i[H, rho] + sum_k rate_k (L rho L^dagger - {L^dagger L, rho}/2).
// Validated at construction; immutable afterwards.
class LindbladModel {
public:
    LindbladModel(Operator hamiltonian, std::vector<JumpChannel> jumps);

    std::size_t dim() const { return static_cast<std::size_t>(h_.rows()); }
    const Operator& hamiltonian() const { return h_; }
    const std::vector<JumpChannel>& jumps() const { return jumps_; }

    // H - (i/2) sum_k rate_k L_k^dagger L_k
    const Operator& effective_hamiltonian() const { return h_eff_; }

private:
    Operator h_;
    std::vector<JumpChannel> jumps_;
    Operator h_eff_;
};

struct TimeGrid {
    double t0{0.0};
    double t1{1.0};
    std::size_t n_points{2};

    void validate() const;
    std::vector<double> instants() const;
};

// Applies the generator to any square operator (density matrices as well as
// non-Hermitian regression seeds).
Operator lindblad_rhs(const LindbladModel& model, const Operator& rho);

// One state per grid instant; element 0 is rho0. Re-symmetrizes after every
// accepted step.
std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                                  const IntegratorConfig& cfg);

// Propagates an arbitrary operator under the generator without symmetrization.
std::vector<Operator> propagate(const LindbladModel& model, const Operator& x0, const TimeGrid& grid,
                                const IntegratorConfig& cfg);

inline constexpr double kStationarityTolerance = 1e-8;

// C(tau) = tr(A e^{L tau}[B rho]) for each instant of `taus` (tau measured
// from taus.t0, which must be 0). rho must be stationary under the model.
std::vector<Complex> regression_correlator(const LindbladModel& model, const Operator& a, const Operator& b,
                                           const DensityMatrix& rho, const TimeGrid& taus,
                                           const IntegratorConfig& cfg);

} // namespace pmode

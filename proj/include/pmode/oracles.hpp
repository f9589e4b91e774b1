// oracles.hpp — Independent references for the zero-temperature two-level decay
//
// Both work in the single-excitation sector with the system initially excited:
//   * a direct Volterra integro-differential solver for the memory-kernel
//     equation dc/dt = -int_0^t alpha(t - s) c(s) ds, and
//   * exact unitary evolution of the system plus a finite sample of bath modes.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pmode/algebra.hpp"
#include "pmode/baths.hpp"
#include "pmode/dynamics.hpp"
#include "pmode/pseudomode.hpp"

namespace pmode {

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Complex> amplitudes; // excited-state amplitude c(t), rotating frame

    std::vector<double> populations() const;
};

// smooth(tau) plus local_rate * delta(tau), the delta counted with half weight
// at the end of the history integral.
struct MemoryKernel {
    std::function<Complex(double)> smooth;
    double local_rate{0.0};
};

// Resonant rotating-frame kernel g^2 exp(-gamma tau / 2).
MemoryKernel lorentzian_kernel(const LorentzianSpectrum& bath);

// Trapezoid history quadrature with trapezoid time stepping (second order).
// The grid must start at 0; h is reduced so that it divides the output spacing.
// Requires g h <= 0.05 and gamma h <= 0.05.
AmplitudeTrajectory volterra_amplitude(const LorentzianSpectrum& bath, const TimeGrid& grid, double h);
AmplitudeTrajectory volterra_amplitude(const MemoryKernel& kernel, const TimeGrid& grid, double h);

enum class BathGrid {
    Uniform,     // equal spacing, midpoint sampling; exact recurrence at 2 pi / dw
    EqualWeight, // each mode carries the same share of the Lorentzian weight
};

struct DiscreteBath {
    std::vector<double> detunings; // omega_k - omega0
    std::vector<double> couplings; // g_k, with sum g_k^2 ~ int J dw / 2pi
    double min_spacing{0.0};

    double recurrence_time() const;
    double total_weight() const;
};

inline constexpr std::size_t kDefaultBathModes = 400;
inline constexpr double kDefaultWindowWidths = 20.0; // W = 20 gamma

DiscreteBath make_discrete_bath(const LorentzianSpectrum& bath, std::size_t n_modes, double half_window,
                                BathGrid kind = BathGrid::EqualWeight);

struct DiscreteBathRun {
    AmplitudeTrajectory trajectory;
    double max_norm_error{0.0};
    bool recurrence_warning{false}; // t1 > recurrence_time / 2
};

// Evolves c|e,vac> + sum_k b_k |g,1_k> exactly (diagonalizing the Hermitian
// generator). `system` must be a two-level system with V = sigma_minus; its
// diagonal Hamiltonian supplies the detuning from omega0.
DiscreteBathRun discrete_bath_evolve(const SystemSpec& system, const DiscreteBath& bath, const TimeGrid& grid);

DiscreteBathRun discrete_bath_evolve(const SystemSpec& system, const LorentzianSpectrum& bath, std::size_t n_modes,
                                     double half_window, const TimeGrid& grid,
                                     BathGrid kind = BathGrid::EqualWeight);

} // namespace pmode

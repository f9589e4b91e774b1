// pseudomode.hpp — Lorentzian reservoir replaced by one damped ancilla oscillator
//
// The system S couples to an ancilla mode A through g (V^dagger a + V a^dagger);
// A is itself damped at rate gamma by a delta-correlated reservoir. Starting
// from rho_S(0) (x) |0><0| and tracing A out afterwards reproduces the reduced
// dynamics in a Lorentzian reservoir exactly. Everything is written in the
// frame rotating at the reservoir centre frequency omega0, so the composite
// generator is time independent; detunings belong in the system Hamiltonian.

#pragma once

#include <cstddef>
#include <vector>

#include "pmode/algebra.hpp"
#include "pmode/baths.hpp"
#include "pmode/dynamics.hpp"

namespace pmode {

struct SystemSpec {
    Operator hamiltonian; // rotating-frame self-Hamiltonian; zero on resonance
    Operator coupling;    // V

    std::size_t dim() const { return static_cast<std::size_t>(coupling.rows()); }
    void validate() const;
};

// Two-level system with V = sigma_minus and H_S = detuning |e><e|.
SystemSpec two_level_system(double detuning = 0.0);
// d-level truncated oscillator with V = a and H_S = detuning a^dagger a.
SystemSpec oscillator_system(std::size_t d, double detuning = 0.0);

struct EmbeddingSpec {
    SystemSpec system;
    LorentzianSpectrum bath;
    std::size_t ancilla_dim{2};

    void validate() const;
};

struct EmbeddingResult {
    LindbladModel model;
    HilbertFactorization factorization; // [d_S, d_A]
    DensityMatrix rho0;                 // rho_S(0) (x) |0><0|
};

// H = H_S (x) 1 + g (V^dagger (x) a + V (x) a^dagger), single jump (gamma, 1 (x) a).
EmbeddingResult build_embedding(const EmbeddingSpec& spec, const DensityMatrix& rho_s0);

// The bare damped ancilla: H = 0, jump (gamma, a) on d_A levels.
LindbladModel ancilla_model(const LorentzianSpectrum& bath, std::size_t ancilla_dim);

// g^2 e^{-i omega0 tau} <a(tau) a^dagger(0)> of the damped ancilla in its ground
// state, i.e. the correlation of the field F = g a with the lab-frame phase restored.
std::vector<Complex> ancilla_field_correlation(const LorentzianSpectrum& bath, std::size_t ancilla_dim,
                                               const TimeGrid& taus, const IntegratorConfig& cfg);

inline constexpr double kTruncationWarningPopulation = 1e-6;

struct LorentzianRun {
    std::vector<double> times;
    std::vector<DensityMatrix> system_states; // tr_A rho_SA(t)
    double max_top_population{0.0};           // max of tr[(V^dagger V (x) |d_A-1><d_A-1|) rho]
    bool truncation_warning{false};
};

LorentzianRun simulate_lorentzian(const EmbeddingSpec& spec, const DensityMatrix& rho_s0, const TimeGrid& grid,
                                  const IntegratorConfig& cfg);

struct TruncationChoice {
    std::size_t ancilla_dim{2};
    // distances[k]: max-over-time trace distance between d_A = 2^(k+1) and 2^(k+2)
    std::vector<double> distances;
};

inline constexpr std::size_t kMaxAncillaDim = 64;

// Smallest d_A in {2, 4, ..., 32} whose reduced curve is within `tol` (trace
// distance, max over time) of the d_A doubled curve. Throws TruncationError
// if 32 versus 64 still differ. spec.ancilla_dim is ignored.
TruncationChoice choose_truncation(const EmbeddingSpec& spec, const DensityMatrix& rho_s0, const TimeGrid& grid,
                                   const IntegratorConfig& cfg, double tol);

} // namespace pmode

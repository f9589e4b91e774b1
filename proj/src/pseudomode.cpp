// pseudomode.cpp — Composite S+A model, reduction, and Fock truncation control

#include "pmode/pseudomode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmode/errors.hpp"

namespace pmode {

void SystemSpec::validate() const {
    if (coupling.rows() == 0 || coupling.rows() != coupling.cols()) {
        throw DimensionError("SystemSpec: coupling operator must be square and non-empty");
    }
    if (hamiltonian.rows() != coupling.rows() || hamiltonian.cols() != coupling.cols()) {
        throw DimensionError("SystemSpec: Hamiltonian and coupling dimensions differ");
    }
    if (hermiticity_error(hamiltonian) > 1e-12) {
        throw PreconditionError("SystemSpec: Hamiltonian is not Hermitian");
    }
}

SystemSpec two_level_system(double detuning) {
    return {detuning * projector(2, 1), sigma_minus()};
}

SystemSpec oscillator_system(std::size_t d, double detuning) {
    const Operator a = annihilation(d);
    return {detuning * (a.adjoint() * a), a};
}

void EmbeddingSpec::validate() const {
    system.validate();
    bath.validate();
    if (ancilla_dim < 2) {
        throw DimensionError("EmbeddingSpec: ancilla truncation must be at least 2");
    }
}

EmbeddingResult build_embedding(const EmbeddingSpec& spec, const DensityMatrix& rho_s0) {
    spec.validate();
    const std::size_t ds = spec.system.dim();
    if (rho_s0.dim() != ds) {
        throw DimensionError("build_embedding: initial state dimension differs from the system");
    }
    const std::size_t da = spec.ancilla_dim;
    const Operator a = annihilation(da);
    const Operator& v = spec.system.coupling;
    const double g = spec.bath.g;

    Operator h = kron(spec.system.hamiltonian, identity(da)) + g * (kron(v.adjoint(), a) + kron(v, a.adjoint()));
    // Remove rounding asymmetry so the model's Hermiticity check is exact.
    symmetrize(h);

    // Ancilla damping rate equals the Lorentzian width.
    std::vector<JumpChannel> jumps{{spec.bath.gamma, kron(identity(ds), a)}};

    return {LindbladModel(std::move(h), std::move(jumps)), HilbertFactorization{{ds, da}},
            DensityMatrix(kron(rho_s0.op(), projector(da, 0)))};
}

LindbladModel ancilla_model(const LorentzianSpectrum& bath, std::size_t ancilla_dim) {
    bath.validate();
    const auto n = static_cast<Eigen::Index>(ancilla_dim);
    return LindbladModel(Operator::Zero(n, n), {{bath.gamma, annihilation(ancilla_dim)}});
}

std::vector<Complex> ancilla_field_correlation(const LorentzianSpectrum& bath, std::size_t ancilla_dim,
                                               const TimeGrid& taus, const IntegratorConfig& cfg) {
    const LindbladModel model = ancilla_model(bath, ancilla_dim);
    const Operator a = annihilation(ancilla_dim);
    std::vector<Complex> c =
        regression_correlator(model, a, a.adjoint(), DensityMatrix::basis(ancilla_dim, 0), taus, cfg);
    const std::vector<double> ts = taus.instants();
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] *= bath.g * bath.g * std::exp(Complex(0.0, -bath.omega0 * ts[k]));
    }
    return c;
}

LorentzianRun simulate_lorentzian(const EmbeddingSpec& spec, const DensityMatrix& rho_s0, const TimeGrid& grid,
                                  const IntegratorConfig& cfg) {
    const EmbeddingResult emb = build_embedding(spec, rho_s0);
    const std::vector<DensityMatrix> composite = evolve(emb.model, emb.rho0, grid, cfg);

    const std::size_t da = spec.ancilla_dim;
    // Weight on the top ancilla level that V (x) a^dagger would push past the cutoff.
    const Operator top = kron(spec.system.coupling.adjoint() * spec.system.coupling, projector(da, da - 1));

    LorentzianRun run;
    run.times = grid.instants();
    run.system_states.reserve(composite.size());
    for (const DensityMatrix& rho : composite) {
        run.system_states.push_back(partial_trace(rho, emb.factorization, 0));
        run.max_top_population = std::max(run.max_top_population, expectation(top, rho).real());
    }
    run.truncation_warning = run.max_top_population > kTruncationWarningPopulation;
    return run;
}

TruncationChoice choose_truncation(const EmbeddingSpec& spec, const DensityMatrix& rho_s0, const TimeGrid& grid,
                                   const IntegratorConfig& cfg, double tol) {
    if (!(tol > 0.0)) {
        throw PreconditionError("choose_truncation: tolerance must be positive");
    }
    auto curve = [&](std::size_t da) {
        EmbeddingSpec s = spec;
        s.ancilla_dim = da;
        return simulate_lorentzian(s, rho_s0, grid, cfg).system_states;
    };

    TruncationChoice choice;
    std::vector<DensityMatrix> coarse = curve(2);
    for (std::size_t da = 2; da < kMaxAncillaDim; da *= 2) {
        std::vector<DensityMatrix> fine = curve(2 * da);
        double dist = 0.0;
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            dist = std::max(dist, trace_distance(coarse[k].op(), fine[k].op()));
        }
        choice.distances.push_back(dist);
        if (dist < tol) {
            choice.ancilla_dim = da;
            return choice;
        }
        coarse = std::move(fine);
    }
    std::ostringstream msg;
    msg << "choose_truncation: ancilla truncation not converged at d_A = " << kMaxAncillaDim / 2 << " vs "
        << kMaxAncillaDim << " (trace distance " << choice.distances.back() << ")";
    throw TruncationError(msg.str());
}

} // namespace pmode

// dynamics.cpp — Markovian propagation and the quantum regression rule

#include "pmode/dynamics.hpp"

#include <sstream>

#include "pmode/errors.hpp"

namespace pmode {

LindbladModel::LindbladModel(Operator hamiltonian, std::vector<JumpChannel> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
    if (h_.rows() != h_.cols() || h_.rows() == 0) {
        throw DimensionError("LindbladModel: Hamiltonian must be a non-empty square operator");
    }
    if (hermiticity_error(h_) > 1e-12) {
        throw PreconditionError("LindbladModel: Hamiltonian is not Hermitian");
    }
    h_eff_ = h_;
    for (const JumpChannel& j : jumps_) {
        if (j.op.rows() != h_.rows() || j.op.cols() != h_.cols()) {
            throw DimensionError("LindbladModel: jump operator dimension differs from the Hamiltonian");
        }
        if (!(j.rate >= 0.0)) {
            throw PreconditionError("LindbladModel: jump rates must be non-negative");
        }
        h_eff_ -= (0.5 * j.rate) * kI * (j.op.adjoint() * j.op);
    }
}

void TimeGrid::validate() const {
    if (n_points < 2) {
        throw PreconditionError("TimeGrid: need at least two output instants");
    }
    if (!(t1 > t0)) {
        throw PreconditionError("TimeGrid: t1 must exceed t0");
    }
}

std::vector<double> TimeGrid::instants() const {
    validate();
    std::vector<double> ts(n_points);
    const double dt = (t1 - t0) / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) {
        ts[k] = t0 + dt * static_cast<double>(k);
    }
    ts.back() = t1;
    return ts;
}

Operator lindblad_rhs(const LindbladModel& model, const Operator& rho) {
    if (static_cast<std::size_t>(rho.rows()) != model.dim() || rho.rows() != rho.cols()) {
        throw DimensionError("lindblad_rhs: state dimension differs from the model");
    }
    const Operator& heff = model.effective_hamiltonian();
    Operator out = -kI * (heff * rho) + kI * (rho * heff.adjoint());
    for (const JumpChannel& j : model.jumps()) {
        if (j.rate != 0.0) {
            out.noalias() += j.rate * (j.op * rho * j.op.adjoint());
        }
    }
    return out;
}

namespace {

std::vector<Operator> run(const LindbladModel& model, const Operator& x0, const TimeGrid& grid,
                          const IntegratorConfig& cfg, bool hermitian) {
    const std::vector<double> ts = grid.instants();
    DormandPrince45<Operator> stepper([&model](double, const Operator& x) { return lindblad_rhs(model, x); }, cfg);
    DormandPrince45<Operator>::StepHook hook;
    if (hermitian) {
        hook = [](double, Operator& x) { symmetrize(x); };
    }

    std::vector<Operator> out;
    out.reserve(ts.size());
    out.push_back(x0);
    double t = ts.front();
    Operator x = x0;
    for (std::size_t k = 1; k < ts.size(); ++k) {
        stepper.advance(t, x, ts[k], hook);
        out.push_back(x);
    }
    return out;
}

} // namespace

std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                                  const IntegratorConfig& cfg) {
    if (rho0.dim() != model.dim()) {
        throw DimensionError("evolve: initial state dimension differs from the model");
    }
    std::vector<Operator> ops = run(model, rho0.op(), grid, cfg, true);
    std::vector<DensityMatrix> states;
    states.reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k) {
        if (!ops[k].allFinite()) {
            throw IntegrationError("evolve: non-finite state", grid.instants()[k > 0 ? k - 1 : 0]);
        }
        states.emplace_back(std::move(ops[k]));
    }
    return states;
}

std::vector<Operator> propagate(const LindbladModel& model, const Operator& x0, const TimeGrid& grid,
                                const IntegratorConfig& cfg) {
    if (static_cast<std::size_t>(x0.rows()) != model.dim() || x0.rows() != x0.cols()) {
        throw DimensionError("propagate: operator dimension differs from the model");
    }
    return run(model, x0, grid, cfg, false);
}

std::vector<Complex> regression_correlator(const LindbladModel& model, const Operator& a, const Operator& b,
                                           const DensityMatrix& rho, const TimeGrid& taus,
                                           const IntegratorConfig& cfg) {
    if (rho.dim() != model.dim() || static_cast<std::size_t>(a.rows()) != model.dim() ||
        static_cast<std::size_t>(b.rows()) != model.dim()) {
        throw DimensionError("regression_correlator: operator dimensions differ from the model");
    }
    if (taus.t0 != 0.0) {
        throw PreconditionError("regression_correlator: delays must start at tau = 0");
    }
    const double drift = max_abs(lindblad_rhs(model, rho.op()));
    if (drift > kStationarityTolerance) {
        std::ostringstream msg;
        msg << "regression_correlator: state is not stationary (max |L rho| = " << drift << ")";
        throw PreconditionError(msg.str());
    }

    const Operator seed = b * rho.op();
    const std::vector<Operator> xs = propagate(model, seed, taus, cfg);
    std::vector<Complex> c;
    c.reserve(xs.size());
    for (const Operator& x : xs) {
        c.push_back(expectation(a, x));
    }
    return c;
}

} // namespace pmode

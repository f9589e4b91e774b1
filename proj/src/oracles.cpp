// oracles.cpp — Volterra memory-kernel solver and discretized-bath evolution

#include "pmode/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmode/errors.hpp"

namespace pmode {

std::vector<double> AmplitudeTrajectory::populations() const {
    std::vector<double> p;
    p.reserve(amplitudes.size());
    for (const Complex& c : amplitudes) {
        p.push_back(std::norm(c));
    }
    return p;
}

MemoryKernel lorentzian_kernel(const LorentzianSpectrum& bath) {
    bath.validate();
    const double g2 = bath.g * bath.g;
    const double half_gamma = 0.5 * bath.gamma;
    return {[g2, half_gamma](double tau) { return Complex(g2 * std::exp(-half_gamma * tau), 0.0); }, 0.0};
}

AmplitudeTrajectory volterra_amplitude(const LorentzianSpectrum& bath, const TimeGrid& grid, double h) {
    bath.validate();
    if (!(h > 0.0) || bath.g * h > 0.05 || bath.gamma * h > 0.05) {
        std::ostringstream msg;
        msg << "volterra_amplitude: step h = " << h << " too coarse; need g h <= 0.05 and gamma h <= 0.05, i.e. h <= "
            << 0.05 / std::max({bath.g, bath.gamma, 1e-300});
        throw PreconditionError(msg.str());
    }
    return volterra_amplitude(lorentzian_kernel(bath), grid, h);
}

AmplitudeTrajectory volterra_amplitude(const MemoryKernel& kernel, const TimeGrid& grid, double h) {
    grid.validate();
    if (grid.t0 != 0.0) {
        throw PreconditionError("volterra_amplitude: the grid must start at t = 0");
    }
    if (!kernel.smooth) {
        throw PreconditionError("volterra_amplitude: kernel has no smooth part");
    }
    if (!(h > 0.0) || h * std::sqrt(std::abs(kernel.smooth(0.0))) > 0.05 || h * kernel.local_rate > 0.05) {
        throw PreconditionError("volterra_amplitude: step too coarse for the kernel scale");
    }

    const double spacing = (grid.t1 - grid.t0) / static_cast<double>(grid.n_points - 1);
    const auto per_output = static_cast<std::size_t>(std::ceil(spacing / h - 1e-9));
    const double step = spacing / static_cast<double>(per_output);
    const std::size_t n_steps = per_output * (grid.n_points - 1);

    std::vector<Complex> k(n_steps + 1);
    for (std::size_t j = 0; j <= n_steps; ++j) {
        k[j] = kernel.smooth(step * static_cast<double>(j));
    }
    const double local = kernel.local_rate;

    std::vector<Complex> c(n_steps + 1);
    c[0] = 1.0;
    Complex z = 0.5 * local * c[0]; // history integral at t_n, including the local part
    const Complex implicit = 1.0 + 0.5 * step * (0.5 * step * k[0] + 0.5 * local);
    for (std::size_t n = 0; n < n_steps; ++n) {
        // Known part of the trapezoid history sum at t_{n+1}.
        Complex s = 0.5 * k[n + 1] * c[0];
        for (std::size_t j = 1; j <= n; ++j) {
            s += k[n + 1 - j] * c[j];
        }
        s *= step;
        c[n + 1] = (c[n] - 0.5 * step * (z + s)) / implicit;
        z = s + (0.5 * step * k[0] + 0.5 * local) * c[n + 1];
    }

    AmplitudeTrajectory out;
    out.times = grid.instants();
    out.amplitudes.reserve(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        out.amplitudes.push_back(c[i * per_output]);
    }
    return out;
}

double DiscreteBath::recurrence_time() const { return 2.0 * std::numbers::pi / min_spacing; }

double DiscreteBath::total_weight() const {
    double w = 0.0;
    for (double gk : couplings) {
        w += gk * gk;
    }
    return w;
}

DiscreteBath make_discrete_bath(const LorentzianSpectrum& bath, std::size_t n_modes, double half_window,
                                BathGrid kind) {
    bath.validate();
    if (n_modes < 1 || !(half_window > 0.0)) {
        throw PreconditionError("make_discrete_bath: need at least one mode and a positive window");
    }
    const double g2 = bath.g * bath.g;
    const double half_gamma = 0.5 * bath.gamma;
    const auto n = static_cast<double>(n_modes);

    DiscreteBath out;
    out.detunings.resize(n_modes);
    out.couplings.resize(n_modes);
    if (kind == BathGrid::Uniform) {
        const double dw = 2.0 * half_window / n;
        for (std::size_t k = 0; k < n_modes; ++k) {
            const double d = -half_window + (static_cast<double>(k) + 0.5) * dw;
            const double j = g2 * bath.gamma / (d * d + half_gamma * half_gamma);
            out.detunings[k] = d;
            out.couplings[k] = std::sqrt(j * dw / (2.0 * std::numbers::pi));
        }
        out.min_spacing = dw;
    } else {
        // Substituting d = (gamma/2) tan(u) turns J dw / 2pi into g^2 du / pi.
        const double umax = std::atan(half_window / half_gamma);
        const double du = 2.0 * umax / n;
        const double gk = std::sqrt(g2 * du / std::numbers::pi);
        for (std::size_t k = 0; k < n_modes; ++k) {
            out.detunings[k] = half_gamma * std::tan(-umax + (static_cast<double>(k) + 0.5) * du);
            out.couplings[k] = gk;
        }
        // Narrowest cell sits at the line centre.
        out.min_spacing = n_modes == 1 ? 2.0 * half_window : half_gamma * 2.0 * std::tan(0.5 * du);
    }
    return out;
}

DiscreteBathRun discrete_bath_evolve(const SystemSpec& system, const DiscreteBath& bath, const TimeGrid& grid) {
    system.validate();
    if (system.dim() != 2 || max_abs(system.coupling - sigma_minus()) > 1e-12) {
        throw UnsupportedModelError("discrete_bath_evolve: only the two-level system with V = sigma_minus is supported");
    }
    const Operator& hs = system.hamiltonian;
    if (std::abs(hs(0, 1)) > 1e-12) {
        throw UnsupportedModelError("discrete_bath_evolve: system Hamiltonian must be diagonal");
    }
    const double detuning = (hs(1, 1) - hs(0, 0)).real();
    const std::vector<double> ts = grid.instants();

    // Real symmetric generator on (c, b_1, ..., b_n).
    const auto n = static_cast<Eigen::Index>(bath.couplings.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m(0, 0) = detuning;
    for (Eigen::Index k = 0; k < n; ++k) {
        m(0, k + 1) = bath.couplings[static_cast<std::size_t>(k)];
        m(k + 1, 0) = bath.couplings[static_cast<std::size_t>(k)];
        m(k + 1, k + 1) = bath.detunings[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd& energies = es.eigenvalues();
    const Eigen::MatrixXd& modes = es.eigenvectors();
    // Overlaps of the initial state |e, vac> with each eigenvector.
    const Eigen::VectorXd overlap = modes.row(0).transpose();
    const Eigen::MatrixXcd modes_c = modes.cast<Complex>();

    DiscreteBathRun run;
    run.trajectory.times = ts;
    run.trajectory.amplitudes.reserve(ts.size());
    for (double t : ts) {
        Eigen::VectorXcd phased(n + 1);
        for (Eigen::Index j = 0; j <= n; ++j) {
            phased(j) = overlap(j) * std::exp(Complex(0.0, -energies(j) * (t - grid.t0)));
        }
        const Eigen::VectorXcd psi = modes_c * phased;
        run.trajectory.amplitudes.push_back(psi(0));
        run.max_norm_error = std::max(run.max_norm_error, std::abs(psi.squaredNorm() - 1.0));
    }
    run.recurrence_warning = grid.t1 - grid.t0 > 0.5 * bath.recurrence_time();
    return run;
}

DiscreteBathRun discrete_bath_evolve(const SystemSpec& system, const LorentzianSpectrum& bath, std::size_t n_modes,
                                     double half_window, const TimeGrid& grid, BathGrid kind) {
    if (n_modes < 50) {
        throw PreconditionError("discrete_bath_evolve: need at least 50 bath modes");
    }
    if (half_window < 10.0 * bath.gamma) {
        throw PreconditionError("discrete_bath_evolve: window must be at least 10 gamma");
    }
    return discrete_bath_evolve(system, make_discrete_bath(bath, n_modes, half_window, kind), grid);
}

} // namespace pmode

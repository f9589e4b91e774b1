#include "doctest.h"

#include <cmath>

#include "pmode/errors.hpp"
#include "pmode/oracles.hpp"
#include "pmode/pseudomode.hpp"
#include "support/closed_form.hpp"

using namespace pmode;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

std::vector<double> closed_form_curve(double g, double gamma, const std::vector<double>& ts) {
    std::vector<double> p;
    for (double t : ts) {
        p.push_back(testing::lorentzian_excited_population(g, gamma, t));
    }
    return p;
}

} // namespace

TEST_CASE("volterra_amplitude") {
    const TimeGrid grid{0.0, 10.0, 101};

    SUBCASE("zero kernel") {
        const AmplitudeTrajectory tr = volterra_amplitude(LorentzianSpectrum{0.0, 0.0, 1.0}, grid, 0.01);
        for (const Complex& c : tr.amplitudes) {
            CHECK(c == Complex(1.0));
        }
    }
    SUBCASE("delta kernel gives exponential decay") {
        const double f2 = 0.8;
        const MemoryKernel local{[](double) { return Complex(0.0); }, f2};
        const AmplitudeTrajectory tr = volterra_amplitude(local, grid, 0.001);
        const std::vector<double> p = tr.populations();
        for (std::size_t k = 0; k < p.size(); ++k) {
            CHECK(std::abs(p[k] - std::exp(-f2 * tr.times[k])) < 1e-7);
        }
    }
    SUBCASE("matches the closed form") {
        for (double gamma : {0.2, 1.0, 10.0}) {
            const LorentzianSpectrum bath{1.0, 0.0, gamma};
            const double h = 0.001 / std::max(1.0, gamma);
            const AmplitudeTrajectory tr = volterra_amplitude(bath, grid, h);
            CHECK(std::abs(tr.amplitudes.front() - 1.0) == 0.0);
            CHECK(max_diff(tr.populations(), closed_form_curve(1.0, gamma, tr.times)) < 1e-6);
            for (const Complex& c : tr.amplitudes) {
                CHECK(std::abs(c) <= 1.0 + 1e-9);
            }
        }
    }
    SUBCASE("second-order self-convergence") {
        const LorentzianSpectrum bath{1.0, 0.0, 1.0};
        const TimeGrid coarse{0.0, 10.0, 11};
        const double h = 0.02;
        const auto ref = volterra_amplitude(bath, coarse, h / 8.0).amplitudes;
        const double e1 = max_diff(volterra_amplitude(bath, coarse, h).amplitudes, ref);
        const double e2 = max_diff(volterra_amplitude(bath, coarse, h / 2.0).amplitudes, ref);
        CHECK(e1 / e2 >= 3.5);
        CHECK(e1 / e2 <= 4.5);
    }
    SUBCASE("Markovian limit at fixed peak rate") {
        const double peak = 0.5;
        double prev = 1.0;
        for (double gamma : {10.0, 100.0}) {
            const LorentzianSpectrum bath{std::sqrt(peak * gamma / 4.0), 0.0, gamma};
            const AmplitudeTrajectory tr = volterra_amplitude(bath, {0.0, 5.0, 6}, 0.05 / gamma);
            double rel = 0.0;
            for (std::size_t k = 0; k < tr.times.size(); ++k) {
                const double expected = std::exp(-0.5 * peak * tr.times[k]);
                rel = std::max(rel, std::abs(std::abs(tr.amplitudes[k]) - expected) / expected);
            }
            CHECK(rel < prev);
            prev = rel;
        }
        CHECK(prev < 0.01);
    }
    SUBCASE("refuses coarse steps and shifted grids") {
        CHECK_THROWS_AS(volterra_amplitude(LorentzianSpectrum{1.0, 0.0, 1.0}, grid, 0.1), PreconditionError);
        CHECK_THROWS_AS(volterra_amplitude(LorentzianSpectrum{0.1, 0.0, 10.0}, grid, 0.01), PreconditionError);
        CHECK_THROWS_AS(volterra_amplitude(LorentzianSpectrum{1.0, 0.0, 1.0}, {1.0, 2.0, 3}, 0.01),
                        PreconditionError);
    }
}

TEST_CASE("discrete bath construction") {
    const LorentzianSpectrum bath{1.0, 2.0, 0.5};
    const double w = 20.0 * bath.gamma;
    // Lorentzian weight inside the window.
    const double inside = 2.0 / 3.14159265358979323846 * std::atan(2.0 * w / bath.gamma);
    for (BathGrid kind : {BathGrid::Uniform, BathGrid::EqualWeight}) {
        const DiscreteBath b = make_discrete_bath(bath, 400, w, kind);
        CHECK(b.detunings.size() == 400);
        CHECK(b.total_weight() == doctest::Approx(inside).epsilon(2e-3));
        CHECK(b.total_weight() <= 1.0);
        for (double d : b.detunings) {
            CHECK(std::abs(d) < w);
        }
    }
    const DiscreteBath uniform = make_discrete_bath(bath, 400, w, BathGrid::Uniform);
    CHECK(uniform.min_spacing == doctest::Approx(2.0 * w / 400.0));
}

TEST_CASE("discrete_bath_evolve") {
    const TimeGrid grid{0.0, 10.0, 201};

    SUBCASE("uncoupled modes leave the system excited") {
        const DiscreteBathRun run = discrete_bath_evolve(two_level_system(), LorentzianSpectrum{0.0, 0.0, 1.0}, 100,
                                                         20.0, grid);
        for (const Complex& c : run.trajectory.amplitudes) {
            CHECK(std::abs(c - 1.0) < 1e-12);
        }
    }
    SUBCASE("norm conservation") {
        for (double gamma : {0.2, 1.0, 10.0}) {
            const DiscreteBathRun run =
                discrete_bath_evolve(two_level_system(), LorentzianSpectrum{1.0, 0.0, gamma}, 400, 20.0 * gamma, grid);
            CHECK(run.max_norm_error <= 1e-9);
        }
    }
    SUBCASE("three-way agreement in the strong-coupling regime") {
        const LorentzianSpectrum bath{1.0, 0.0, 0.2};
        const DiscreteBathRun disc = discrete_bath_evolve(two_level_system(), bath, 400, 20.0 * bath.gamma, grid);
        CHECK_FALSE(disc.recurrence_warning);
        const std::vector<double> pd = disc.trajectory.populations();
        const std::vector<double> pv = volterra_amplitude(bath, grid, 0.001).populations();
        const LorentzianRun pm = simulate_lorentzian({two_level_system(), bath, 2}, DensityMatrix::basis(2, 1), grid,
                                                     {1e-10, 1e-12, 0.1, 1e-3});
        std::vector<double> pp;
        for (const DensityMatrix& s : pm.system_states) {
            pp.push_back(s.op()(1, 1).real());
        }
        CHECK(max_diff(pd, pv) <= 2e-3);
        CHECK(max_diff(pd, pp) <= 2e-3);
        // The uniform grid works here too; its recurrence time (314) is far away.
        const DiscreteBathRun uni =
            discrete_bath_evolve(two_level_system(), bath, 400, 20.0 * bath.gamma, grid, BathGrid::Uniform);
        CHECK(max_diff(uni.trajectory.populations(), pv) <= 2e-3);
    }
    SUBCASE("uniform grid recurrence is flagged") {
        const LorentzianSpectrum bath{1.0, 0.0, 10.0};
        const DiscreteBathRun uni =
            discrete_bath_evolve(two_level_system(), bath, 400, 200.0, grid, BathGrid::Uniform);
        CHECK(uni.recurrence_warning);
        const DiscreteBathRun eq = discrete_bath_evolve(two_level_system(), bath, 400, 200.0, grid);
        CHECK_FALSE(eq.recurrence_warning);
    }
    SUBCASE("error shrinks as modes double at fixed window") {
        const LorentzianSpectrum bath{1.0, 0.0, 10.0};
        const std::vector<double> exact = closed_form_curve(1.0, 10.0, grid.instants());
        double prev = 1.0;
        for (std::size_t n : {100u, 200u, 400u}) {
            const double err = max_diff(
                discrete_bath_evolve(two_level_system(), bath, n, 200.0, grid).trajectory.populations(), exact);
            CHECK(err <= 0.5 * prev);
            prev = err;
        }
    }
    SUBCASE("detuning shifts the system energy") {
        // Far detuned: the excited population hardly decays.
        const DiscreteBathRun run = discrete_bath_evolve(two_level_system(50.0), LorentzianSpectrum{1.0, 0.0, 1.0},
                                                         400, 20.0, {0.0, 2.0, 21});
        CHECK(run.trajectory.populations().back() > 0.95);
    }
    SUBCASE("preconditions") {
        const LorentzianSpectrum bath{1.0, 0.0, 1.0};
        CHECK_THROWS_AS(discrete_bath_evolve(two_level_system(), bath, 20, 20.0, grid), PreconditionError);
        CHECK_THROWS_AS(discrete_bath_evolve(two_level_system(), bath, 400, 5.0, grid), PreconditionError);
        CHECK_THROWS_AS(discrete_bath_evolve(oscillator_system(3), bath, 400, 20.0, grid), UnsupportedModelError);
    }
}

#include "doctest.h"

#include <cmath>

#include "pmode/dynamics.hpp"
#include "pmode/errors.hpp"

using namespace pmode;

namespace {

LindbladModel tls_decay(double rate) { return LindbladModel(Operator::Zero(2, 2), {{rate, sigma_minus()}}); }

LindbladModel damped_oscillator(std::size_t d, double rate) {
    return LindbladModel(Operator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)),
                         {{rate, annihilation(d)}});
}

const IntegratorConfig kTight{1e-10, 1e-12, 0.1, 1e-3};

void check_cptp(const std::vector<DensityMatrix>& states) {
    for (const DensityMatrix& s : states) {
        const DensityReport r = density_report(s.op());
        CHECK(r.trace_error <= 1e-8);
        CHECK(r.hermiticity_error <= 1e-8);
        CHECK(r.min_eigenvalue >= -1e-8);
    }
}

} // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(LindbladModel(sigma_minus(), {}), PreconditionError);
    CHECK_THROWS_AS(LindbladModel(Operator::Zero(2, 2), {{-1.0, sigma_minus()}}), PreconditionError);
    CHECK_THROWS_AS(LindbladModel(Operator::Zero(2, 2), {{1.0, annihilation(3)}}), DimensionError);
    CHECK_THROWS_AS(TimeGrid({1.0, 1.0, 5}).validate(), PreconditionError);
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1}).validate(), PreconditionError);
    CHECK_THROWS_AS(IntegratorConfig({1.5, 1e-3, 0.1, 1e-3}).validate(), PreconditionError);
}

TEST_CASE("lindblad_rhs hand-evaluated cases") {
    SUBCASE("vanishing generator") {
        const LindbladModel m(Operator::Zero(3, 3), {});
        Operator x = Operator::Random(3, 3);
        CHECK(max_abs(lindblad_rhs(m, x)) == 0.0);
    }
    SUBCASE("excited-state decay at rate 0.5") {
        const Operator d = lindblad_rhs(tls_decay(0.5), projector(2, 1));
        CHECK(d(1, 1).real() == doctest::Approx(-0.5));
        CHECK(d(0, 0).real() == doctest::Approx(0.5));
        CHECK(std::abs(d.trace()) < 1e-12);
    }
    SUBCASE("coherence decays at half the rate") {
        Operator rho = Operator::Zero(2, 2);
        rho(1, 0) = Complex(0.3, 0.1); // rho_eg
        const Operator d = lindblad_rhs(tls_decay(0.5), rho);
        CHECK(std::abs(d(1, 0) - (-0.25) * rho(1, 0)) < 1e-15);
    }
    SUBCASE("traceless and Hermitian for Hermitian input") {
        const Operator a = annihilation(4);
        const Operator h = a + a.adjoint() + 0.3 * a.adjoint() * a;
        const LindbladModel m(h, {{0.7, a}, {0.2, a.adjoint() * a}});
        Operator x = Operator::Random(4, 4);
        x = x * x.adjoint();
        const Operator d = lindblad_rhs(m, x);
        CHECK(std::abs(d.trace()) < 1e-12);
        CHECK(hermiticity_error(d) < 1e-12);
    }
    CHECK_THROWS_AS(lindblad_rhs(tls_decay(1.0), identity(3)), DimensionError);
}

TEST_CASE("evolve") {
    SUBCASE("trivial generator keeps the state") {
        const LindbladModel m(Operator::Zero(2, 2), {});
        const DensityMatrix rho0(0.5 * identity(2) + 0.2 * sigma_minus() + 0.2 * sigma_plus());
        const auto states = evolve(m, rho0, {0.0, 3.0, 7}, kTight);
        REQUIRE(states.size() == 7);
        for (const DensityMatrix& s : states) {
            CHECK(max_abs(s.op() - rho0.op()) == 0.0);
        }
    }
    SUBCASE("two-level decay matches exp(-t)") {
        const TimeGrid grid{0.0, 1.0, 11};
        const auto states = evolve(tls_decay(1.0), DensityMatrix::basis(2, 1), grid, IntegratorConfig{});
        CHECK(max_abs(states.front().op() - projector(2, 1)) == 0.0);
        CHECK(std::abs(states.back().op()(1, 1).real() - std::exp(-1.0)) < 1e-6);
        check_cptp(states);
    }
    SUBCASE("damped oscillator number decays as exp(-t)") {
        const TimeGrid grid{0.0, 5.0, 51};
        const auto states = evolve(damped_oscillator(5, 1.0), DensityMatrix::basis(5, 1), grid, IntegratorConfig{});
        const Operator a = annihilation(5);
        const std::vector<double> ts = grid.instants();
        for (std::size_t k = 0; k < ts.size(); ++k) {
            CHECK(std::abs(expectation(a.adjoint() * a, states[k]).real() - std::exp(-ts[k])) < 1e-6);
        }
        check_cptp(states);
    }
    SUBCASE("ground state of the damped oscillator is stationary") {
        const DensityMatrix ground = DensityMatrix::basis(5, 0);
        const auto states = evolve(damped_oscillator(5, 1.0), ground, {0.0, 10.0, 101}, kTight);
        for (const DensityMatrix& s : states) {
            CHECK(max_abs(s.op() - ground.op()) <= 1e-10);
        }
    }
    SUBCASE("driven dissipative oscillator stays physical") {
        const Operator a = annihilation(6);
        const LindbladModel m(0.8 * (a + a.adjoint()) + 0.5 * a.adjoint() * a, {{0.4, a}});
        check_cptp(evolve(m, DensityMatrix::basis(6, 0), {0.0, 8.0, 81}, IntegratorConfig{}));
    }
    SUBCASE("tightening tolerances reduces the error") {
        const TimeGrid grid{0.0, 1.0, 2};
        double prev = 1.0;
        for (double tol = 1e-8; tol > 1e-10; tol /= 2.0) {
            const auto s = evolve(tls_decay(1.0), DensityMatrix::basis(2, 1), grid, {tol, tol, 1.0, 1e-2});
            const double err = std::abs(s.back().op()(1, 1).real() - std::exp(-1.0));
            CHECK(prev / err >= 2.0);
            prev = err;
        }
    }
    SUBCASE("step underflow is reported with the last good time") {
        // Finite-time blow-up: dx/dt = x^2 has a singularity at t = 1.
        DormandPrince45<Operator> stepper(
            [](double, const Operator& x) { return Operator(x.cwiseProduct(x)); }, IntegratorConfig{});
        Operator x = Operator::Ones(1, 1);
        double t = 0.0;
        try {
            stepper.advance(t, x, 2.0);
            FAIL("expected an integration failure");
        } catch (const IntegrationError& e) {
            CHECK(e.last_good_time > 0.9);
            CHECK(e.last_good_time < 1.0);
        }
    }
}

TEST_CASE("regression correlator") {
    const TimeGrid taus{0.0, 6.0, 61};
    const std::vector<double> ts = taus.instants();

    SUBCASE("damped ancilla gives exp(-gamma tau / 2)") {
        const double gamma = 1.0;
        const Operator a = annihilation(3);
        const auto c =
            regression_correlator(damped_oscillator(3, gamma), a, a.adjoint(), DensityMatrix::basis(3, 0), taus, kTight);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            CHECK(std::abs(c[k] - std::exp(-0.5 * gamma * ts[k])) < 1e-7);
        }
        // Lab-frame phase restored analytically.
        const double omega0 = 2.5;
        const Complex lab = c[30] * std::exp(Complex(0.0, -omega0 * ts[30]));
        CHECK(std::abs(lab - std::exp(Complex(-0.5 * gamma * ts[30], -omega0 * ts[30]))) < 1e-7);
    }
    SUBCASE("undamped ancilla gives 1") {
        const Operator a = annihilation(3);
        const auto c =
            regression_correlator(damped_oscillator(3, 0.0), a, a.adjoint(), DensityMatrix::basis(3, 0), taus, kTight);
        for (const Complex& v : c) {
            CHECK(std::abs(v - 1.0) <= 1e-10);
        }
    }
    SUBCASE("zero delay equals tr(A B rho)") {
        const Operator a = annihilation(4);
        const Operator x = a + 0.3 * a.adjoint() * a;
        const Operator y = a.adjoint() * a.adjoint() + 0.1 * identity(4);
        const auto c = regression_correlator(damped_oscillator(4, 0.8), x, y, DensityMatrix::basis(4, 0),
                                             {0.0, 1.0, 3}, kTight);
        CHECK(std::abs(c[0] - expectation(Operator(x * y), projector(4, 0))) < 1e-10);
    }
    SUBCASE("non-stationary states are rejected") {
        const Operator a = annihilation(3);
        CHECK_THROWS_AS(regression_correlator(damped_oscillator(3, 1.0), a, a.adjoint(), DensityMatrix::basis(3, 1),
                                              taus, kTight),
                        PreconditionError);
    }
}

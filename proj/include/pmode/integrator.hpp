// integrator.hpp — Adaptive Dormand-Prince 5(4) stepper for Eigen-valued ODEs
//
// Works on any dense Eigen state (density matrices, state vectors). Steps are
// clipped to land exactly on requested output times. Step size is controlled
// by a PI controller on the embedded error estimate per unit step (the local
// error divided by h), which makes the global error shrink slightly faster
// than linearly in the tolerance.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "pmode/errors.hpp"

namespace pmode {

struct IntegratorConfig {
    double rel_tol{1e-8};
    double abs_tol{1e-10};
    double max_step{0.1};
    double initial_step{1e-3};

    void validate() const;
};

inline void IntegratorConfig::validate() const {
    auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!in_unit(rel_tol) || !in_unit(abs_tol)) {
        throw PreconditionError("IntegratorConfig: tolerances must lie in (0, 1)");
    }
    if (!(max_step > 0.0) || !(initial_step > 0.0)) {
        throw PreconditionError("IntegratorConfig: step sizes must be positive");
    }
}

template <typename State>
class DormandPrince45 {
public:
    using Rhs = std::function<State(double, const State&)>;
    // Called after every accepted step with (t, y); may modify y in place.
    using StepHook = std::function<void(double, State&)>;

    struct Trial {
        State y;
        double error; // scaled per unit step, accept when <= 1
    };

    DormandPrince45(Rhs rhs, IntegratorConfig cfg) : rhs_(std::move(rhs)), cfg_(cfg), h_(cfg.initial_step) {
        cfg_.validate();
    }

    // One trial step of size h from (t, y); the returned solution is the 5th-order one.
    Trial try_step(double t, const State& y, double h) const {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        // b - b* (difference between 5th and 4th order weights)
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        const State k1 = rhs_(t, y);
        const State k2 = rhs_(t + c2 * h, State(y + h * (a21 * k1)));
        const State k3 = rhs_(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
        const State k4 = rhs_(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 = rhs_(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const State k6 = rhs_(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        State y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = rhs_(t + h, y5);
        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scaled = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
            scaled = std::max(scaled, std::abs(err(i)) / sc);
        }
        return {std::move(y5), scaled / h};
    }

    // Take one accepted step from (t, y) toward t_end (never past it). Throws
    // IntegrationError if the step size underflows.
    void step(double& t, State& y, double t_end) {
        const double remaining = t_end - t;
        double h = std::min(h_, cfg_.max_step);
        // Stretch onto t_end rather than leave a sliver that rounding cannot resolve.
        const bool clipped = h >= remaining * (1.0 - 1e-9);
        if (clipped) {
            h = remaining;
        }
        for (;;) {
            const double floor = 1e-14 * std::max(1.0, std::abs(t));
            if (h < floor) {
                std::ostringstream msg;
                msg << "step size underflow at t = " << t << " (stiff or singular right-hand side)";
                throw IntegrationError(msg.str(), t);
            }
            Trial trial = try_step(t, y, h);
            if (!std::isfinite(trial.error)) {
                h *= kMinFactor;
                continue;
            }
            if (trial.error <= 1.0) {
                const double e = std::max(trial.error, 1e-10);
                double fac = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev_, kBeta);
                fac = std::clamp(fac, kMinFactor, kMaxFactor);
                err_prev_ = e;
                // Keep the unclipped proposal so output times do not shrink h permanently.
                h_ = clipped ? std::max(h_, h * fac) : h * fac;
                t = clipped ? t_end : t + h;
                y = std::move(trial.y);
                return;
            }
            h *= std::max(kMinFactor, kSafety * std::pow(trial.error, -0.25));
            h_ = h;
        }
    }

    // Advance (t, y) to t_end, calling hook after every accepted step.
    void advance(double& t, State& y, double t_end, const StepHook& hook = {}) {
        while (t < t_end) {
            step(t, y, t_end);
            if (hook) {
                hook(t, y);
            }
        }
    }

    const IntegratorConfig& config() const { return cfg_; }

private:
    static constexpr double kSafety = 0.9;
    static constexpr double kBeta = 0.04;
    static constexpr double kAlpha = 0.25 - 0.75 * kBeta;
    static constexpr double kMinFactor = 0.2;
    static constexpr double kMaxFactor = 10.0;

    Rhs rhs_;
    IntegratorConfig cfg_;
    double h_;
    double err_prev_{1e-4};
};

} // namespace pmode

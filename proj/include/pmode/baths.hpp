// baths.hpp — Reservoir spectra g_w^2 D(w) and their field correlation functions

#pragma once

#include <variant>
#include <vector>

#include "pmode/algebra.hpp"

namespace pmode {

// Delta-correlated limit; only ever enters as a Lindblad rate.
struct FlatSpectrum {
    double f2{0.0};
};

// g^2 gamma / ((w - omega0)^2 + (gamma/2)^2)
struct LorentzianSpectrum {
    double g{0.0};
    double omega0{0.0};
    double gamma{1.0};

    void validate() const;
    double peak() const { return 4.0 * g * g / gamma; }
};

using SpectralDensity = std::variant<FlatSpectrum, LorentzianSpectrum>;

void validate(const SpectralDensity& sd);

double spectral_density_eval(const SpectralDensity& sd, double omega);

// alpha(tau) = tr_R(F(tau) F^dagger(0) rho_R) = g^2 exp(-i omega0 tau - gamma |tau| / 2).
// Throws UnsupportedModelError for the flat spectrum.
Complex correlation_function(const SpectralDensity& sd, double tau);

struct CorrelationSample {
    double tau{0.0};
    Complex value;
};

std::vector<CorrelationSample> sample_correlation(const SpectralDensity& sd, const std::vector<double>& taus);

struct FourierCheck {
    std::vector<double> taus;
    // Default window is +-40 gamma around omega0.
    double half_window{0.0};
    std::size_t n_quad{20001};
};

// Max over the tau grid of |trapezoid FT of the spectrum - alpha(tau)|.
double verify_fourier_pair(const LorentzianSpectrum& sd, const FourierCheck& check);

// Composite-trapezoid quadrature of spectrum(w) e^{-i w tau} dw / 2pi over [omega0 - W, omega0 + W].
Complex spectrum_fourier_transform(const LorentzianSpectrum& sd, double tau, double half_window,
                                   std::size_t n_quad);

// Golden-rule rate: the spectrum evaluated at the system transition frequency.
double markovian_rate(const SpectralDensity& sd, double omega_system);

} // namespace pmode

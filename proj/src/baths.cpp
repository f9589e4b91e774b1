// baths.cpp — Spectral densities and correlation functions

#include "pmode/baths.hpp"

#include <cmath>
#include <numbers>

#include "pmode/errors.hpp"

namespace pmode {

void LorentzianSpectrum::validate() const {
    if (!(g >= 0.0)) {
        throw PreconditionError("LorentzianSpectrum: coupling g must be non-negative");
    }
    if (!(gamma > 0.0)) {
        throw PreconditionError("LorentzianSpectrum: width gamma must be positive");
    }
    if (!std::isfinite(omega0)) {
        throw PreconditionError("LorentzianSpectrum: omega0 must be finite");
    }
}

void validate(const SpectralDensity& sd) {
    if (const auto* flat = std::get_if<FlatSpectrum>(&sd)) {
        if (!(flat->f2 >= 0.0)) {
            throw PreconditionError("FlatSpectrum: f2 must be non-negative");
        }
    } else {
        std::get<LorentzianSpectrum>(sd).validate();
    }
}

namespace {

double lorentzian(const LorentzianSpectrum& l, double omega) {
    const double d = omega - l.omega0;
    return l.g * l.g * l.gamma / (d * d + 0.25 * l.gamma * l.gamma);
}

} // namespace

double spectral_density_eval(const SpectralDensity& sd, double omega) {
    validate(sd);
    if (const auto* flat = std::get_if<FlatSpectrum>(&sd)) {
        return flat->f2;
    }
    return lorentzian(std::get<LorentzianSpectrum>(sd), omega);
}

Complex correlation_function(const SpectralDensity& sd, double tau) {
    validate(sd);
    const auto* l = std::get_if<LorentzianSpectrum>(&sd);
    if (l == nullptr) {
        throw UnsupportedModelError(
            "correlation_function: the flat spectrum is delta-correlated; use markovian_rate instead");
    }
    return l->g * l->g * std::exp(Complex(-0.5 * l->gamma * std::abs(tau), -l->omega0 * tau));
}

std::vector<CorrelationSample> sample_correlation(const SpectralDensity& sd, const std::vector<double>& taus) {
    std::vector<CorrelationSample> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        out.push_back({tau, correlation_function(sd, tau)});
    }
    return out;
}

Complex spectrum_fourier_transform(const LorentzianSpectrum& sd, double tau, double half_window,
                                   std::size_t n_quad) {
    sd.validate();
    if (n_quad < 2 || !(half_window > 0.0)) {
        throw PreconditionError("spectrum_fourier_transform: need n_quad >= 2 and a positive window");
    }
    const double lo = sd.omega0 - half_window;
    const double dw = 2.0 * half_window / static_cast<double>(n_quad - 1);
    Complex sum = 0.0;
    for (std::size_t k = 0; k < n_quad; ++k) {
        const double w = lo + dw * static_cast<double>(k);
        const double weight = (k == 0 || k + 1 == n_quad) ? 0.5 : 1.0;
        sum += weight * lorentzian(sd, w) * std::exp(Complex(0.0, -w * tau));
    }
    return sum * dw / (2.0 * std::numbers::pi);
}

double verify_fourier_pair(const LorentzianSpectrum& sd, const FourierCheck& check) {
    const double window = check.half_window > 0.0 ? check.half_window : 40.0 * sd.gamma;
    double worst = 0.0;
    for (double tau : check.taus) {
        const Complex quad = spectrum_fourier_transform(sd, tau, window, check.n_quad);
        worst = std::max(worst, std::abs(quad - correlation_function(sd, tau)));
    }
    return worst;
}

double markovian_rate(const SpectralDensity& sd, double omega_system) {
    return spectral_density_eval(sd, omega_system);
}

} // namespace pmode

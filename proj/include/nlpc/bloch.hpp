#pragma once

#include <array>
#include <complex>
#include <optional>

#include "nlpc/material.hpp"

namespace nlpc {

/// Per-frequency dispersion record. K1 = dK/domega, K2 = (1/2!) d^2K/domega^2;
/// both are NaN inside a gap.
struct DispersionSample {
    double omega = 0.0;
    Polarization pol = Polarization::ordinary;
    std::complex<double> K;
    double K1 = 0.0;
    double K2 = 0.0;
    bool in_gap = false;
    int order = 1;
};

struct BandGap {
    Polarization pol = Polarization::ordinary;
    int order = 1;
    double omega_min = 0.0;
    double omega_max = 0.0;
    double lambda_center_nm = 0.0;

    double width() const { return omega_max - omega_min; }
    bool contains(double omega) const { return omega >= omega_min && omega <= omega_max; }
};

/// |kappa|/kbar for order m: alpha_layer |sin(pi m d)| / (2 pi m). At d = 0.5
/// this is [1 - cos(m pi)] alpha / (4 pi m).
double coupling_ratio(const CrystalSpec& spec, int order);

/// Forward/backward coupling coefficient (1/m), purely imaginary.
std::complex<double> coupling_coefficient(const CrystalSpec& spec, double omega, Polarization pol, int order);

/// Bragg phase mismatch 2 kbar(omega) - 2 pi m / Lambda (rad/m).
double bragg_mismatch(const CrystalSpec& spec, double omega, Polarization pol, int order);

/// Argument of the square root in the coupled-mode dispersion relation,
/// (dbeta/2)^2 - |kappa|^2. Non-positive inside the gap (edges count as in-gap).
double coupled_mode_discriminant(const CrystalSpec& spec, double omega, Polarization pol, int order);

bool in_band_gap(const CrystalSpec& spec, double omega, Polarization pol, int order);
inline bool in_band_gap(const CrystalSpec& spec, double omega, Polarization pol) {
    return in_band_gap(spec, omega, pol, spec.gap_order);
}

/// Coupled-mode Bloch wavenumber K = pi m/Lambda +/- sqrt(...). The minus
/// branch applies below the gap, the plus branch above it. Inside the gap the
/// result is pi m/Lambda + i q with q >= 0 (forward-decaying).
std::complex<double> bloch_wavenumber(const CrystalSpec& spec, double omega, Polarization pol, int order);
inline std::complex<double> bloch_wavenumber(const CrystalSpec& spec, double omega, Polarization pol) {
    return bloch_wavenumber(spec, omega, pol, spec.gap_order);
}

/// Real Bloch wavenumber of a propagating wave; throws InGapError otherwise.
double propagating_wavenumber(const CrystalSpec& spec, double omega, Polarization pol, const char* field = "field");

/// Taylor jet of K(omega) about omega (coefficients include 1/j!).
/// Throws InGapError inside the gap.
DispersionJet bloch_jet(const CrystalSpec& spec, double omega, Polarization pol, int order);

/// K^(j) = (1/j!) d^jK/domega^j for j = 1..4, entry [0] holds K itself.
std::array<double, 5> dispersion_derivatives(const CrystalSpec& spec, double omega, Polarization pol, int order);

DispersionSample sample_dispersion(const CrystalSpec& spec, double omega, Polarization pol);

/// Coupled-mode gap of order m, or nullopt when the coupling vanishes or the
/// gap lies outside the material window.
std::optional<BandGap> band_gap(const CrystalSpec& spec, Polarization pol, int order);
inline std::optional<BandGap> band_gap(const CrystalSpec& spec, Polarization pol) {
    return band_gap(spec, pol, spec.gap_order);
}

/// Frequency where kbar(omega) = target, searched over the material window.
std::optional<double> solve_mean_wavenumber(const CrystalSpec& spec, Polarization pol, double target);

}  // namespace nlpc

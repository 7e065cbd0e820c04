#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nlpc/material.hpp"

namespace nlpc {

/// Exact Bloch data of the bilayer from its 2x2 unit-cell transfer matrix at
/// normal incidence. K is unfolded to the branch closest to the mean-field
/// wavenumber; inside a gap it carries a positive imaginary part.
struct TransferMatrixBloch {
    std::complex<double> K;
    double half_trace = 0.0;
    bool in_gap = false;
};

/// Half-trace of the unit-cell matrix, cos(K Lambda) for propagating waves.
double half_trace(const CrystalSpec& spec, double omega, Polarization pol);

TransferMatrixBloch transfer_matrix_bloch(const CrystalSpec& spec, double omega, Polarization pol);

/// Fourier coefficients eps_l of the periodic Bloch envelope E_K(z), for
/// harmonics G_l = 2 pi l / Lambda with |l| <= max_harmonic. Normalized so
/// that the largest coefficient equals 1.
struct BlochFourier {
    Polarization pol = Polarization::ordinary;
    double omega = 0.0;
    int max_harmonic = 3;
    std::vector<std::complex<double>> coeffs;

    std::complex<double> operator()(int l) const { return coeffs.at(static_cast<std::size_t>(l + max_harmonic)); }
};

/// Throws InGapError when omega lies inside an exact band gap.
BlochFourier bloch_fourier(const CrystalSpec& spec, double omega, Polarization pol, int max_harmonic = 3,
                           int quadrature_points = 1024);

/// Field samples of the Bloch envelope over one period (quadrature nodes
/// z_j = j Lambda / n). Not normalized.
std::vector<std::complex<double>> bloch_envelope(const CrystalSpec& spec, double omega, Polarization pol,
                                                 int points);

/// Band gap of order m from |half-trace| = 1, bracketed around the m-th
/// Bragg frequency of the optical path. Returns nullopt when the gap is closed.
struct ExactGap {
    double omega_min = 0.0;
    double omega_max = 0.0;
    double width() const { return omega_max - omega_min; }
};
std::optional<ExactGap> exact_band_gap(const CrystalSpec& spec, Polarization pol, int order);

}  // namespace nlpc

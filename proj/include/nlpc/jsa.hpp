#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlpc/material.hpp"
#include "nlpc/transfer_matrix.hpp"

namespace nlpc {

/// Gaussian pump, amplitude exp[-(omega_s + omega_i - 2 omega_o)^2 / sigma^2].
struct PumpSpec {
    double center_nm = 425.0;
    double sigma = 0.0;  // rad/s
    Polarization pol = Polarization::extraordinary;

    double omega_pump() const { return omega_from_wavelength(center_nm * kNm); }
    /// Degenerate signal/idler frequency omega_o.
    double omega_degenerate() const { return 0.5 * omega_pump(); }
};

/// Bandwidth conversion for the amplitude envelope above. The wavelength FWHM
/// maps to dw = 2 pi c [1/(l - fwhm/2) - 1/(l + fwhm/2)], and the amplitude
/// FWHM in frequency is 2 sqrt(ln 2) sigma.
double sigma_from_fwhm_nm(double fwhm_nm, double center_nm);
double fwhm_nm_from_sigma(double sigma, double center_nm);

PumpSpec make_pump(double center_nm, double fwhm_nm, Polarization pol = Polarization::extraordinary);

/// Polarizations of the three fields; the default is the type-II e -> e + o process.
struct FieldPolarizations {
    Polarization pump = Polarization::extraordinary;
    Polarization signal = Polarization::extraordinary;
    Polarization idler = Polarization::ordinary;
};

/// Bloch harmonic indices (l, m, n) of pump, signal and idler.
struct Harmonics {
    int l = 0;
    int m = 0;
    int n = 0;
};

/// Delta K_lmn = K_p(w_s + w_i) - K_s(w_s) - K_i(w_i) + 2 pi (l - m - n)/Lambda.
/// Throws InGapError naming the field that does not propagate.
double phase_mismatch(const CrystalSpec& spec, double omega_s, double omega_i, Harmonics h = {},
                      FieldPolarizations pols = {});

double pump_envelope(const PumpSpec& pump, double omega_s, double omega_i);

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// l_mu(omega) = sqrt(omega K'(omega) / (2 eps_mu)) with eps_mu = nbar_mu^2;
/// hbar and the beam area are set to 1.
double spectral_weight(const CrystalSpec& spec, double omega, Polarization pol);

struct PhaseMatchingOptions {
    bool bloch_fourier = true;    // include eps_pl eps*_sm eps*_in
    bool spectral_weights = true;  // include l_s l_i
    int max_harmonic = 3;
    int quadrature_points = 1024;
};

/// Full phase-matching function phi_lmn(w_s, w_i), Fourier coefficients
/// evaluated exactly at each frequency.
std::complex<double> phasematching_function(const CrystalSpec& spec, double omega_s, double omega_i,
                                            Harmonics h = {}, FieldPolarizations pols = {},
                                            const PhaseMatchingOptions& opts = {});

/// Uniform frequency axes (rad/s) of a joint spectrum.
struct SpectralGrid {
    double signal_min = 0.0;
    double signal_max = 0.0;
    double idler_min = 0.0;
    double idler_max = 0.0;
    int signal_points = 512;
    int idler_points = 512;

    std::vector<double> signal_axis() const;
    std::vector<double> idler_axis() const;
    double signal_step() const;
    double idler_step() const;
};

struct GridRule {
    int points = 512;
    double half_width_bandwidths = 4.0;
    double gap_clearance = 0.1;  // in gap widths
};

/// Phase-matching bandwidth along one axis: the smallest detuning scale
/// (2 pi / |tau^(j)|)^(1/j) over j = 1..4, with tau^(j) = L (K_p^(j) - K_mu^(j)).
double phasematching_bandwidth(const CrystalSpec& spec, double omega_o, Polarization field,
                               FieldPolarizations pols = {});

/// Default grid: +/- rule.half_width_bandwidths bandwidths about omega_o on each
/// axis, clipped to keep rule.gap_clearance gap widths from every band edge.
SpectralGrid default_grid(const CrystalSpec& spec, const PumpSpec& pump, const GridRule& rule = {},
                          FieldPolarizations pols = {});

struct JointSpectrum {
    std::vector<double> omega_s;
    std::vector<double> omega_i;
    Eigen::MatrixXcd amplitude;      // rows: signal, columns: idler
    Eigen::MatrixXd pump;            // alpha_p on the grid
    Eigen::MatrixXcd phasematching;  // phi_lmn on the grid (zero where flagged)
    CrystalSpec crystal;
    PumpSpec pump_spec;
    std::vector<Harmonics> harmonics;
    std::vector<bool> signal_flagged;
    std::vector<bool> idler_flagged;
    std::vector<std::string> warnings;

    double signal_step() const { return omega_s.size() > 1 ? omega_s[1] - omega_s[0] : 1.0; }
    double idler_step() const { return omega_i.size() > 1 ? omega_i[1] - omega_i[0] : 1.0; }
};

/// f = alpha_p * phi_lmn over the grid, summed over `harmonics`. Grid rows or
/// columns where a field sits in a gap are zeroed and reported in `warnings`.
/// Pump Fourier coefficients come from a 1-D table over the pump frequency
/// range (4 points per grid step, linear interpolation).
JointSpectrum joint_spectrum(const CrystalSpec& spec, const PumpSpec& pump, const SpectralGrid& grid,
                             const std::vector<Harmonics>& harmonics = {Harmonics{}},
                             const PhaseMatchingOptions& opts = {}, FieldPolarizations pols = {},
                             int threads = 1);

}  // namespace nlpc

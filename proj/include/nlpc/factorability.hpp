#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nlpc/jsa.hpp"

namespace nlpc {

/// Gaussian approximation of sinc: sinc(x) ~ exp(-gamma x^2).
inline constexpr double kSincGamma = 0.193;

/// Expansion coefficients of L Delta K about the degenerate point.
/// Index j = 1..4 (entry 0 unused); units fs^j.
struct TaylorCoefficients {
    std::array<double, 5> tau_s{};
    std::array<double, 5> tau_i{};
    std::array<double, 5> tau_p{};
    double dk0 = 0.0;  // K_s(w_o) + K_i(w_o) - K_p(2 w_o), rad/m
    double omega_o = 0.0;
    double length_m = 0.0;
};

/// Throws InGapError when omega_o or 2 omega_o lies in a gap.
TaylorCoefficients taylor_coefficients(const CrystalSpec& spec, double omega_o, FieldPolarizations pols = {});

struct ConditionThresholds {
    double gvm_fs = 0.5;
    double weak_pump_ratio = 0.25;
    double bandwidth_factor = 3.0;
    double gamma = kSincGamma;
};

struct ConditionReport {
    double gvm_signal_fs = 0.0;  // |tau_s^(1)|
    double gvm_idler_fs = 0.0;   // |tau_i^(1)|
    std::array<double, 3> weak_pump_ratio{};  // j = 2, 3, 4
    double bandwidth_threshold = 0.0;         // rad/s
    double bandwidth_factor = 0.0;            // sigma / threshold
    bool gvm = false;
    bool weak_pump = false;
    bool broadband = false;

    bool all() const { return gvm && weak_pump && broadband; }
};

/// Pump bandwidth 2 (4/gamma)^(1/4) (tau_s^(2) + tau_i^(2))^(-1/2), in rad/s.
double bandwidth_threshold(const TaylorCoefficients& tc, double gamma = kSincGamma);

ConditionReport check_conditions(const TaylorCoefficients& tc, const PumpSpec& pump,
                                 const ConditionThresholds& thresholds = {});

enum class GaussianLevel { full_quartic, gvm_simplified, weak_pump, broadband };

std::string_view to_string(GaussianLevel level);
GaussianLevel parse_gaussian_level(std::string_view text);

/// L Delta K to quartic order in the detunings (rad/s), with Delta K^(0) = 0.
double taylor_mismatch(const TaylorCoefficients& tc, double nu_s, double nu_i);

/// Closed-form Gaussian joint amplitude at detunings nu_s, nu_i (rad/s).
/// full_quartic: exp{-(gamma/4)[P^2 + 4(nu_s+nu_i)^2/(gamma sigma^2)] + i P/2},
/// with P = taylor_mismatch and P^2 truncated at total degree 4.
/// gvm_simplified: full_quartic with tau^(1) = 0.
/// weak_pump: modulus exp[-(nu_s+nu_i)^2/sigma^2 - (gamma/4)(tau_s2 nu_s^2 + tau_i2 nu_i^2)^2],
/// argument (1/2) sum_{j=2..4} (tau_s^(j) nu_s^j + tau_i^(j) nu_i^j).
/// broadband: weak_pump without the pump term.
std::complex<double> gaussian_jsa(const TaylorCoefficients& tc, const PumpSpec& pump, double nu_s, double nu_i,
                                  GaussianLevel level, double gamma = kSincGamma);

/// Conditions a level relies on that the coefficients do not meet.
std::vector<std::string> approximation_warnings(const TaylorCoefficients& tc, const PumpSpec& pump,
                                                GaussianLevel level, const ConditionThresholds& thresholds = {});

/// Gaussian amplitude sampled on a grid (absolute frequencies), with the
/// level's condition warnings attached.
JointSpectrum gaussian_joint_spectrum(const TaylorCoefficients& tc, const CrystalSpec& spec, const PumpSpec& pump,
                                      const SpectralGrid& grid, GaussianLevel level,
                                      const ConditionThresholds& thresholds = {});

}  // namespace nlpc

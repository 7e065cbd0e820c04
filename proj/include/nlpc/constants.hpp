#pragma once

#include <numbers>

namespace nlpc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

inline constexpr double kNm = 1e-9;
inline constexpr double kUm = 1e-6;
inline constexpr double kMm = 1e-3;
inline constexpr double kFs = 1e-15;

/// Vacuum wavelength (m) <-> angular frequency (rad/s).
constexpr double omega_from_wavelength(double lambda_m) { return 2.0 * kPi * kSpeedOfLight / lambda_m; }
constexpr double wavelength_from_omega(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace nlpc

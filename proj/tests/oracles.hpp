#pragma once

// Independent reference computations used only by the tests.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

/// Richardson-extrapolated central differences of f at x with step h.
/// Returns {f', f''/2!, f'''/3!}.
inline std::array<double, 3> taylor_fd(const std::function<double(double)>& f, double x, double h) {
    auto d1 = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    auto d2 = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
    auto d3 = [&](double s) { return (f(x + 2 * s) - 2.0 * f(x + s) + 2.0 * f(x - s) - f(x - 2 * s)) / (2.0 * s * s * s); };
    auto rich = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
    return {rich(d1(h), d1(h / 2)), rich(d2(h), d2(h / 2)) / 2.0, rich(d3(h), d3(h / 2)) / 6.0};
}

/// Schmidt number of psi = exp(-a x^2 - b y^2 - 2 c x y).
inline double gaussian_schmidt(double a, double b, double c) { return 1.0 / std::sqrt(1.0 - c * c / (a * b)); }

/// Schmidt number of a Gaussian amplitude whose intensity |psi|^2 has
/// correlation coefficient rho.
inline double gaussian_schmidt_rho(double rho) { return 1.0 / std::sqrt(1.0 - rho * rho); }

}  // namespace oracle

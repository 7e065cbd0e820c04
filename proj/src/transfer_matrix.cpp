#include "nlpc/transfer_matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nlpc/bloch.hpp"

namespace nlpc {

namespace {

using cd = std::complex<double>;

struct Matrix2 {
    double m00, m01, m10, m11;
};

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11, a.m10 * b.m00 + a.m11 * b.m10,
            a.m10 * b.m01 + a.m11 * b.m11};
}

/// Propagation of (E, dE/dz) across a homogeneous layer.
Matrix2 layer_matrix(double k, double thickness) {
    const double c = std::cos(k * thickness);
    const double s = std::sin(k * thickness);
    return {c, s / k, -k * s, c};
}

struct Cell {
    double k1, k2;  // wavenumbers in zones A and B
    double a, b;    // thicknesses
    double period;
    Matrix2 first;  // zone A
    Matrix2 full;   // B * A
};

Cell make_cell(const CrystalSpec& spec, double omega, Polarization pol) {
    const auto n = layer_indices(spec, wavelength_from_omega(omega), pol);
    Cell c;
    c.period = spec.period_m();
    c.a = spec.duty_cycle * c.period;
    c.b = c.period - c.a;
    c.k1 = n.zone_a * omega / kSpeedOfLight;
    c.k2 = n.zone_b * omega / kSpeedOfLight;
    c.first = layer_matrix(c.k1, c.a);
    c.full = layer_matrix(c.k2, c.b) * c.first;
    return c;
}

double cell_half_trace(const Cell& c) { return 0.5 * (c.full.m00 + c.full.m11); }

/// Optical path phase (k1 a + k2 b), the unperturbed K Lambda.
double optical_phase(const Cell& c) { return c.k1 * c.a + c.k2 * c.b; }

TransferMatrixBloch bloch_from_cell(const Cell& c) {
    TransferMatrixBloch out;
    out.half_trace = cell_half_trace(c);
    const double ref = optical_phase(c);
    const double ht = out.half_trace;
    if (std::abs(ht) >= 1.0) {
        out.in_gap = true;
        const double q = std::acosh(std::abs(ht));
        // Band edges sit at integer multiples of pi; pick the one nearest the reference.
        double edge = ht > 0.0 ? 2.0 * kPi * std::round(ref / (2.0 * kPi))
                               : kPi * (2.0 * std::floor(ref / (2.0 * kPi)) + 1.0);
        out.K = cd(edge, q) / c.period;
        return out;
    }
    const double theta = std::acos(ht);
    const double j = std::round(ref / (2.0 * kPi));
    double best = 0.0;
    double best_dist = 1e300;
    for (double jj : {j - 1.0, j, j + 1.0}) {
        for (double cand : {2.0 * kPi * jj + theta, 2.0 * kPi * jj - theta}) {
            const double d = std::abs(cand - ref);
            if (d < best_dist) {
                best_dist = d;
                best = cand;
            }
        }
    }
    out.K = cd(best / c.period, 0.0);
    return out;
}

}  // namespace

double half_trace(const CrystalSpec& spec, double omega, Polarization pol) {
    return cell_half_trace(make_cell(spec, omega, pol));
}

TransferMatrixBloch transfer_matrix_bloch(const CrystalSpec& spec, double omega, Polarization pol) {
    return bloch_from_cell(make_cell(spec, omega, pol));
}

std::vector<std::complex<double>> bloch_envelope(const CrystalSpec& spec, double omega, Polarization pol,
                                                 int points) {
    const Cell c = make_cell(spec, omega, pol);
    const auto bloch = bloch_from_cell(c);
    if (bloch.in_gap) throw InGapError(std::string(to_string(pol)), omega);
    const double K = bloch.K.real();
    const cd lambda = std::polar(1.0, K * c.period);

    // Eigenvector of the cell matrix for eigenvalue exp(i K Lambda).
    const auto& M = c.full;
    cd e0, d0;
    if (std::abs(M.m01) * c.k1 >= std::abs(M.m10) / c.k1) {
        e0 = M.m01;
        d0 = lambda - M.m00;
    } else {
        e0 = lambda - M.m11;
        d0 = M.m10;
    }
    const cd ea = c.first.m00 * e0 + c.first.m01 * d0;
    const cd da = c.first.m10 * e0 + c.first.m11 * d0;

    std::vector<cd> env(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
        const double z = c.period * j / points;
        cd field;
        if (z < c.a) {
            field = e0 * std::cos(c.k1 * z) + d0 * (std::sin(c.k1 * z) / c.k1);
        } else {
            const double t = z - c.a;
            field = ea * std::cos(c.k2 * t) + da * (std::sin(c.k2 * t) / c.k2);
        }
        env[static_cast<std::size_t>(j)] = field * std::polar(1.0, -K * z);
    }
    return env;
}

BlochFourier bloch_fourier(const CrystalSpec& spec, double omega, Polarization pol, int max_harmonic,
                           int quadrature_points) {
    if (max_harmonic < 0) throw DomainError("max_harmonic must be >= 0");
    if (quadrature_points < 1024) throw DomainError("Fourier quadrature needs at least 1024 points");
    const auto env = bloch_envelope(spec, omega, pol, quadrature_points);

    BlochFourier out;
    out.pol = pol;
    out.omega = omega;
    out.max_harmonic = max_harmonic;
    out.coeffs.resize(static_cast<std::size_t>(2 * max_harmonic + 1));
    // Periodic trapezoid rule on the uniform nodes.
    for (int l = -max_harmonic; l <= max_harmonic; ++l) {
        cd sum = 0.0;
        for (int j = 0; j < quadrature_points; ++j)
            sum += env[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * kPi * l * j / quadrature_points);
        out.coeffs[static_cast<std::size_t>(l + max_harmonic)] = sum / static_cast<double>(quadrature_points);
    }
    const auto peak = *std::max_element(out.coeffs.begin(), out.coeffs.end(),
                                        [](const cd& x, const cd& y) { return std::abs(x) < std::abs(y); });
    const cd norm = std::conj(peak) / (std::abs(peak) * std::abs(peak));
    for (auto& e : out.coeffs) e *= norm;
    return out;
}

std::optional<ExactGap> exact_band_gap(const CrystalSpec& spec, Polarization pol, int order) {
    if (order < 1) throw DomainError("band-gap order must be >= 1");
    const double sign = order % 2 == 0 ? 1.0 : -1.0;
    auto excess = [&](double w) { return sign * half_trace(spec, w, pol) - 1.0; };

    // Bragg frequency of the optical path: k1 a + k2 b = m pi.
    const double target = kPi * order;
    double lo = omega_from_wavelength(spec.material.window_max_um * kUm);
    double hi = omega_from_wavelength(spec.material.window_min_um * kUm);
    auto phase = [&](double w) { return optical_phase(make_cell(spec, w, pol)) - target; };
    if (phase(lo) > 0.0 || phase(hi) < 0.0) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phase(mid) < 0.0 ? lo : hi) = mid;
    }
    const double center = 0.5 * (lo + hi);

    // The gap lies within a few layer-contrast fractions of the Bragg frequency.
    const double span = std::max(4.0 * std::abs(spec.layer_contrast()), 1e-4) * center;
    const double wmin = omega_from_wavelength(spec.material.window_max_um * kUm);
    const double wmax = omega_from_wavelength(spec.material.window_min_um * kUm);
    const double a = std::max(center - span, wmin);
    const double b = std::min(center + span, wmax);

    constexpr int kScan = 4000;
    double peak_w = center;
    double peak_v = excess(center);
    for (int k = 0; k <= kScan; ++k) {
        const double w = a + (b - a) * k / kScan;
        const double v = excess(w);
        if (v > peak_v) {
            peak_v = v;
            peak_w = w;
        }
    }
    // Golden-section refinement of the maximum of the excess.
    {
        const double step = (b - a) / kScan;
        double x0 = std::max(a, peak_w - step);
        double x3 = std::min(b, peak_w + step);
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = x3 - g * (x3 - x0);
        double x2 = x0 + g * (x3 - x0);
        double f1 = excess(x1);
        double f2 = excess(x2);
        for (int it = 0; it < 200 && x3 - x0 > 1e-16 * x3; ++it) {
            if (f1 > f2) {
                x3 = x2;
                x2 = x1;
                f2 = f1;
                x1 = x3 - g * (x3 - x0);
                f1 = excess(x1);
            } else {
                x0 = x1;
                x1 = x2;
                f1 = f2;
                x2 = x0 + g * (x3 - x0);
                f2 = excess(x2);
            }
        }
        const double xm = 0.5 * (x0 + x3);
        if (excess(xm) > peak_v) {
            peak_w = xm;
            peak_v = excess(xm);
        }
    }
    if (peak_v <= 0.0) return std::nullopt;

    auto edge = [&](double inside, double outside) {
        if (excess(outside) > 0.0) return outside;
        for (int it = 0; it < 200 && std::abs(outside - inside) > 1e-16 * inside; ++it) {
            const double mid = 0.5 * (inside + outside);
            (excess(mid) > 0.0 ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    ExactGap gap;
    gap.omega_min = edge(peak_w, a);
    gap.omega_max = edge(peak_w, b);
    return gap;
}

}  // namespace nlpc

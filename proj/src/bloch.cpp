#include "nlpc/bloch.hpp"

#include <cmath>
#include <limits>

namespace nlpc {

namespace {

double bragg_wavenumber(const CrystalSpec& spec, int order) { return kPi * order / spec.period_m(); }

void check_order(int order) {
    if (order < 1) throw DomainError("band-gap order must be >= 1");
}

}  // namespace

double coupling_ratio(const CrystalSpec& spec, int order) {
    check_order(order);
    const double s = std::abs(std::sin(kPi * order * spec.duty_cycle));
    // sin(pi m / 2) is not exactly zero in floating point for even m.
    const double shape = s < 1e-12 ? 0.0 : s;
    return std::abs(spec.layer_contrast()) * shape / (2.0 * kPi * order);
}

std::complex<double> coupling_coefficient(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    const double kbar = mean_wavenumber(spec, pol, omega);
    return {0.0, coupling_ratio(spec, order) * kbar};
}

double bragg_mismatch(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    check_order(order);
    return 2.0 * mean_wavenumber(spec, pol, omega) - 2.0 * bragg_wavenumber(spec, order);
}

double coupled_mode_discriminant(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    const double kbar = mean_wavenumber(spec, pol, omega);
    const double half = kbar - bragg_wavenumber(spec, order);
    const double kappa = coupling_ratio(spec, order) * kbar;
    return half * half - kappa * kappa;
}

bool in_band_gap(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    if (coupling_ratio(spec, order) == 0.0) return false;
    return coupled_mode_discriminant(spec, omega, pol, order) <= 0.0;
}

std::complex<double> bloch_wavenumber(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    const double kbar = mean_wavenumber(spec, pol, omega);
    const double base = bragg_wavenumber(spec, order);
    const double half = kbar - base;
    const double kappa = coupling_ratio(spec, order) * kbar;
    if (kappa == 0.0) return {kbar, 0.0};
    const double u = half * half - kappa * kappa;
    if (u <= 0.0) return {base, std::sqrt(-u)};
    return {base + std::copysign(std::sqrt(u), half), 0.0};
}

double propagating_wavenumber(const CrystalSpec& spec, double omega, Polarization pol, const char* field) {
    const auto K = bloch_wavenumber(spec, omega, pol, spec.gap_order);
    if (in_band_gap(spec, omega, pol, spec.gap_order)) throw InGapError(field, omega);
    return K.real();
}

DispersionJet bloch_jet(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    const auto w = DispersionJet::variable(omega);
    const DispersionJet kbar = mean_wavenumber(spec, pol, w);
    const double base = bragg_wavenumber(spec, order);
    const double ratio = coupling_ratio(spec, order);
    if (ratio == 0.0) return kbar;
    const DispersionJet half = kbar - base;
    const DispersionJet u = half * half - (ratio * ratio) * (kbar * kbar);
    if (u.value() <= 0.0) throw InGapError(std::string(to_string(pol)), omega);
    const DispersionJet root = sqrt(u);
    return half.value() >= 0.0 ? base + root : base - root;
}

std::array<double, 5> dispersion_derivatives(const CrystalSpec& spec, double omega, Polarization pol, int order) {
    return bloch_jet(spec, omega, pol, order).c;
}

DispersionSample sample_dispersion(const CrystalSpec& spec, double omega, Polarization pol) {
    DispersionSample s;
    s.omega = omega;
    s.pol = pol;
    s.order = spec.gap_order;
    s.K = bloch_wavenumber(spec, omega, pol, spec.gap_order);
    s.in_gap = in_band_gap(spec, omega, pol, spec.gap_order);
    if (s.in_gap) {
        s.K1 = s.K2 = std::numeric_limits<double>::quiet_NaN();
    } else {
        const auto jet = bloch_jet(spec, omega, pol, spec.gap_order);
        s.K1 = jet[1];
        s.K2 = jet[2];
    }
    return s;
}

std::optional<double> solve_mean_wavenumber(const CrystalSpec& spec, Polarization pol, double target) {
    double lo = omega_from_wavelength(spec.material.window_max_um * kUm);
    double hi = omega_from_wavelength(spec.material.window_min_um * kUm);
    auto f = [&](double w) { return mean_wavenumber(spec, pol, w) - target; };
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo * fhi > 0.0) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::optional<BandGap> band_gap(const CrystalSpec& spec, Polarization pol, int order) {
    const double ratio = coupling_ratio(spec, order);
    if (ratio == 0.0 || ratio >= 1.0) return std::nullopt;
    const double base = bragg_wavenumber(spec, order);
    // |kbar - base| = ratio * kbar at the edges.
    const auto lo = solve_mean_wavenumber(spec, pol, base / (1.0 + ratio));
    const auto hi = solve_mean_wavenumber(spec, pol, base / (1.0 - ratio));
    const auto mid = solve_mean_wavenumber(spec, pol, base);
    if (!lo || !hi || !mid) return std::nullopt;
    BandGap g;
    g.pol = pol;
    g.order = order;
    g.omega_min = *lo;
    g.omega_max = *hi;
    g.lambda_center_nm = wavelength_from_omega(*mid) / kNm;
    return g;
}

}  // namespace nlpc

#include "nlpc/jsa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlpc/bloch.hpp"
#include "nlpc/parallel.hpp"

namespace nlpc {

using cd = std::complex<double>;

double sigma_from_fwhm_nm(double fwhm_nm, double center_nm) {
    if (!(fwhm_nm > 0.0) || !(center_nm > fwhm_nm / 2.0)) throw DomainError("invalid pump bandwidth");
    const double dw = omega_from_wavelength((center_nm - fwhm_nm / 2.0) * kNm) -
                      omega_from_wavelength((center_nm + fwhm_nm / 2.0) * kNm);
    return dw / (2.0 * std::sqrt(std::log(2.0)));
}

double fwhm_nm_from_sigma(double sigma, double center_nm) {
    // Invert dw(fwhm) = 2 pi c fwhm / (l^2 - fwhm^2/4) for fwhm.
    const double dw = sigma * 2.0 * std::sqrt(std::log(2.0));
    const double l = center_nm * kNm;
    const double q = 2.0 * kPi * kSpeedOfLight / dw;  // = (l^2 - f^2/4)/f
    const double f = 2.0 * (-q + std::sqrt(q * q + l * l));
    return f / kNm;
}

PumpSpec make_pump(double center_nm, double fwhm_nm, Polarization pol) {
    PumpSpec p;
    p.center_nm = center_nm;
    p.sigma = sigma_from_fwhm_nm(fwhm_nm, center_nm);
    p.pol = pol;
    return p;
}

double phase_mismatch(const CrystalSpec& spec, double omega_s, double omega_i, Harmonics h, FieldPolarizations pols) {
    const double kp = propagating_wavenumber(spec, omega_s + omega_i, pols.pump, "pump");
    const double ks = propagating_wavenumber(spec, omega_s, pols.signal, "signal");
    const double ki = propagating_wavenumber(spec, omega_i, pols.idler, "idler");
    return kp - ks - ki + 2.0 * kPi * (h.l - h.m - h.n) / spec.period_m();
}

double pump_envelope(const PumpSpec& pump, double omega_s, double omega_i) {
    const double d = (omega_s + omega_i - 2.0 * pump.omega_degenerate()) / pump.sigma;
    return std::exp(-d * d);
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double spectral_weight(const CrystalSpec& spec, double omega, Polarization pol) {
    const auto jet = bloch_jet(spec, omega, pol, spec.gap_order);
    const double nbar = mean_index(spec, pol, omega);
    return std::sqrt(omega * jet[1] / (2.0 * nbar * nbar));
}

namespace {

cd fourier_coefficient(const CrystalSpec& spec, double omega, Polarization pol, int harmonic,
                       const PhaseMatchingOptions& opts) {
    const int reach = std::max(opts.max_harmonic, std::abs(harmonic));
    return bloch_fourier(spec, omega, pol, reach, opts.quadrature_points)(harmonic);
}

std::vector<double> uniform_axis(double lo, double hi, int n) {
    if (n < 2) throw DomainError("grid needs at least two points per axis");
    if (!(hi > lo)) throw DomainError("grid axis range is empty");
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) axis[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
    return axis;
}

}  // namespace

cd phasematching_function(const CrystalSpec& spec, double omega_s, double omega_i, Harmonics h,
                          FieldPolarizations pols, const PhaseMatchingOptions& opts) {
    const double dk = phase_mismatch(spec, omega_s, omega_i, h, pols);
    const double x = 0.5 * spec.length_m() * dk;
    cd phi = sinc(x) * std::polar(1.0, x);
    if (opts.bloch_fourier) {
        phi *= fourier_coefficient(spec, omega_s + omega_i, pols.pump, h.l, opts) *
               std::conj(fourier_coefficient(spec, omega_s, pols.signal, h.m, opts)) *
               std::conj(fourier_coefficient(spec, omega_i, pols.idler, h.n, opts));
    }
    if (opts.spectral_weights)
        phi *= spectral_weight(spec, omega_s, pols.signal) * spectral_weight(spec, omega_i, pols.idler);
    return phi;
}

std::vector<double> SpectralGrid::signal_axis() const { return uniform_axis(signal_min, signal_max, signal_points); }
std::vector<double> SpectralGrid::idler_axis() const { return uniform_axis(idler_min, idler_max, idler_points); }
double SpectralGrid::signal_step() const { return (signal_max - signal_min) / (signal_points - 1); }
double SpectralGrid::idler_step() const { return (idler_max - idler_min) / (idler_points - 1); }

double phasematching_bandwidth(const CrystalSpec& spec, double omega_o, Polarization field, FieldPolarizations pols) {
    const auto kp = bloch_jet(spec, 2.0 * omega_o, pols.pump, spec.gap_order);
    const auto km = bloch_jet(spec, omega_o, field, spec.gap_order);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 4; ++j) {
        const double tau = spec.length_m() * (kp[j] - km[j]);
        if (tau == 0.0) continue;
        best = std::min(best, std::pow(2.0 * kPi / std::abs(tau), 1.0 / j));
    }
    if (!std::isfinite(best)) throw DomainError("phase matching bandwidth is unbounded");
    return best;
}

SpectralGrid default_grid(const CrystalSpec& spec, const PumpSpec& pump, const GridRule& rule, FieldPolarizations pols) {
    const double wo = pump.omega_degenerate();
    const double wmin = omega_from_wavelength(spec.material.window_max_um * kUm);
    const double wmax = omega_from_wavelength(spec.material.window_min_um * kUm);

    auto axis_range = [&](Polarization pol, const char* name) {
        if (in_band_gap(spec, wo, pol)) throw InGapError(name, wo);
        const double half = rule.half_width_bandwidths * phasematching_bandwidth(spec, wo, pol, pols);
        double lo = std::max(wo - half, wmin);
        double hi = std::min(wo + half, wmax);
        if (const auto gap = band_gap(spec, pol)) {
            const double margin = rule.gap_clearance * gap->width();
            if (gap->omega_max < wo) lo = std::max(lo, gap->omega_max + margin);
            if (gap->omega_min > wo) hi = std::min(hi, gap->omega_min - margin);
        }
        if (!(lo < wo && wo < hi)) throw DomainError(std::string("no propagating window around omega_o for ") + name);
        return std::pair{lo, hi};
    };
    const auto [slo, shi] = axis_range(pols.signal, "signal");
    const auto [ilo, ihi] = axis_range(pols.idler, "idler");
    SpectralGrid g;
    g.signal_min = slo;
    g.signal_max = shi;
    g.idler_min = ilo;
    g.idler_max = ihi;
    g.signal_points = g.idler_points = rule.points;
    return g;
}

namespace {

struct AxisData {
    std::vector<double> K;
    std::vector<double> weight;
    std::vector<std::vector<cd>> fourier;  // per harmonic triple, conjugated
    std::vector<bool> flagged;
};

AxisData axis_data(const CrystalSpec& spec, const std::vector<double>& axis, Polarization pol,
                   const std::vector<int>& harmonic_index, const PhaseMatchingOptions& opts, unsigned threads) {
    AxisData d;
    const std::size_t n = axis.size();
    d.K.assign(n, 0.0);
    d.weight.assign(n, 1.0);
    d.flagged.assign(n, false);
    d.fourier.assign(harmonic_index.size(), std::vector<cd>(n, cd(1.0)));
    parallel_for(n, threads, [&](std::size_t k) {
        const double w = axis[k];
        if (in_band_gap(spec, w, pol)) {
            d.flagged[k] = true;
            return;
        }
        d.K[k] = bloch_wavenumber(spec, w, pol).real();
        if (opts.spectral_weights) d.weight[k] = spectral_weight(spec, w, pol);
        if (opts.bloch_fourier) {
            int reach = opts.max_harmonic;
            for (int h : harmonic_index) reach = std::max(reach, std::abs(h));
            try {
                const auto bf = bloch_fourier(spec, w, pol, reach, opts.quadrature_points);
                for (std::size_t t = 0; t < harmonic_index.size(); ++t)
                    d.fourier[t][k] = std::conj(bf(harmonic_index[t]));
            } catch (const InGapError&) {
                d.flagged[k] = true;
            }
        }
    });
    return d;
}

}  // namespace

JointSpectrum joint_spectrum(const CrystalSpec& spec, const PumpSpec& pump, const SpectralGrid& grid,
                             const std::vector<Harmonics>& harmonics, const PhaseMatchingOptions& opts,
                             FieldPolarizations pols, int threads) {
    spec.validate();
    if (!(pump.sigma > 0.0)) throw DomainError("pump bandwidth sigma must be positive");
    if (harmonics.empty()) throw DomainError("at least one harmonic triple is required");
    const unsigned nthreads = resolve_threads(threads);

    JointSpectrum js;
    js.omega_s = grid.signal_axis();
    js.omega_i = grid.idler_axis();
    js.crystal = spec;
    js.pump_spec = pump;
    js.harmonics = harmonics;
    const auto ns = js.omega_s.size();
    const auto ni = js.omega_i.size();

    std::vector<int> hl, hm, hn;
    for (const auto& h : harmonics) {
        hl.push_back(h.l);
        hm.push_back(h.m);
        hn.push_back(h.n);
    }
    const AxisData sig = axis_data(spec, js.omega_s, pols.signal, hm, opts, nthreads);
    const AxisData idl = axis_data(spec, js.omega_i, pols.idler, hn, opts, nthreads);
    js.signal_flagged = sig.flagged;
    js.idler_flagged = idl.flagged;

    // Pump Fourier coefficients on a 1-D table.
    const double pmin = js.omega_s.front() + js.omega_i.front();
    const double pmax = js.omega_s.back() + js.omega_i.back();
    const int table_n = 4 * static_cast<int>(std::max(ns, ni)) + 1;
    std::vector<std::vector<cd>> ptable(harmonics.size(), std::vector<cd>(static_cast<std::size_t>(table_n), cd(1.0)));
    if (opts.bloch_fourier) {
        int reach = opts.max_harmonic;
        for (int h : hl) reach = std::max(reach, std::abs(h));
        parallel_for(static_cast<std::size_t>(table_n), nthreads, [&](std::size_t k) {
            const double w = pmin + (pmax - pmin) * static_cast<double>(k) / (table_n - 1);
            try {
                const auto bf = bloch_fourier(spec, w, pols.pump, reach, opts.quadrature_points);
                for (std::size_t t = 0; t < harmonics.size(); ++t) ptable[t][k] = bf(hl[t]);
            } catch (const InGapError&) {
                for (std::size_t t = 0; t < harmonics.size(); ++t) ptable[t][k] = 0.0;
            }
        });
    }
    auto pump_coeff = [&](std::size_t t, double w) {
        const double pos = (w - pmin) / (pmax - pmin) * (table_n - 1);
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(pos, 0.0)), table_n - 2);
        const double frac = pos - static_cast<double>(k);
        return ptable[t][k] * (1.0 - frac) + ptable[t][k + 1] * frac;
    };

    js.amplitude.resize(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni));
    js.pump.resize(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni));
    js.phasematching.resize(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni));
    std::atomic<long> pump_gap_points{0};
    const double L = spec.length_m();
    const double G = 2.0 * kPi / spec.period_m();

    parallel_for(ns, nthreads, [&](std::size_t a) {
        const auto r = static_cast<Eigen::Index>(a);
        for (std::size_t b = 0; b < ni; ++b) {
            const auto c = static_cast<Eigen::Index>(b);
            const double ws = js.omega_s[a];
            const double wi = js.omega_i[b];
            const double env = pump_envelope(pump, ws, wi);
            js.pump(r, c) = env;
            cd phi = 0.0;
            const double wp = ws + wi;
            if (sig.flagged[a] || idl.flagged[b]) {
                // zeroed
            } else if (in_band_gap(spec, wp, pols.pump)) {
                ++pump_gap_points;
            } else {
                const double kp = bloch_wavenumber(spec, wp, pols.pump).real();
                const double base = kp - sig.K[a] - idl.K[b];
                const double weights = sig.weight[a] * idl.weight[b];
                for (std::size_t t = 0; t < harmonics.size(); ++t) {
                    const double x = 0.5 * L * (base + G * (hl[t] - hm[t] - hn[t]));
                    cd term = sinc(x) * std::polar(1.0, x) * weights;
                    if (opts.bloch_fourier) term *= pump_coeff(t, wp) * sig.fourier[t][a] * idl.fourier[t][b];
                    phi += term;
                }
            }
            js.phasematching(r, c) = phi;
            js.amplitude(r, c) = env * phi;
        }
    });

    auto count = [](const std::vector<bool>& v) { return std::count(v.begin(), v.end(), true); };
    if (const auto n = count(js.signal_flagged)) {
        std::ostringstream os;
        os << n << " signal grid rows inside a band gap were set to zero";
        js.warnings.push_back(os.str());
    }
    if (const auto n = count(js.idler_flagged)) {
        std::ostringstream os;
        os << n << " idler grid columns inside a band gap were set to zero";
        js.warnings.push_back(os.str());
    }
    if (pump_gap_points > 0) {
        std::ostringstream os;
        os << pump_gap_points.load() << " grid points with the pump inside a band gap were set to zero";
        js.warnings.push_back(os.str());
    }
    return js;
}

}  // namespace nlpc

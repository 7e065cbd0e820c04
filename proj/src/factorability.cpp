#include "nlpc/factorability.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nlpc/bloch.hpp"

namespace nlpc {

namespace {

using Poly = std::array<std::array<double, 5>, 5>;  // c[a][b] multiplies nu_s^a nu_i^b

Poly mismatch_polynomial(const TaylorCoefficients& tc) {
    Poly p{};
    for (int j = 1; j <= 4; ++j) {
        p[j][0] += tc.tau_s[j];
        p[0][j] += tc.tau_i[j];
    }
    // tau_p^(j) [(nu_s + nu_i)^j - nu_s^j - nu_i^j]
    p[1][1] += 2.0 * tc.tau_p[2];
    p[2][1] += 3.0 * tc.tau_p[3];
    p[1][2] += 3.0 * tc.tau_p[3];
    p[3][1] += 4.0 * tc.tau_p[4];
    p[2][2] += 6.0 * tc.tau_p[4];
    p[1][3] += 4.0 * tc.tau_p[4];
    return p;
}

Poly truncated_square(const Poly& p) {
    Poly q{};
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            for (int c = 0; a + b + c <= 4; ++c)
                for (int d = 0; a + b + c + d <= 4; ++d) q[a + c][b + d] += p[a][b] * p[c][d];
    return q;
}

double evaluate(const Poly& p, double x, double y) {
    double sum = 0.0;
    double xa = 1.0;
    for (int a = 0; a <= 4; ++a) {
        double yb = 1.0;
        for (int b = 0; a + b <= 4; ++b) {
            sum += p[a][b] * xa * yb;
            yb *= y;
        }
        xa *= x;
    }
    return sum;
}

TaylorCoefficients without_gvm(TaylorCoefficients tc) {
    tc.tau_s[1] = 0.0;
    tc.tau_i[1] = 0.0;
    return tc;
}

DispersionJet field_jet(const CrystalSpec& spec, double omega, Polarization pol, const char* field) {
    try {
        return bloch_jet(spec, omega, pol, spec.gap_order);
    } catch (const InGapError&) {
        throw InGapError(field, omega);
    }
}

}  // namespace

TaylorCoefficients taylor_coefficients(const CrystalSpec& spec, double omega_o, FieldPolarizations pols) {
    const auto kp = field_jet(spec, 2.0 * omega_o, pols.pump, "pump");
    const auto ks = field_jet(spec, omega_o, pols.signal, "signal");
    const auto ki = field_jet(spec, omega_o, pols.idler, "idler");
    TaylorCoefficients tc;
    tc.omega_o = omega_o;
    tc.length_m = spec.length_m();
    tc.dk0 = ks[0] + ki[0] - kp[0];
    const double L = spec.length_m();
    double unit = 1.0;
    for (int j = 1; j <= 4; ++j) {
        unit *= kFs;
        tc.tau_s[j] = L * (kp[j] - ks[j]) / unit;
        tc.tau_i[j] = L * (kp[j] - ki[j]) / unit;
        tc.tau_p[j] = L * kp[j] / unit;
    }
    return tc;
}

double bandwidth_threshold(const TaylorCoefficients& tc, double gamma) {
    const double sum = tc.tau_s[2] + tc.tau_i[2];
    if (!(sum > 0.0)) throw DomainError("bandwidth condition needs tau_s^(2) + tau_i^(2) > 0");
    return 2.0 * std::pow(4.0 / gamma, 0.25) / std::sqrt(sum) / kFs;
}

ConditionReport check_conditions(const TaylorCoefficients& tc, const PumpSpec& pump,
                                 const ConditionThresholds& thresholds) {
    ConditionReport r;
    r.gvm_signal_fs = std::abs(tc.tau_s[1]);
    r.gvm_idler_fs = std::abs(tc.tau_i[1]);
    r.gvm = r.gvm_signal_fs < thresholds.gvm_fs && r.gvm_idler_fs < thresholds.gvm_fs;
    r.weak_pump = true;
    for (int j = 2; j <= 4; ++j) {
        const double denom = std::min(std::abs(tc.tau_s[j]), std::abs(tc.tau_i[j]));
        const double ratio = denom > 0.0 ? std::abs(tc.tau_p[j]) / denom : std::numeric_limits<double>::infinity();
        r.weak_pump_ratio[static_cast<std::size_t>(j - 2)] = ratio;
        r.weak_pump = r.weak_pump && ratio < thresholds.weak_pump_ratio;
    }
    const double sum = tc.tau_s[2] + tc.tau_i[2];
    if (sum > 0.0) {
        r.bandwidth_threshold = bandwidth_threshold(tc, thresholds.gamma);
        r.bandwidth_factor = pump.sigma / r.bandwidth_threshold;
        r.broadband = r.bandwidth_factor > thresholds.bandwidth_factor;
    }
    return r;
}

std::string_view to_string(GaussianLevel level) {
    switch (level) {
        case GaussianLevel::full_quartic: return "full-quartic";
        case GaussianLevel::gvm_simplified: return "gvm-simplified";
        case GaussianLevel::weak_pump: return "weak-pump";
        case GaussianLevel::broadband: return "broadband";
    }
    return "?";
}

GaussianLevel parse_gaussian_level(std::string_view text) {
    for (auto level : {GaussianLevel::full_quartic, GaussianLevel::gvm_simplified, GaussianLevel::weak_pump,
                       GaussianLevel::broadband})
        if (text == to_string(level)) return level;
    throw ConfigError("unknown approximation level '" + std::string(text) + "'");
}

double taylor_mismatch(const TaylorCoefficients& tc, double nu_s, double nu_i) {
    return evaluate(mismatch_polynomial(tc), nu_s * kFs, nu_i * kFs);
}

std::complex<double> gaussian_jsa(const TaylorCoefficients& tc, const PumpSpec& pump, double nu_s, double nu_i,
                                  GaussianLevel level, double gamma) {
    const double x = nu_s * kFs;
    const double y = nu_i * kFs;
    const double sig = pump.sigma * kFs;
    const double sum2 = (x + y) * (x + y);
    switch (level) {
        case GaussianLevel::full_quartic:
        case GaussianLevel::gvm_simplified: {
            const auto p = mismatch_polynomial(level == GaussianLevel::full_quartic ? tc : without_gvm(tc));
            const double real = -(gamma / 4.0) * (evaluate(truncated_square(p), x, y) + 4.0 * sum2 / (gamma * sig * sig));
            return std::exp(std::complex<double>(real, 0.5 * evaluate(p, x, y)));
        }
        case GaussianLevel::weak_pump:
        case GaussianLevel::broadband: {
            const double q = tc.tau_s[2] * x * x + tc.tau_i[2] * y * y;
            double real = -(gamma / 4.0) * q * q;
            if (level == GaussianLevel::weak_pump) real -= sum2 / (sig * sig);
            double arg = 0.0;
            double xj = x;
            double yj = y;
            for (int j = 2; j <= 4; ++j) {
                xj *= x;
                yj *= y;
                arg += tc.tau_s[j] * xj + tc.tau_i[j] * yj;
            }
            return std::polar(std::exp(real), 0.5 * arg);
        }
    }
    return 0.0;
}

std::vector<std::string> approximation_warnings(const TaylorCoefficients& tc, const PumpSpec& pump,
                                                GaussianLevel level, const ConditionThresholds& thresholds) {
    std::vector<std::string> out;
    const auto r = check_conditions(tc, pump, thresholds);
    std::ostringstream os;
    if (level != GaussianLevel::full_quartic && !r.gvm) {
        os << "group-velocity matching not met: |tau_s1|=" << r.gvm_signal_fs << " fs, |tau_i1|=" << r.gvm_idler_fs
           << " fs";
        out.push_back(os.str());
        os.str("");
    }
    if ((level == GaussianLevel::weak_pump || level == GaussianLevel::broadband) && !r.weak_pump) {
        os << "weak pump dispersion not met: ratios " << r.weak_pump_ratio[0] << ", " << r.weak_pump_ratio[1] << ", "
           << r.weak_pump_ratio[2];
        out.push_back(os.str());
        os.str("");
    }
    if (level == GaussianLevel::broadband && !r.broadband) {
        os << "broadband pump condition not met: sigma/threshold=" << r.bandwidth_factor;
        out.push_back(os.str());
    }
    return out;
}

JointSpectrum gaussian_joint_spectrum(const TaylorCoefficients& tc, const CrystalSpec& spec, const PumpSpec& pump,
                                      const SpectralGrid& grid, GaussianLevel level,
                                      const ConditionThresholds& thresholds) {
    JointSpectrum js;
    js.omega_s = grid.signal_axis();
    js.omega_i = grid.idler_axis();
    js.crystal = spec;
    js.pump_spec = pump;
    js.signal_flagged.assign(js.omega_s.size(), false);
    js.idler_flagged.assign(js.omega_i.size(), false);
    const auto rows = static_cast<Eigen::Index>(js.omega_s.size());
    const auto cols = static_cast<Eigen::Index>(js.omega_i.size());
    js.amplitude.resize(rows, cols);
    js.pump.resize(rows, cols);
    js.phasematching.resize(rows, cols);
    PumpSpec no_pump = pump;
    no_pump.sigma = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double ns = js.omega_s[static_cast<std::size_t>(r)] - tc.omega_o;
            const double ni = js.omega_i[static_cast<std::size_t>(c)] - tc.omega_o;
            js.amplitude(r, c) = gaussian_jsa(tc, pump, ns, ni, level, thresholds.gamma);
            js.pump(r, c) = pump_envelope(pump, js.omega_s[static_cast<std::size_t>(r)],
                                          js.omega_i[static_cast<std::size_t>(c)]);
            js.phasematching(r, c) = level == GaussianLevel::broadband
                                         ? js.amplitude(r, c)
                                         : gaussian_jsa(tc, no_pump, ns, ni, level, thresholds.gamma);
        }
    }
    js.warnings = approximation_warnings(tc, pump, level, thresholds);
    return js;
}

}  // namespace nlpc

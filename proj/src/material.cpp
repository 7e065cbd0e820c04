#include "nlpc/material.hpp"

#include <cmath>
#include <sstream>

namespace nlpc {

std::string_view to_string(Polarization pol) {
    return pol == Polarization::ordinary ? "ordinary" : "extraordinary";
}

Polarization parse_polarization(std::string_view text) {
    if (text == "ordinary" || text == "o") return Polarization::ordinary;
    if (text == "extraordinary" || text == "e") return Polarization::extraordinary;
    throw DomainError("unknown polarization '" + std::string(text) + "'");
}

namespace {

template <class T>
void check_window(const MaterialModel& m, const T& lambda_um) {
    const double l = value(lambda_um);
    if (!(l >= m.window_min_um && l <= m.window_max_um)) {
        std::ostringstream os;
        os << "wavelength " << l << " um outside the validity window [" << m.window_min_um << ", "
           << m.window_max_um << "] um of material '" << m.name << "'";
        throw DomainError(os.str());
    }
}

}  // namespace

void MaterialModel::validate() const {
    if (!(window_min_um > 0.0 && window_max_um > window_min_um))
        throw DomainError("material '" + name + "': invalid validity window");
    constexpr int kSamples = 256;
    for (int k = 0; k <= kSamples; ++k) {
        const double l = window_min_um + (window_max_um - window_min_um) * k / kSamples;
        for (const auto* s : {&ordinary, &extraordinary}) {
            const double n2 = s->index_squared(l);
            if (!std::isfinite(n2) || n2 <= 1.0)
                throw DomainError("material '" + name + "': index not finite or <= 1 at " + std::to_string(l) +
                                  " um");
        }
    }
}

MaterialModel bbo_kato1986() {
    MaterialModel m;
    m.name = "BBO (Kato 1986)";
    m.ordinary = {2.7359, 0.01878, 0.01822, 0.01354};
    m.extraordinary = {2.3753, 0.01224, 0.01667, 0.01516};
    m.window_min_um = 0.3;
    m.window_max_um = 1.5;
    return m;
}

double index_ordinary(const MaterialModel& material, double lambda_m) {
    const double l = lambda_m / kUm;
    check_window(material, l);
    return std::sqrt(material.ordinary.index_squared(l));
}

double index_principal_extraordinary(const MaterialModel& material, double lambda_m) {
    const double l = lambda_m / kUm;
    check_window(material, l);
    return std::sqrt(material.extraordinary.index_squared(l));
}

double index_extraordinary(const MaterialModel& material, double lambda_m, double theta) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-15))
        throw DomainError("propagation angle must lie in [0, pi/2]");
    return natural_index(material, Polarization::extraordinary, theta, omega_from_wavelength(lambda_m));
}

template <class T>
T natural_index(const MaterialModel& material, Polarization pol, double theta, const T& omega) {
    const T lambda_um = (2.0 * kPi * kSpeedOfLight / kUm) / omega;
    check_window(material, lambda_um);
    const T no2 = material.ordinary.index_squared(lambda_um);
    if (pol == Polarization::ordinary) return sqrt(no2);
    const T ne2 = material.extraordinary.index_squared(lambda_um);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const T inv = (c * c) / no2 + (s * s) / ne2;
    return sqrt(1.0 / inv);
}

template double natural_index<double>(const MaterialModel&, Polarization, double, const double&);
template DispersionJet natural_index<DispersionJet>(const MaterialModel&, Polarization, double,
                                                    const DispersionJet&);

void CrystalSpec::validate() const {
    if (!(period_nm > 0.0)) throw DomainError("period must be positive");
    if (!(length_mm > 0.0)) throw DomainError("crystal length must be positive");
    if (!(duty_cycle > 0.0 && duty_cycle < 1.0)) throw DomainError("duty cycle must lie in (0, 1)");
    if (!(std::abs(contrast) < 2.0)) throw DomainError("invalid contrast: |alpha| must be < 2");
    if (!(contrast_scale > 0.0)) throw DomainError("contrast scale must be positive");
    if (!(std::abs(layer_contrast()) < 2.0)) throw DomainError("invalid contrast: layer contrast must be < 2");
    if (!(angle_rad >= 0.0 && angle_rad <= kPi / 2.0 + 1e-15))
        throw DomainError("propagation angle must lie in [0, pi/2]");
    if (gap_order < 1) throw DomainError("band-gap order must be >= 1");
}

LayerIndices layer_indices(const CrystalSpec& spec, double lambda_m, Polarization pol) {
    const double a = spec.layer_contrast();
    if (!(std::abs(a) < 2.0)) throw DomainError("invalid contrast: layer contrast must be < 2");
    const double n1 = natural_index(spec.material, pol, spec.angle_rad, omega_from_wavelength(lambda_m));
    LayerIndices out;
    out.zone_a = n1;
    out.zone_b = n1 * std::sqrt((2.0 - a) / (2.0 + a));
    out.mean = n1 * std::sqrt(2.0 / (2.0 + a));
    return out;
}

double sf10_gvd(double lambda_m) {
    // Schott catalogue three-term Sellmeier, lambda in um.
    constexpr double b[3] = {1.62153902, 0.256287842, 1.64447552};
    constexpr double c[3] = {0.0122241457, 0.0595736775, 147.468793};
    const auto omega = DispersionJet::variable(omega_from_wavelength(lambda_m));
    const DispersionJet l = (2.0 * kPi * kSpeedOfLight / kUm) / omega;
    const DispersionJet l2 = l * l;
    DispersionJet n2(1.0);
    for (int i = 0; i < 3; ++i) n2 += b[i] * l2 / (l2 - c[i]);
    const DispersionJet k = sqrt(n2) * omega / kSpeedOfLight;
    return 2.0 * k[2];
}

}  // namespace nlpc

#pragma once

#include <string>
#include <string_view>

#include "nlpc/constants.hpp"
#include "nlpc/errors.hpp"
#include "nlpc/jet.hpp"

namespace nlpc {

/// Taylor jet used for dispersion work: value plus four derivatives.
using DispersionJet = Jet<4>;

enum class Polarization { ordinary, extraordinary };

std::string_view to_string(Polarization pol);
Polarization parse_polarization(std::string_view text);

/// n^2 = A + B/(lambda^2 - C) - D lambda^2, lambda in micrometers.
struct SellmeierCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    template <class T>
    T index_squared(const T& lambda_um) const {
        const T l2 = lambda_um * lambda_um;
        return a + b / (l2 - c) - d * l2;
    }
};

/// Bulk uniaxial crystal dispersion. The extraordinary set describes the
/// principal index (propagation perpendicular to the optic axis).
struct MaterialModel {
    std::string name;
    SellmeierCoefficients ordinary;
    SellmeierCoefficients extraordinary;
    double window_min_um = 0.3;
    double window_max_um = 1.5;

    /// Throws DomainError unless both indices exceed 1 and are finite over the window.
    void validate() const;
};

/// beta-barium borate, K. Kato, IEEE J. Quantum Electron. 22, 1013 (1986).
MaterialModel bbo_kato1986();

double index_ordinary(const MaterialModel& material, double lambda_m);
double index_principal_extraordinary(const MaterialModel& material, double lambda_m);

/// Angle-tuned extraordinary index, theta measured from the optic axis:
/// 1/n_e(theta)^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_E^2.
double index_extraordinary(const MaterialModel& material, double lambda_m, double theta);

/// Natural index of the bulk material for a field at angular frequency omega.
/// For extraordinary waves `theta` is the propagation angle to the optic axis.
template <class T>
T natural_index(const MaterialModel& material, Polarization pol, double theta, const T& omega);

extern template double natural_index<double>(const MaterialModel&, Polarization, double, const double&);
extern template DispersionJet natural_index<DispersionJet>(const MaterialModel&, Polarization, double,
                                                           const DispersionJet&);

/// Bilayer photonic crystal. Zone A (0 < z < a) keeps the natural index;
/// zone B carries the index change.
struct CrystalSpec {
    double period_nm = 279.1;
    double duty_cycle = 0.5;
    /// Nominal permittivity contrast alpha.
    double contrast = 0.027;
    double angle_rad = deg_to_rad(41.8);
    double length_mm = 4.0;
    /// Ratio of the layer permittivity contrast (n1^2 - n2^2)/nbar^2 to the
    /// nominal contrast. 1 reads alpha as the layer contrast itself; 2 is the
    /// convention under which the published BBO design values come out.
    double contrast_scale = 2.0;
    /// Band-gap order used by the coupled-mode dispersion.
    int gap_order = 1;
    MaterialModel material = bbo_kato1986();

    double period_m() const { return period_nm * kNm; }
    double length_m() const { return length_mm * kMm; }
    double layer_contrast() const { return contrast_scale * contrast; }

    /// Throws DomainError when a field violates its physical range.
    void validate() const;
};

struct LayerIndices {
    double zone_a = 0.0;  // n_mu1, natural material
    double zone_b = 0.0;  // n_mu2
    double mean = 0.0;    // nbar_mu = sqrt((n1^2 + n2^2)/2)
};

/// n2^2 = n1^2 (2 - a)/(2 + a) and nbar = n1 sqrt(2/(2 + a)) with a the layer
/// contrast; a > 0 puts zone B below zone A.
LayerIndices layer_indices(const CrystalSpec& spec, double lambda_m, Polarization pol);

/// nbar_mu(omega), the mean-field index entering the coupled-mode theory.
template <class T>
T mean_index(const CrystalSpec& spec, Polarization pol, const T& omega) {
    const double scale = std::sqrt(2.0 / (2.0 + spec.layer_contrast()));
    return natural_index(spec.material, pol, spec.angle_rad, omega) * scale;
}

/// kbar_mu(omega) = nbar_mu omega / c.
template <class T>
T mean_wavenumber(const CrystalSpec& spec, Polarization pol, const T& omega) {
    return mean_index(spec, pol, omega) * omega / kSpeedOfLight;
}

/// Group-velocity dispersion d^2k/domega^2 (s^2/m) of Schott SF10 glass,
/// used as a reference level for strongly dispersive bulk media.
double sf10_gvd(double lambda_m);

}  // namespace nlpc

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlpc/designer.hpp"

namespace nlpc {

/// Crystal fields as written in a document (angle in degrees, so that a
/// written-out configuration reads back bit for bit).
struct CrystalSettings {
    double period_nm = 279.1;
    double duty_cycle = 0.5;
    double contrast = 0.027;
    double angle_deg = 41.8;
    double length_mm = 4.0;
    double contrast_scale = 2.0;
    int gap_order = 1;
};

struct DispersionSettings {
    double lambda_min_nm = 700.0;
    double lambda_max_nm = 1100.0;
    int points = 2001;
    bool exact = true;  // also tabulate the transfer-matrix K
    double sf10_reference_nm = 850.0;
};

struct FourierSettings {
    std::vector<double> wavelengths_nm{425.0, 850.0};
    int max_harmonic = 3;
    int quadrature_points = 1024;
};

struct GridSettings {
    int points = 512;
    double half_width_bandwidths = 4.0;
    double gap_clearance = 0.1;
    std::vector<std::array<int, 3>> harmonics{{0, 0, 0}};
    bool bloch_fourier = true;
    bool spectral_weights = true;
};

struct DesignSettings {
    bool apply = false;  // jsa/schmidt/tolerance run the solver and use its crystal
    double lambda_o_nm = 850.0;
    std::array<double, 2> alpha{0.005, 0.06};
    std::array<double, 2> theta_deg{36.0, 46.0};
    std::array<double, 2> period_nm{265.0, 285.0};
    std::array<int, 3> scan{64, 64, 32};
    int starts = 8;
    int max_iterations = 60;
    std::uint64_t seed = 0;
    int contour_points = 128;
    std::vector<double> contour_offsets_nm{-3.0, 0.0, 3.0};
};

struct ToleranceSettings {
    std::vector<std::string> parameters{"period", "alpha", "theta"};
    int points = 31;
    double period_half_range_nm = 2.5;
    double alpha_half_range = 0.02;
    double theta_half_range_deg = 3.0;
    int grid_points = 256;
};

struct SchmidtSettings {
    double cutoff = 1e-12;
    std::string input = "both";            // amplitude | modulus | both
    std::string gaussian_level = "none";   // none or a GaussianLevel name
    double gamma = kSincGamma;
    double gvm_threshold_fs = 0.5;
    double weak_pump_threshold = 0.25;
    double bandwidth_threshold_factor = 3.0;
};

struct OutputSettings {
    std::string dir = "out";
    std::string format = "tsv";  // tsv | bin
};

/// Resolved run configuration. Every field has a default; a document only
/// needs the keys it changes.
struct RunConfig {
    MaterialModel material = bbo_kato1986();
    CrystalSettings crystal;
    double pump_center_nm = 425.0;
    double pump_fwhm_nm = 10.0;
    FieldPolarizations pols;
    DispersionSettings dispersion;
    FourierSettings fourier;
    GridSettings grid;
    DesignSettings design;
    ToleranceSettings tolerance;
    SchmidtSettings schmidt;
    OutputSettings output;
    int threads = 0;

    CrystalSpec crystal_spec() const;
    PumpSpec pump() const;
    DesignBox box() const;
    DesignOptions design_options() const;
    GridRule grid_rule() const;
    PhaseMatchingOptions phasematching() const;
    std::vector<Harmonics> harmonics() const;
    ConditionThresholds thresholds() const;

    /// Re-checks all physical invariants; throws ConfigError.
    void validate() const;
};

/// Parses a configuration document. Unknown keys and type mismatches raise
/// ConfigError naming the key path. A material given as {"file": path} is
/// read relative to `base_dir`.
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Full resolved document (every key, material expanded inline).
nlohmann::json config_to_json(const RunConfig& config);

/// Reads a JSON file; throws ConfigError with the parser's location on syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Applies "a.b.c=value" to a document. The value is parsed as JSON when
/// possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Named built-in materials ("bbo").
MaterialModel builtin_material(const std::string& name);

}  // namespace nlpc

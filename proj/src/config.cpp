#include "nlpc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nlpc {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void type_error(const std::string& path, const char* expected) {
    throw ConfigError(path + ": expected " + expected);
}

void read(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) type_error(path, "a number");
    out = v.get<double>();
}

void read(const json& v, const std::string& path, int& out) {
    if (!v.is_number_integer()) type_error(path, "an integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) type_error(path, "a 32-bit integer");
    out = static_cast<int>(x);
}

void read(const json& v, const std::string& path, std::uint64_t& out) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        type_error(path, "a non-negative integer");
    out = v.get<std::uint64_t>();
}

void read(const json& v, const std::string& path, bool& out) {
    if (!v.is_boolean()) type_error(path, "true or false");
    out = v.get<bool>();
}

void read(const json& v, const std::string& path, std::string& out) {
    if (!v.is_string()) type_error(path, "a string");
    out = v.get<std::string>();
}

void read(const json& v, const std::string& path, Polarization& out) {
    std::string s;
    read(v, path, s);
    try {
        out = parse_polarization(s);
    } catch (const std::exception&) {
        type_error(path, "\"o\" or \"e\"");
    }
}

template <class T, std::size_t N>
void read(const json& v, const std::string& path, std::array<T, N>& out);

template <class T>
void read(const json& v, const std::string& path, std::vector<T>& out) {
    if (!v.is_array()) type_error(path, "an array");
    std::vector<T> tmp(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) read(v[k], path + "[" + std::to_string(k) + "]", tmp[k]);
    out = std::move(tmp);
}

template <class T, std::size_t N>
void read(const json& v, const std::string& path, std::array<T, N>& out) {
    if (!v.is_array() || v.size() != N) type_error(path, (std::string("an array of ") + std::to_string(N)).c_str());
    for (std::size_t k = 0; k < N; ++k) read(v[k], path + "[" + std::to_string(k) + "]", out[k]);
}

/// Object reader that rejects keys nobody asked for.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) type_error(path_.empty() ? "<document>" : path_, "an object");
    }

    template <class T>
    Section& get(const std::string& key, T& out) {
        used_.insert(key);
        if (auto it = obj_.find(key); it != obj_.end()) read(*it, join(path_, key), out);
        return *this;
    }

    const json* child(const std::string& key) {
        used_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (const auto& item : obj_.items())
            if (!used_.count(item.key())) throw ConfigError("unknown key '" + join(path_, item.key()) + "'");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

void read_coefficients(const json& v, const std::string& path, SellmeierCoefficients& c) {
    std::array<double, 4> a{};
    read(v, path, a);
    c = {a[0], a[1], a[2], a[3]};
}

MaterialModel read_material_object(const json& v, const std::string& path, const std::filesystem::path& base_dir) {
    Section s(v, path);
    if (const json* file = s.child("file")) {
        if (v.size() != 1) throw ConfigError(path + ": 'file' cannot be combined with other keys");
        std::string name;
        read(*file, s.path("file"), name);
        std::filesystem::path p(name);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        return read_material_object(read_json_file(p), p.string(), p.parent_path());
    }
    MaterialModel m;
    m.name = "custom";
    s.get("name", m.name);
    const json* o = s.child("ordinary");
    const json* e = s.child("extraordinary");
    if (!o || !e) throw ConfigError(path + ": a material needs 'ordinary' and 'extraordinary' coefficients");
    read_coefficients(*o, s.path("ordinary"), m.ordinary);
    read_coefficients(*e, s.path("extraordinary"), m.extraordinary);
    std::array<double, 2> window{m.window_min_um, m.window_max_um};
    s.get("window_um", window);
    m.window_min_um = window[0];
    m.window_max_um = window[1];
    s.finish();
    return m;
}

json coefficients_json(const SellmeierCoefficients& c) { return json::array({c.a, c.b, c.c, c.d}); }

}  // namespace

MaterialModel builtin_material(const std::string& name) {
    if (name == "bbo" || name == "bbo-kato1986") return bbo_kato1986();
    throw ConfigError("material: unknown built-in material '" + name + "' (available: bbo)");
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file " + path.string());
    try {
        return json::parse(in, nullptr, true, false);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not of the form key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
        if (!node->is_object()) {
            if (!node->is_null()) throw ConfigError("override key '" + key + "' descends into a non-object");
            *node = json::object();
        }
        node = &(*node)[part];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = std::move(value);
}

RunConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig c;
    Section root(doc, "");
    if (const json* m = root.child("material")) {
        if (m->is_string()) c.material = builtin_material(m->get<std::string>());
        else c.material = read_material_object(*m, "material", base_dir);
    }
    if (const json* v = root.child("crystal")) {
        Section s(*v, "crystal");
        s.get("period_nm", c.crystal.period_nm)
            .get("duty_cycle", c.crystal.duty_cycle)
            .get("contrast", c.crystal.contrast)
            .get("angle_deg", c.crystal.angle_deg)
            .get("length_mm", c.crystal.length_mm)
            .get("contrast_scale", c.crystal.contrast_scale)
            .get("gap_order", c.crystal.gap_order)
            .finish();
    }
    if (const json* v = root.child("pump")) {
        Section s(*v, "pump");
        s.get("center_nm", c.pump_center_nm).get("fwhm_nm", c.pump_fwhm_nm).get("polarization", c.pols.pump).finish();
    }
    if (const json* v = root.child("fields")) {
        Section s(*v, "fields");
        s.get("signal", c.pols.signal).get("idler", c.pols.idler).finish();
    }
    if (const json* v = root.child("dispersion")) {
        Section s(*v, "dispersion");
        s.get("lambda_min_nm", c.dispersion.lambda_min_nm)
            .get("lambda_max_nm", c.dispersion.lambda_max_nm)
            .get("points", c.dispersion.points)
            .get("exact", c.dispersion.exact)
            .get("sf10_reference_nm", c.dispersion.sf10_reference_nm)
            .finish();
    }
    if (const json* v = root.child("fourier")) {
        Section s(*v, "fourier");
        s.get("wavelengths_nm", c.fourier.wavelengths_nm)
            .get("max_harmonic", c.fourier.max_harmonic)
            .get("quadrature_points", c.fourier.quadrature_points)
            .finish();
    }
    if (const json* v = root.child("grid")) {
        Section s(*v, "grid");
        s.get("points", c.grid.points)
            .get("half_width_bandwidths", c.grid.half_width_bandwidths)
            .get("gap_clearance", c.grid.gap_clearance)
            .get("harmonics", c.grid.harmonics)
            .get("bloch_fourier", c.grid.bloch_fourier)
            .get("spectral_weights", c.grid.spectral_weights)
            .finish();
    }
    if (const json* v = root.child("design")) {
        Section s(*v, "design");
        s.get("apply", c.design.apply)
            .get("lambda_o_nm", c.design.lambda_o_nm)
            .get("alpha", c.design.alpha)
            .get("theta_deg", c.design.theta_deg)
            .get("period_nm", c.design.period_nm)
            .get("scan", c.design.scan)
            .get("starts", c.design.starts)
            .get("max_iterations", c.design.max_iterations)
            .get("seed", c.design.seed)
            .get("contour_points", c.design.contour_points)
            .get("contour_offsets_nm", c.design.contour_offsets_nm)
            .finish();
    }
    if (const json* v = root.child("tolerance")) {
        Section s(*v, "tolerance");
        s.get("parameters", c.tolerance.parameters)
            .get("points", c.tolerance.points)
            .get("period_half_range_nm", c.tolerance.period_half_range_nm)
            .get("alpha_half_range", c.tolerance.alpha_half_range)
            .get("theta_half_range_deg", c.tolerance.theta_half_range_deg)
            .get("grid_points", c.tolerance.grid_points)
            .finish();
    }
    if (const json* v = root.child("schmidt")) {
        Section s(*v, "schmidt");
        s.get("cutoff", c.schmidt.cutoff)
            .get("input", c.schmidt.input)
            .get("gaussian_level", c.schmidt.gaussian_level)
            .get("gamma", c.schmidt.gamma)
            .get("gvm_threshold_fs", c.schmidt.gvm_threshold_fs)
            .get("weak_pump_threshold", c.schmidt.weak_pump_threshold)
            .get("bandwidth_threshold_factor", c.schmidt.bandwidth_threshold_factor)
            .finish();
    }
    if (const json* v = root.child("output")) {
        Section s(*v, "output");
        s.get("dir", c.output.dir).get("format", c.output.format).finish();
    }
    root.get("threads", c.threads);
    root.finish();
    c.validate();
    return c;
}

json config_to_json(const RunConfig& c) {
    json harmonics = json::array();
    for (const auto& h : c.grid.harmonics) harmonics.push_back(json::array({h[0], h[1], h[2]}));
    return json{
        {"material",
         {{"name", c.material.name},
          {"ordinary", coefficients_json(c.material.ordinary)},
          {"extraordinary", coefficients_json(c.material.extraordinary)},
          {"window_um", json::array({c.material.window_min_um, c.material.window_max_um})}}},
        {"crystal",
         {{"period_nm", c.crystal.period_nm},
          {"duty_cycle", c.crystal.duty_cycle},
          {"contrast", c.crystal.contrast},
          {"angle_deg", c.crystal.angle_deg},
          {"length_mm", c.crystal.length_mm},
          {"contrast_scale", c.crystal.contrast_scale},
          {"gap_order", c.crystal.gap_order}}},
        {"pump",
         {{"center_nm", c.pump_center_nm},
          {"fwhm_nm", c.pump_fwhm_nm},
          {"polarization", std::string(to_string(c.pols.pump))}}},
        {"fields", {{"signal", std::string(to_string(c.pols.signal))}, {"idler", std::string(to_string(c.pols.idler))}}},
        {"dispersion",
         {{"lambda_min_nm", c.dispersion.lambda_min_nm},
          {"lambda_max_nm", c.dispersion.lambda_max_nm},
          {"points", c.dispersion.points},
          {"exact", c.dispersion.exact},
          {"sf10_reference_nm", c.dispersion.sf10_reference_nm}}},
        {"fourier",
         {{"wavelengths_nm", c.fourier.wavelengths_nm},
          {"max_harmonic", c.fourier.max_harmonic},
          {"quadrature_points", c.fourier.quadrature_points}}},
        {"grid",
         {{"points", c.grid.points},
          {"half_width_bandwidths", c.grid.half_width_bandwidths},
          {"gap_clearance", c.grid.gap_clearance},
          {"harmonics", harmonics},
          {"bloch_fourier", c.grid.bloch_fourier},
          {"spectral_weights", c.grid.spectral_weights}}},
        {"design",
         {{"apply", c.design.apply},
          {"lambda_o_nm", c.design.lambda_o_nm},
          {"alpha", c.design.alpha},
          {"theta_deg", c.design.theta_deg},
          {"period_nm", c.design.period_nm},
          {"scan", c.design.scan},
          {"starts", c.design.starts},
          {"max_iterations", c.design.max_iterations},
          {"seed", c.design.seed},
          {"contour_points", c.design.contour_points},
          {"contour_offsets_nm", c.design.contour_offsets_nm}}},
        {"tolerance",
         {{"parameters", c.tolerance.parameters},
          {"points", c.tolerance.points},
          {"period_half_range_nm", c.tolerance.period_half_range_nm},
          {"alpha_half_range", c.tolerance.alpha_half_range},
          {"theta_half_range_deg", c.tolerance.theta_half_range_deg},
          {"grid_points", c.tolerance.grid_points}}},
        {"schmidt",
         {{"cutoff", c.schmidt.cutoff},
          {"input", c.schmidt.input},
          {"gaussian_level", c.schmidt.gaussian_level},
          {"gamma", c.schmidt.gamma},
          {"gvm_threshold_fs", c.schmidt.gvm_threshold_fs},
          {"weak_pump_threshold", c.schmidt.weak_pump_threshold},
          {"bandwidth_threshold_factor", c.schmidt.bandwidth_threshold_factor}}},
        {"output", {{"dir", c.output.dir}, {"format", c.output.format}}},
        {"threads", c.threads},
    };
}

CrystalSpec RunConfig::crystal_spec() const {
    CrystalSpec s;
    s.period_nm = crystal.period_nm;
    s.duty_cycle = crystal.duty_cycle;
    s.contrast = crystal.contrast;
    s.angle_rad = deg_to_rad(crystal.angle_deg);
    s.length_mm = crystal.length_mm;
    s.contrast_scale = crystal.contrast_scale;
    s.gap_order = crystal.gap_order;
    s.material = material;
    return s;
}

PumpSpec RunConfig::pump() const { return make_pump(pump_center_nm, pump_fwhm_nm, pols.pump); }

DesignBox RunConfig::box() const {
    DesignBox b;
    b.alpha_min = design.alpha[0];
    b.alpha_max = design.alpha[1];
    b.theta_min_rad = deg_to_rad(design.theta_deg[0]);
    b.theta_max_rad = deg_to_rad(design.theta_deg[1]);
    b.period_min_nm = design.period_nm[0];
    b.period_max_nm = design.period_nm[1];
    return b;
}

DesignOptions RunConfig::design_options() const {
    DesignOptions o;
    o.lambda_o_nm = design.lambda_o_nm;
    o.scan_alpha = design.scan[0];
    o.scan_theta = design.scan[1];
    o.scan_period = design.scan[2];
    o.starts = design.starts;
    o.max_iterations = design.max_iterations;
    o.seed = design.seed;
    o.threads = threads;
    o.pols = pols;
    return o;
}

GridRule RunConfig::grid_rule() const { return {grid.points, grid.half_width_bandwidths, grid.gap_clearance}; }

PhaseMatchingOptions RunConfig::phasematching() const {
    PhaseMatchingOptions o;
    o.bloch_fourier = grid.bloch_fourier;
    o.spectral_weights = grid.spectral_weights;
    o.max_harmonic = fourier.max_harmonic;
    o.quadrature_points = fourier.quadrature_points;
    return o;
}

std::vector<Harmonics> RunConfig::harmonics() const {
    std::vector<Harmonics> out;
    for (const auto& h : grid.harmonics) out.push_back({h[0], h[1], h[2]});
    return out;
}

ConditionThresholds RunConfig::thresholds() const {
    return {schmidt.gvm_threshold_fs, schmidt.weak_pump_threshold, schmidt.bandwidth_threshold_factor, schmidt.gamma};
}

void RunConfig::validate() const {
    auto check = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    try {
        material.validate();
        crystal_spec().validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("crystal: ") + e.what());
    }
    check(pump_center_nm > 0.0, "pump.center_nm: must be positive");
    check(pump_fwhm_nm > 0.0 && pump_fwhm_nm < 2.0 * pump_center_nm, "pump.fwhm_nm: must be in (0, 2 center_nm)");
    check(dispersion.lambda_min_nm > 0.0 && dispersion.lambda_min_nm < dispersion.lambda_max_nm,
          "dispersion: need 0 < lambda_min_nm < lambda_max_nm");
    check(dispersion.points >= 2, "dispersion.points: must be at least 2");
    check(fourier.max_harmonic >= 0, "fourier.max_harmonic: must be non-negative");
    check(fourier.quadrature_points >= 1024, "fourier.quadrature_points: must be at least 1024");
    check(grid.points >= 2, "grid.points: must be at least 2");
    check(grid.half_width_bandwidths > 0.0, "grid.half_width_bandwidths: must be positive");
    check(grid.gap_clearance >= 0.0, "grid.gap_clearance: must be non-negative");
    check(!grid.harmonics.empty(), "grid.harmonics: at least one (l, m, n) triple required");
    try {
        box().validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("design: ") + e.what());
    }
    check(design.lambda_o_nm > 0.0, "design.lambda_o_nm: must be positive");
    check(design.scan[0] >= 1 && design.scan[1] >= 1 && design.scan[2] >= 1, "design.scan: counts must be positive");
    check(design.starts >= 1, "design.starts: must be positive");
    check(design.max_iterations >= 0, "design.max_iterations: must be non-negative");
    check(design.contour_points >= 2, "design.contour_points: must be at least 2");
    for (const auto& p : tolerance.parameters) {
        try {
            parse_sweep_parameter(p);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("tolerance.parameters: ") + e.what());
        }
    }
    check(tolerance.points >= 3, "tolerance.points: must be at least 3");
    check(tolerance.period_half_range_nm > 0.0 && tolerance.alpha_half_range > 0.0 &&
              tolerance.theta_half_range_deg > 0.0,
          "tolerance: half ranges must be positive");
    check(tolerance.grid_points >= 2, "tolerance.grid_points: must be at least 2");
    check(schmidt.cutoff >= 0.0 && schmidt.cutoff < 1.0, "schmidt.cutoff: must be in [0, 1)");
    check(schmidt.input == "amplitude" || schmidt.input == "modulus" || schmidt.input == "both",
          "schmidt.input: expected amplitude, modulus or both");
    if (schmidt.gaussian_level != "none") {
        try {
            parse_gaussian_level(schmidt.gaussian_level);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("schmidt.gaussian_level: ") + e.what());
        }
    }
    check(schmidt.gamma > 0.0, "schmidt.gamma: must be positive");
    check(output.format == "tsv" || output.format == "bin", "output.format: expected tsv or bin");
    check(threads >= 0, "threads: must be non-negative");
}

}  // namespace nlpc

#include "nlpc/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "nlpc/bloch.hpp"
#include "nlpc/io.hpp"
#include "nlpc/version.hpp"

namespace nlpc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Output {
    fs::path dir;
    std::string command;
    std::string config_json;

    Output(const RunConfig& c, std::string cmd)
        : dir(c.output.dir), command(std::move(cmd)), config_json(config_to_json(c).dump()) {
        fs::create_directories(dir);
        io::write_file(dir / "config.json", config_to_json(c).dump(2) + "\n");
    }

    std::string header() const { return io::header_block(command, config_json); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

const char* pol_label(Polarization p) { return p == Polarization::ordinary ? "o" : "e"; }

/// Crystal for the spectral commands, solved first when design.apply is set.
CrystalSpec working_crystal(const RunConfig& config, std::ostream& log, DesignSolution* solution = nullptr) {
    if (!config.design.apply) return config.crystal_spec();
    log << "solving design at " << config.design.lambda_o_nm << " nm\n";
    auto sol = solve_design(config.crystal_spec(), config.box(), config.design_options());
    if (!sol.converged) throw ConvergenceError("design did not converge: " + sol.diagnostic);
    if (solution) *solution = sol;
    return sol.crystal;
}

void design_keys(io::KeyValue& kv, const DesignSolution& s) {
    kv.set("converged", s.converged)
        .set("iterations", s.iterations)
        .set("lambda_o_nm", s.lambda_o_nm)
        .set("alpha", s.alpha)
        .set("theta_deg", rad_to_deg(s.theta_rad))
        .set("period_nm", s.period_nm)
        .set("residual_dk0_rad_per_m", s.dk0)
        .set("residual_tau_s1_fs", s.tau_s1_fs)
        .set("residual_tau_i1_fs", s.tau_i1_fs);
    if (!s.diagnostic.empty()) kv.set("diagnostic", s.diagnostic);
}

void taylor_keys(io::KeyValue& kv, const TaylorCoefficients& tc) {
    kv.set("omega_o_rad_per_s", tc.omega_o).set("dk0_rad_per_m", tc.dk0);
    for (int j = 1; j <= 4; ++j) {
        const std::string u = "_fs" + std::to_string(j);
        kv.set("tau_s" + std::to_string(j) + u, tc.tau_s[j])
            .set("tau_i" + std::to_string(j) + u, tc.tau_i[j])
            .set("tau_p" + std::to_string(j) + u, tc.tau_p[j]);
    }
}

void condition_keys(io::KeyValue& kv, const ConditionReport& r) {
    kv.set("gvm_signal_fs", r.gvm_signal_fs)
        .set("gvm_idler_fs", r.gvm_idler_fs)
        .set("weak_pump_ratio_2", r.weak_pump_ratio[0])
        .set("weak_pump_ratio_3", r.weak_pump_ratio[1])
        .set("weak_pump_ratio_4", r.weak_pump_ratio[2])
        .set("bandwidth_threshold_rad_per_s", r.bandwidth_threshold)
        .set("bandwidth_factor", r.bandwidth_factor)
        .set("condition_gvm", r.gvm)
        .set("condition_weak_pump", r.weak_pump)
        .set("condition_broadband", r.broadband);
}

}  // namespace

int cmd_dispersion(const RunConfig& config, std::ostream& log) {
    const Output out(config, "dispersion");
    const CrystalSpec spec = config.crystal_spec();
    const auto& d = config.dispersion;
    const double wlo = omega_from_wavelength(d.lambda_max_nm * kNm);
    const double whi = omega_from_wavelength(d.lambda_min_nm * kNm);
    const double sf10 = sf10_gvd(d.sf10_reference_nm * kNm);

    std::string header = out.header();
    header += "# sf10_reference_nm: " + io::format_double(d.sf10_reference_nm) + "\n";
    header += "# sf10_gvd_s2_per_m: " + io::format_double(sf10) + "\n";

    io::KeyValue gaps(out.header());
    gaps.set("sf10_reference_nm", d.sf10_reference_nm).set("sf10_gvd_s2_per_m", sf10);
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
        std::vector<std::string> cols{"omega_rad_per_s", "lambda_nm", "pol", "re_K", "im_K", "dK_dw_s_per_m",
                                      "inv_dK_dw_m_per_s", "d2K_dw2_s2_per_m", "in_gap"};
        if (d.exact) {
            cols.insert(cols.end(), {"re_K_exact", "im_K_exact", "in_gap_exact"});
        }
        io::Table t(header, cols);
        for (int k = 0; k < d.points; ++k) {
            const double w = wlo + (whi - wlo) * k / (d.points - 1);
            const auto s = sample_dispersion(spec, w, pol);
            t.add(w).add(wavelength_from_omega(w) / kNm).add(pol_label(pol)).add(s.K.real()).add(s.K.imag());
            t.add(s.K1).add(1.0 / s.K1).add(2.0 * s.K2).add(s.in_gap);
            if (d.exact) {
                const auto e = transfer_matrix_bloch(spec, w, pol);
                t.add(e.K.real()).add(e.K.imag()).add(e.in_gap);
            }
            t.end_row();
        }
        t.save(out / (std::string("dispersion_") + pol_label(pol) + ".tsv"));

        const std::string p = pol_label(pol);
        if (const auto g = band_gap(spec, pol)) {
            gaps.set("gap_" + p + "_omega_min", g->omega_min)
                .set("gap_" + p + "_omega_max", g->omega_max)
                .set("gap_" + p + "_lambda_center_nm", g->lambda_center_nm)
                .set("gap_" + p + "_lambda_edges_nm",
                     io::format_double(wavelength_from_omega(g->omega_max) / kNm) + " " +
                         io::format_double(wavelength_from_omega(g->omega_min) / kNm));
        } else {
            gaps.set("gap_" + p, "none");
        }
        if (const auto g = exact_band_gap(spec, pol, spec.gap_order)) {
            gaps.set("gap_" + p + "_exact_omega_min", g->omega_min).set("gap_" + p + "_exact_omega_max", g->omega_max);
        }
    }
    gaps.save(out / "dispersion_gaps.txt");
    log << "wrote dispersion tables to " << out.dir.string() << "\n";
    return kExitOk;
}

int cmd_fourier(const RunConfig& config, std::ostream& log) {
    const Output out(config, "fourier");
    const CrystalSpec spec = config.crystal_spec();
    io::Table t(out.header(), {"lambda_nm", "pol", "l", "re_eps", "im_eps", "abs_eps", "in_gap"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double lambda : config.fourier.wavelengths_nm) {
        for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
            const double w = omega_from_wavelength(lambda * kNm);
            const int mh = config.fourier.max_harmonic;
            try {
                const auto bf = bloch_fourier(spec, w, pol, mh, config.fourier.quadrature_points);
                for (int l = -mh; l <= mh; ++l)
                    t.add(lambda).add(pol_label(pol)).add(l).add(bf(l).real()).add(bf(l).imag()).add(std::abs(bf(l)))
                        .add(false)
                        .end_row();
            } catch (const InGapError&) {
                log << "warning: " << lambda << " nm (" << pol_label(pol) << ") lies in a band gap\n";
                for (int l = -mh; l <= mh; ++l)
                    t.add(lambda).add(pol_label(pol)).add(l).add(nan).add(nan).add(nan).add(true).end_row();
            }
        }
    }
    t.save(out / "fourier.tsv");
    log << "wrote " << (out / "fourier.tsv").string() << "\n";
    return kExitOk;
}

int cmd_jsa(const RunConfig& config, std::ostream& log) {
    const CrystalSpec spec = working_crystal(config, log);
    const Output out(config, "jsa");
    const PumpSpec pump = config.pump();
    const SpectralGrid grid = default_grid(spec, pump, config.grid_rule(), config.pols);
    const auto js = joint_spectrum(spec, pump, grid, config.harmonics(), config.phasematching(), config.pols,
                                   config.threads);
    for (const auto& w : js.warnings) log << "warning: " << w << "\n";

    io::KeyValue meta(out.header());
    meta.set("rows_signal", static_cast<long long>(js.omega_s.size()))
        .set("cols_idler", static_cast<long long>(js.omega_i.size()))
        .set("omega_s_min", js.omega_s.front())
        .set("omega_s_step", js.signal_step())
        .set("omega_i_min", js.omega_i.front())
        .set("omega_i_step", js.idler_step())
        .set("omega_o", pump.omega_degenerate())
        .set("pump_sigma_rad_per_s", pump.sigma)
        .set("period_nm", spec.period_nm)
        .set("alpha", spec.contrast)
        .set("theta_deg", rad_to_deg(spec.angle_rad))
        .set("format", config.output.format);
    for (std::size_t k = 0; k < js.warnings.size(); ++k) meta.set("warning_" + std::to_string(k), js.warnings[k]);
    meta.save(out / "jsa_meta.txt");

    if (config.output.format == "bin") {
        const io::BinaryAxes axes{js.omega_s.front(), js.signal_step(), js.omega_i.front(), js.idler_step()};
        io::write_binary_matrix(out / "jsa_amplitude.bin", js.amplitude, axes);
        io::write_binary_matrix(out / "jsa_pump.bin", js.pump, axes);
        io::write_binary_matrix(out / "jsa_phasematching.bin", js.phasematching, axes);
    } else {
        io::Table t(out.header(), {"omega_s", "omega_i", "re_f", "im_f", "jsi", "pump", "re_phi", "im_phi", "pmf"});
        for (std::size_t a = 0; a < js.omega_s.size(); ++a)
            for (std::size_t b = 0; b < js.omega_i.size(); ++b) {
                const auto r = static_cast<Eigen::Index>(a);
                const auto c = static_cast<Eigen::Index>(b);
                const auto f = js.amplitude(r, c);
                const auto phi = js.phasematching(r, c);
                t.add(js.omega_s[a]).add(js.omega_i[b]).add(f.real()).add(f.imag()).add(std::norm(f));
                t.add(js.pump(r, c)).add(phi.real()).add(phi.imag()).add(std::norm(phi)).end_row();
            }
        t.save(out / "jsa.tsv");
    }
    log << "wrote joint spectrum (" << js.omega_s.size() << "x" << js.omega_i.size() << ") to " << out.dir.string()
        << "\n";
    return kExitOk;
}

int cmd_design(const RunConfig& config, std::ostream& log) {
    const Output out(config, "design");
    const CrystalSpec base = config.crystal_spec();
    const auto sol = solve_design(base, config.box(), config.design_options());
    io::KeyValue kv(out.header());
    design_keys(kv, sol);
    if (sol.converged) taylor_keys(kv, sol.taylor);
    kv.save(out / "design.txt");

    if (std::isfinite(sol.period_nm) && sol.period_nm > 0.0) {
        const auto box = config.box();
        int index = 0;
        for (double offset : config.design.contour_offsets_nm) {
            const double period = sol.period_nm + offset;
            const auto scan = contour_scan(base, config.design.lambda_o_nm, period, box.alpha_min, box.alpha_max,
                                           config.design.contour_points, box.theta_min_rad, box.theta_max_rad,
                                           config.design.contour_points, config.pols, config.threads);
            std::string header = out.header();
            header += "# period_nm: " + io::format_double(period) + "\n";
            header += "# common_crossing_cells: " + std::to_string(common_crossing_cells(scan).size()) + "\n";
            io::Table t(header, {"alpha", "theta_deg", "dk0_rad_per_m", "tau_s1_fs", "tau_i1_fs", "in_gap"});
            for (Eigen::Index r = 0; r < scan.dk0.rows(); ++r)
                for (Eigen::Index c = 0; c < scan.dk0.cols(); ++c)
                    t.add(scan.alpha[static_cast<std::size_t>(r)])
                        .add(rad_to_deg(scan.theta_rad[static_cast<std::size_t>(c)]))
                        .add(scan.dk0(r, c))
                        .add(scan.tau_s1_fs(r, c))
                        .add(scan.tau_i1_fs(r, c))
                        .add(static_cast<bool>(scan.in_gap(r, c)))
                        .end_row();
            t.save(out / ("contour_" + std::to_string(index++) + ".tsv"));
        }
    }
    if (!sol.converged) {
        log << "design did not converge: " << sol.diagnostic << "\n";
        return kExitNoConvergence;
    }
    log << "design: alpha=" << sol.alpha << " theta=" << rad_to_deg(sol.theta_rad) << " deg period=" << sol.period_nm
        << " nm\n";
    return kExitOk;
}

int cmd_schmidt(const RunConfig& config, std::ostream& log) {
    const CrystalSpec spec = working_crystal(config, log);
    const Output out(config, "schmidt");
    const PumpSpec pump = config.pump();
    const SpectralGrid grid = default_grid(spec, pump, config.grid_rule(), config.pols);
    const auto js = joint_spectrum(spec, pump, grid, config.harmonics(), config.phasematching(), config.pols,
                                   config.threads);
    for (const auto& w : js.warnings) log << "warning: " << w << "\n";

    io::KeyValue kv(out.header());
    std::vector<std::pair<std::string, SchmidtResult>> results;
    if (config.schmidt.input != "modulus")
        results.emplace_back("amplitude", schmidt_decompose(js, SchmidtInput::amplitude, config.schmidt.cutoff));
    if (config.schmidt.input != "amplitude")
        results.emplace_back("modulus", schmidt_decompose(js, SchmidtInput::modulus, config.schmidt.cutoff));
    for (const auto& [name, r] : results) {
        kv.set("schmidt_number_" + name, r.schmidt_number)
            .set("modes_retained_" + name, r.modes_retained)
            .set("truncation_error_" + name, r.truncation_error);
    }
    const double wo = pump.omega_degenerate();
    const auto tc = taylor_coefficients(spec, wo, config.pols);
    taylor_keys(kv, tc);
    condition_keys(kv, check_conditions(tc, pump, config.thresholds()));
    if (config.schmidt.gaussian_level != "none") {
        const auto level = parse_gaussian_level(config.schmidt.gaussian_level);
        const auto g = gaussian_joint_spectrum(tc, spec, pump, grid, level, config.thresholds());
        kv.set("gaussian_level", to_string(level))
            .set("schmidt_number_gaussian", schmidt_decompose(g, SchmidtInput::amplitude, config.schmidt.cutoff).schmidt_number);
        for (std::size_t k = 0; k < g.warnings.size(); ++k) {
            kv.set("gaussian_warning_" + std::to_string(k), g.warnings[k]);
            log << "warning: " << g.warnings[k] << "\n";
        }
    }
    kv.save(out / "schmidt.txt");

    io::Table t(out.header(), {"source", "n", "lambda"});
    for (const auto& [name, r] : results)
        for (std::size_t n = 0; n < r.eigenvalues.size(); ++n)
            t.add(name).add(static_cast<long long>(n)).add(r.eigenvalues[n]).end_row();
    t.save(out / "schmidt_eigenvalues.tsv");
    log << "K = " << results.front().second.schmidt_number << " (" << results.front().first << ")\n";
    return kExitOk;
}

int cmd_tolerance(const RunConfig& config, std::ostream& log) {
    DesignSolution sol;
    const CrystalSpec spec = working_crystal(config, log, &sol);
    const Output out(config, "tolerance");
    if (!config.design.apply) {
        sol.crystal = spec;
        sol.alpha = spec.contrast;
        sol.theta_rad = spec.angle_rad;
        sol.period_nm = spec.period_nm;
        sol.lambda_o_nm = config.pump_center_nm * 2.0;
    }
    const PumpSpec pump = config.pump();
    io::KeyValue kv(out.header());
    for (const auto& name : config.tolerance.parameters) {
        const auto p = parse_sweep_parameter(name);
        ToleranceOptions o;
        o.points = config.tolerance.points;
        o.half_range = p == SweepParameter::period  ? config.tolerance.period_half_range_nm
                       : p == SweepParameter::alpha ? config.tolerance.alpha_half_range
                                                    : config.tolerance.theta_half_range_deg;
        o.grid_points = config.tolerance.grid_points;
        o.grid_rule = config.grid_rule();
        o.phasematching = config.phasematching();
        o.threads = config.threads;
        const auto curve = tolerance_sweep(sol, p, pump, o);
        io::Table t(out.header(), {"x", "K"});
        for (std::size_t k = 0; k < curve.x.size(); ++k) t.add(curve.x[k]).add(curve.K[k]).end_row();
        t.save(out / ("tolerance_" + name + ".tsv"));
        kv.set(name + "_K_min", curve.K_min)
            .set(name + "_x_min", curve.x_min)
            .set(name + "_x_low", curve.x_low)
            .set(name + "_x_high", curve.x_high)
            .set(name + "_width", curve.width)
            .set(name + "_open", curve.open());
        log << name << ": width " << curve.width << (curve.open() ? " (open-ended)" : "") << "\n";
    }
    kv.save(out / "tolerance.txt");
    return kExitOk;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Nonlinear photonic crystal SPDC design and joint-spectrum tool", kToolName};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    int threads = -1;
    std::string format;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads, 0 = all cores (overrides threads)")->check(CLI::NonNegativeNumber);
    app.add_option("--format", format, "JSA matrix format (overrides output.format)")
        ->check(CLI::IsMember({"tsv", "bin"}));
    app.add_option("--set", overrides, "override a configuration key, e.g. crystal.period_nm=276.7");

    std::map<std::string, int (*)(const RunConfig&, std::ostream&)> commands{
        {"dispersion", cmd_dispersion}, {"fourier", cmd_fourier}, {"jsa", cmd_jsa},
        {"design", cmd_design},         {"schmidt", cmd_schmidt}, {"tolerance", cmd_tolerance},
    };
    const std::map<std::string, std::string> help{
        {"dispersion", "Bloch dispersion tables per polarization (K, K', 1/K', K'') and gap edges"},
        {"fourier", "Fourier coefficients of the Bloch envelope at the configured wavelengths"},
        {"jsa", "pump envelope, phase-matching function and joint spectrum on the default grid"},
        {"design", "solve for (alpha, theta, period) and export contour scans"},
        {"schmidt", "Schmidt number, Taylor coefficients and factorability conditions"},
        {"tolerance", "Schmidt number versus period, contrast and angle"},
    };
    for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        json doc = json::object();
        fs::path base_dir;
        if (!config_path.empty()) {
            doc = read_json_file(config_path);
            base_dir = fs::path(config_path).parent_path();
        }
        for (const auto& o : overrides) apply_override(doc, o);
        if (!out_dir.empty()) apply_override(doc, "output.dir=" + json(out_dir).dump());
        if (threads >= 0) apply_override(doc, "threads=" + std::to_string(threads));
        if (!format.empty()) apply_override(doc, "output.format=" + json(format).dump());
        const RunConfig config = config_from_json(doc, base_dir);
        for (const auto* sub : app.get_subcommands()) return commands.at(sub->get_name())(config, std::cerr);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace nlpc

#include "nlpc/designer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlpc/bloch.hpp"
#include "nlpc/parallel.hpp"

namespace nlpc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool inside(const DesignBox& box, const std::array<double, 3>& x) {
    return x[0] >= box.alpha_min && x[0] <= box.alpha_max && x[1] >= box.theta_min_rad &&
           x[1] <= box.theta_max_rad && x[2] >= box.period_min_nm && x[2] <= box.period_max_nm;
}

std::optional<DesignResidual> residual_at(const CrystalSpec& base, const std::array<double, 3>& x,
                                          const DesignOptions& opts) {
    return design_residual(design_crystal(base, x[0], x[1], x[2]), opts.lambda_o_nm, opts.pols);
}

Eigen::Vector3d as_vector(const DesignResidual& r) { return {r.dk0_per_mm, r.tau_s1_fs, r.tau_i1_fs}; }

}  // namespace

void DesignBox::validate() const {
    if (!(alpha_min <= alpha_max) || !(theta_min_rad <= theta_max_rad) || !(period_min_nm <= period_max_nm))
        throw DomainError("design box bounds are inverted");
    if (alpha_min < 0.0 || alpha_max >= 2.0) throw DomainError("design box contrast outside [0, 2)");
    if (theta_min_rad < 0.0 || theta_max_rad > kPi / 2.0) throw DomainError("design box angle outside [0, 90] deg");
    if (!(period_min_nm > 0.0)) throw DomainError("design box period must be positive");
}

double DesignResidual::norm() const {
    return std::sqrt(dk0_per_mm * dk0_per_mm + tau_s1_fs * tau_s1_fs + tau_i1_fs * tau_i1_fs);
}

bool DesignResidual::converged() const {
    return std::abs(dk0_per_mm) * 1e3 < 1.0 && std::abs(tau_s1_fs) < 0.01 && std::abs(tau_i1_fs) < 0.01;
}

CrystalSpec design_crystal(const CrystalSpec& base, double alpha, double theta_rad, double period_nm) {
    CrystalSpec s = base;
    s.contrast = alpha;
    s.angle_rad = theta_rad;
    s.period_nm = period_nm;
    return s;
}

std::optional<DesignResidual> design_residual(const CrystalSpec& crystal, double lambda_o_nm,
                                              FieldPolarizations pols) {
    const double wo = omega_from_wavelength(lambda_o_nm * kNm);
    try {
        if (in_band_gap(crystal, wo, pols.signal) || in_band_gap(crystal, wo, pols.idler) ||
            in_band_gap(crystal, 2.0 * wo, pols.pump))
            return std::nullopt;
        const auto tc = taylor_coefficients(crystal, wo, pols);
        return DesignResidual{tc.dk0 * 1e-3, tc.tau_s[1], tc.tau_i[1]};
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

DesignSolution polish_design(const CrystalSpec& base, std::array<double, 3> x, const DesignBox& box,
                             const DesignOptions& opts) {
    box.validate();
    const std::array<double, 3> lo{box.alpha_min, box.theta_min_rad, box.period_min_nm};
    const std::array<double, 3> hi{box.alpha_max, box.theta_max_rad, box.period_max_nm};
    std::vector<int> free;
    for (int k = 0; k < 3; ++k) {
        if (hi[k] > lo[k]) free.push_back(k);
        else x[k] = lo[k];
    }

    DesignSolution sol;
    sol.lambda_o_nm = opts.lambda_o_nm;
    auto r = inside(box, x) ? residual_at(base, x, opts) : std::nullopt;
    if (!r) {
        sol.alpha = x[0];
        sol.theta_rad = x[1];
        sol.period_nm = x[2];
        sol.dk0 = sol.tau_s1_fs = sol.tau_i1_fs = kNaN;
        sol.crystal = design_crystal(base, x[0], x[1], x[2]);
        sol.diagnostic = "starting point is outside the box or in a band gap";
        return sol;
    }

    int it = 0;
    while (!r->converged() && it < opts.max_iterations && !free.empty()) {
        ++it;
        const Eigen::Vector3d f0 = as_vector(*r);
        Eigen::MatrixXd J(3, static_cast<Eigen::Index>(free.size()));
        bool jacobian_ok = true;
        for (std::size_t c = 0; c < free.size(); ++c) {
            const int k = free[c];
            auto xp = x;
            const double h = 1e-6 * std::max(std::abs(x[k]), 1e-3);
            xp[k] += h;
            auto rp = residual_at(base, xp, opts);
            if (!rp) {
                xp[k] = x[k] - h;
                rp = residual_at(base, xp, opts);
                if (!rp) {
                    jacobian_ok = false;
                    break;
                }
                J.col(static_cast<Eigen::Index>(c)) = (f0 - as_vector(*rp)) / h;
            } else {
                J.col(static_cast<Eigen::Index>(c)) = (as_vector(*rp) - f0) / h;
            }
        }
        if (!jacobian_ok) {
            sol.diagnostic = "Jacobian step entered a band gap";
            break;
        }
        const Eigen::VectorXd dx = J.colPivHouseholderQr().solve(-f0);
        if (!dx.allFinite()) {
            sol.diagnostic = "singular Jacobian";
            break;
        }
        double t = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40; ++half, t *= 0.5) {
            auto xn = x;
            for (std::size_t c = 0; c < free.size(); ++c) xn[free[c]] += t * dx(static_cast<Eigen::Index>(c));
            if (!inside(box, xn)) continue;
            const auto rn = residual_at(base, xn, opts);
            if (rn && rn->norm() < r->norm()) {
                x = xn;
                r = rn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            sol.diagnostic = "line search stalled";
            break;
        }
    }

    sol.alpha = x[0];
    sol.theta_rad = x[1];
    sol.period_nm = x[2];
    sol.dk0 = r->dk0_per_mm * 1e3;
    sol.tau_s1_fs = r->tau_s1_fs;
    sol.tau_i1_fs = r->tau_i1_fs;
    sol.converged = r->converged();
    sol.iterations = it;
    sol.crystal = design_crystal(base, x[0], x[1], x[2]);
    sol.taylor = taylor_coefficients(sol.crystal, omega_from_wavelength(opts.lambda_o_nm * kNm), opts.pols);
    if (sol.converged) sol.diagnostic.clear();
    else if (sol.diagnostic.empty()) sol.diagnostic = "iteration budget exhausted";
    return sol;
}

DesignSolution solve_design(const CrystalSpec& base, const DesignBox& box, const DesignOptions& opts) {
    box.validate();
    base.validate();
    auto count = [](int n, double lo, double hi) { return hi > lo ? std::max(n, 1) : 1; };
    const int na = count(opts.scan_alpha, box.alpha_min, box.alpha_max);
    const int nt = count(opts.scan_theta, box.theta_min_rad, box.theta_max_rad);
    const int np = count(opts.scan_period, box.period_min_nm, box.period_max_nm);

    // Node offsets inside each cell: centers, or seeded uniform jitter.
    std::vector<double> ja(static_cast<std::size_t>(na), 0.5), jt(static_cast<std::size_t>(nt), 0.5),
        jp(static_cast<std::size_t>(np), 0.5);
    if (opts.seed != 0) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto* v : {&ja, &jt, &jp})
            for (auto& e : *v) e = u(rng);
    }
    auto node = [](double lo, double hi, int n, int k, double off) { return lo + (hi - lo) * (k + off) / n; };

    const std::size_t slice = static_cast<std::size_t>(na) * static_cast<std::size_t>(nt);
    std::vector<double> score(slice * static_cast<std::size_t>(np), std::numeric_limits<double>::infinity());
    parallel_for(static_cast<std::size_t>(np), resolve_threads(opts.threads), [&](std::size_t p) {
        const double period = node(box.period_min_nm, box.period_max_nm, np, static_cast<int>(p), jp[p]);
        for (int a = 0; a < na; ++a) {
            const double alpha = node(box.alpha_min, box.alpha_max, na, a, ja[static_cast<std::size_t>(a)]);
            for (int t = 0; t < nt; ++t) {
                const double theta =
                    node(box.theta_min_rad, box.theta_max_rad, nt, t, jt[static_cast<std::size_t>(t)]);
                const auto r = residual_at(base, {alpha, theta, period}, opts);
                if (r) score[p * slice + static_cast<std::size_t>(a * nt + t)] = r->norm();
            }
        }
    });

    std::vector<std::size_t> order(score.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(opts.starts, 1)), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

    std::optional<DesignSolution> best;
    double best_norm = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < starts; ++s) {
        const std::size_t idx = order[s];
        if (!std::isfinite(score[idx])) break;
        const int p = static_cast<int>(idx / slice);
        const int a = static_cast<int>((idx % slice) / static_cast<std::size_t>(nt));
        const int t = static_cast<int>(idx % static_cast<std::size_t>(nt));
        const std::array<double, 3> x0{
            node(box.alpha_min, box.alpha_max, na, a, ja[static_cast<std::size_t>(a)]),
            node(box.theta_min_rad, box.theta_max_rad, nt, t, jt[static_cast<std::size_t>(t)]),
            node(box.period_min_nm, box.period_max_nm, np, p, jp[static_cast<std::size_t>(p)])};
        auto sol = polish_design(base, x0, box, opts);
        if (!std::isfinite(sol.dk0)) continue;
        const double n = DesignResidual{sol.dk0 * 1e-3, sol.tau_s1_fs, sol.tau_i1_fs}.norm();
        if (sol.converged) return sol;
        if (n < best_norm) {
            best_norm = n;
            best = std::move(sol);
        }
    }
    if (!best) {
        DesignSolution none;
        none.lambda_o_nm = opts.lambda_o_nm;
        none.dk0 = none.tau_s1_fs = none.tau_i1_fs = kNaN;
        none.crystal = base;
        none.diagnostic = "every scan node lies in a band gap or outside the material window";
        return none;
    }
    best->diagnostic = "no convergence: " + best->diagnostic;
    return *best;
}

ContourScan contour_scan(const CrystalSpec& base, double lambda_o_nm, double period_nm, double alpha_min,
                         double alpha_max, int alpha_points, double theta_min_rad, double theta_max_rad,
                         int theta_points, FieldPolarizations pols, int threads) {
    if (alpha_points < 2 || theta_points < 2) throw DomainError("contour grid needs at least 2 x 2 points");
    ContourScan s;
    s.period_nm = period_nm;
    for (int k = 0; k < alpha_points; ++k)
        s.alpha.push_back(alpha_min + (alpha_max - alpha_min) * k / (alpha_points - 1));
    for (int k = 0; k < theta_points; ++k)
        s.theta_rad.push_back(theta_min_rad + (theta_max_rad - theta_min_rad) * k / (theta_points - 1));
    s.dk0.resize(alpha_points, theta_points);
    s.tau_s1_fs.resize(alpha_points, theta_points);
    s.tau_i1_fs.resize(alpha_points, theta_points);
    s.in_gap.resize(alpha_points, theta_points);
    parallel_for(static_cast<std::size_t>(alpha_points), resolve_threads(threads), [&](std::size_t a) {
        const auto r = static_cast<Eigen::Index>(a);
        for (Eigen::Index c = 0; c < theta_points; ++c) {
            const auto res = design_residual(
                design_crystal(base, s.alpha[a], s.theta_rad[static_cast<std::size_t>(c)], period_nm), lambda_o_nm,
                pols);
            s.in_gap(r, c) = !res;
            s.dk0(r, c) = res ? res->dk0_per_mm * 1e3 : kNaN;
            s.tau_s1_fs(r, c) = res ? res->tau_s1_fs : kNaN;
            s.tau_i1_fs(r, c) = res ? res->tau_i1_fs : kNaN;
        }
    });
    return s;
}

namespace {

bool changes_sign(const Eigen::MatrixXd& f, Eigen::Index r, Eigen::Index c) {
    const double v[4] = {f(r, c), f(r + 1, c), f(r, c + 1), f(r + 1, c + 1)};
    double lo = v[0], hi = v[0];
    for (double e : v) {
        if (!std::isfinite(e)) return false;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return lo <= 0.0 && hi >= 0.0 && lo < hi;
}

const Eigen::MatrixXd& field(const ContourScan& s, int k) {
    return k == 0 ? s.dk0 : (k == 1 ? s.tau_s1_fs : s.tau_i1_fs);
}

}  // namespace

std::vector<std::array<int, 2>> pair_crossing_cells(const ContourScan& scan, int a, int b) {
    std::vector<std::array<int, 2>> out;
    const auto& fa = field(scan, a);
    const auto& fb = field(scan, b);
    for (Eigen::Index r = 0; r + 1 < fa.rows(); ++r)
        for (Eigen::Index c = 0; c + 1 < fa.cols(); ++c)
            if (changes_sign(fa, r, c) && changes_sign(fb, r, c))
                out.push_back({static_cast<int>(r), static_cast<int>(c)});
    return out;
}

std::vector<std::array<int, 2>> common_crossing_cells(const ContourScan& scan) {
    std::vector<std::array<int, 2>> out;
    for (const auto& cell : pair_crossing_cells(scan, 0, 1))
        if (changes_sign(scan.tau_i1_fs, cell[0], cell[1])) out.push_back(cell);
    return out;
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::period: return "period";
        case SweepParameter::alpha: return "alpha";
        case SweepParameter::theta: return "theta";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
    if (text == "period" || text == "Lambda") return SweepParameter::period;
    if (text == "alpha") return SweepParameter::alpha;
    if (text == "theta") return SweepParameter::theta;
    throw ConfigError("unknown sweep parameter '" + std::string(text) + "' (expected period, alpha or theta)");
}

double default_half_range(SweepParameter p) {
    switch (p) {
        case SweepParameter::period: return 2.5;
        case SweepParameter::alpha: return 0.02;
        case SweepParameter::theta: return 3.0;
    }
    return 0.0;
}

ToleranceCurve tolerance_from_samples(SweepParameter parameter, std::vector<double> x, std::vector<double> K) {
    ToleranceCurve c;
    c.parameter = parameter;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(K[k])) continue;
        c.x.push_back(x[k]);
        c.K.push_back(K[k]);
    }
    if (c.x.size() < 2) throw DomainError("tolerance sweep has fewer than two valid samples");
    const auto imin = static_cast<std::size_t>(std::min_element(c.K.begin(), c.K.end()) - c.K.begin());
    c.K_min = c.K[imin];
    c.x_min = c.x[imin];
    const double level = std::sqrt(2.0) * c.K_min;
    auto cross = [&](std::size_t a, std::size_t b) {
        return c.x[a] + (level - c.K[a]) * (c.x[b] - c.x[a]) / (c.K[b] - c.K[a]);
    };
    c.open_low = true;
    c.x_low = c.x.front();
    for (std::size_t k = imin; k-- > 0;) {
        if (c.K[k] >= level) {
            c.x_low = cross(k + 1, k);
            c.open_low = false;
            break;
        }
    }
    c.open_high = true;
    c.x_high = c.x.back();
    for (std::size_t k = imin + 1; k < c.x.size(); ++k) {
        if (c.K[k] >= level) {
            c.x_high = cross(k - 1, k);
            c.open_high = false;
            break;
        }
    }
    c.width = c.x_high - c.x_low;
    return c;
}

ToleranceCurve tolerance_sweep(const DesignSolution& solution, SweepParameter parameter, const PumpSpec& pump,
                               const ToleranceOptions& opts) {
    if (opts.points < 3) throw DomainError("tolerance sweep needs at least 3 points");
    const double half = opts.half_range > 0.0 ? opts.half_range : default_half_range(parameter);
    const double center = parameter == SweepParameter::period  ? solution.period_nm
                          : parameter == SweepParameter::alpha ? solution.alpha
                                                               : rad_to_deg(solution.theta_rad);
    GridRule rule = opts.grid_rule;
    rule.points = opts.grid_points;
    const SpectralGrid grid = default_grid(solution.crystal, pump, rule);

    std::vector<double> x(static_cast<std::size_t>(opts.points));
    std::vector<double> K(x.size(), kNaN);
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = center - half + 2.0 * half * static_cast<double>(k) / (opts.points - 1);

    const double wo = pump.omega_degenerate();
    parallel_for(x.size(), resolve_threads(opts.threads), [&](std::size_t k) {
        CrystalSpec s = solution.crystal;
        switch (parameter) {
            case SweepParameter::period: s.period_nm = x[k]; break;
            case SweepParameter::alpha: s.contrast = x[k]; break;
            case SweepParameter::theta: s.angle_rad = deg_to_rad(x[k]); break;
        }
        if (s.contrast < 0.0) return;
        const FieldPolarizations pols;
        if (in_band_gap(s, wo, pols.signal) || in_band_gap(s, wo, pols.idler) || in_band_gap(s, 2.0 * wo, pols.pump))
            return;
        try {
            const auto js = joint_spectrum(s, pump, grid, {Harmonics{}}, opts.phasematching, pols, 1);
            K[k] = schmidt_decompose(js).schmidt_number;
        } catch (const DomainError&) {
        }
    });
    return tolerance_from_samples(parameter, x, K);
}

}  // namespace nlpc

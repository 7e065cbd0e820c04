#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nlpc/factorability.hpp"
#include "nlpc/schmidt.hpp"

namespace nlpc {

/// Search box over (alpha, theta, Lambda). A coordinate with min == max is held fixed.
struct DesignBox {
    double alpha_min = 0.005;
    double alpha_max = 0.06;
    double theta_min_rad = deg_to_rad(36.0);
    double theta_max_rad = deg_to_rad(46.0);
    double period_min_nm = 265.0;
    double period_max_nm = 285.0;

    void validate() const;
};

struct DesignOptions {
    double lambda_o_nm = 850.0;
    int scan_alpha = 64;
    int scan_theta = 64;
    int scan_period = 32;
    /// Number of best coarse-scan points handed to the Newton polish.
    int starts = 8;
    int max_iterations = 60;
    /// Non-zero seeds jitter the coarse-scan nodes inside their cells.
    std::uint64_t seed = 0;
    int threads = 1;
    FieldPolarizations pols{};
};

/// Residuals of the three design conditions, in solver units:
/// Delta K^(0) in 1/mm, tau_s^(1) and tau_i^(1) in fs.
struct DesignResidual {
    double dk0_per_mm = 0.0;
    double tau_s1_fs = 0.0;
    double tau_i1_fs = 0.0;

    double norm() const;
    bool converged() const;  // |dk0| < 1 rad/m, |tau| < 0.01 fs
};

struct DesignSolution {
    double alpha = 0.0;
    double theta_rad = 0.0;
    double period_nm = 0.0;
    double dk0 = 0.0;  // rad/m
    double tau_s1_fs = 0.0;
    double tau_i1_fs = 0.0;
    bool converged = false;
    int iterations = 0;
    TaylorCoefficients taylor;
    CrystalSpec crystal;
    double lambda_o_nm = 850.0;
    std::string diagnostic;
};

/// Copy of `base` with the design coordinates replaced.
CrystalSpec design_crystal(const CrystalSpec& base, double alpha, double theta_rad, double period_nm);

/// nullopt when omega_o or 2 omega_o lies in a gap or outside the material window.
std::optional<DesignResidual> design_residual(const CrystalSpec& crystal, double lambda_o_nm,
                                              FieldPolarizations pols = {});

/// Damped Gauss-Newton from a starting point, forward-difference Jacobian with
/// relative step 1e-6. Iterates outside the box or in a gap are rejected.
DesignSolution polish_design(const CrystalSpec& base, std::array<double, 3> start, const DesignBox& box,
                             const DesignOptions& opts = {});

/// Coarse grid scan over the box followed by Newton polish of the best nodes.
/// Returns the best solution found; `converged` reports whether the residual
/// thresholds were met.
DesignSolution solve_design(const CrystalSpec& base, const DesignBox& box = {}, const DesignOptions& opts = {});

/// Signed residual fields over an (alpha, theta) grid at fixed Lambda.
/// Rows follow alpha, columns theta. In-gap nodes hold NaN and are flagged.
struct ContourScan {
    double period_nm = 0.0;
    std::vector<double> alpha;
    std::vector<double> theta_rad;
    Eigen::MatrixXd dk0;  // rad/m
    Eigen::MatrixXd tau_s1_fs;
    Eigen::MatrixXd tau_i1_fs;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> in_gap;
};

ContourScan contour_scan(const CrystalSpec& base, double lambda_o_nm, double period_nm, double alpha_min,
                         double alpha_max, int alpha_points, double theta_min_rad, double theta_max_rad,
                         int theta_points, FieldPolarizations pols = {}, int threads = 1);

/// Grid cells (row, col of the lower corner) in which all three residual
/// fields change sign, i.e. the three zero contours pass through one cell.
std::vector<std::array<int, 2>> common_crossing_cells(const ContourScan& scan);

/// Cells in which the named pair of fields both change sign.
/// Fields: 0 = dk0, 1 = tau_s1, 2 = tau_i1.
std::vector<std::array<int, 2>> pair_crossing_cells(const ContourScan& scan, int a, int b);

enum class SweepParameter { period, alpha, theta };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

struct ToleranceOptions {
    int points = 21;
    double half_range = 0.0;  // 0 selects the parameter default
    int grid_points = 256;
    GridRule grid_rule{};
    PhaseMatchingOptions phasematching{};
    int threads = 1;
};

/// Default half ranges: 2.5 nm, 0.02, 3 degrees.
double default_half_range(SweepParameter p);

struct ToleranceCurve {
    SweepParameter parameter = SweepParameter::period;
    std::vector<double> x;  // nm, dimensionless, or degrees
    std::vector<double> K;
    double K_min = 0.0;
    double x_min = 0.0;
    double x_low = 0.0;   // sqrt(2) K_min crossings
    double x_high = 0.0;
    bool open_low = false;
    bool open_high = false;
    double width = 0.0;   // x_high - x_low; lower bound when open

    bool open() const { return open_low || open_high; }
};

/// Varies one coordinate about the solution with the others fixed, computing
/// the full joint spectrum and Schmidt number on a grid fixed by the nominal
/// design. Samples whose degenerate point falls in a gap are skipped.
ToleranceCurve tolerance_sweep(const DesignSolution& solution, SweepParameter parameter, const PumpSpec& pump,
                               const ToleranceOptions& opts = {});

/// Tolerance extraction from sampled K(x).
ToleranceCurve tolerance_from_samples(SweepParameter parameter, std::vector<double> x, std::vector<double> K);

}  // namespace nlpc

#include <cmath>

#include "doctest.h"
#include "nlpc/bloch.hpp"
#include "nlpc/designer.hpp"

using namespace nlpc;

namespace {

const DesignSolution& designed() {
    static const DesignSolution sol = solve_design(CrystalSpec{}, DesignBox{}, DesignOptions{});
    return sol;
}

}  // namespace

TEST_CASE("design search at 850 nm converges near the reported design") {
    const auto& sol = designed();
    REQUIRE(sol.converged);
    CHECK(std::abs(sol.dk0) < 1.0);
    CHECK(std::abs(sol.tau_s1_fs) < 0.01);
    CHECK(std::abs(sol.tau_i1_fs) < 0.01);
    CHECK(std::abs(sol.alpha - 0.028) < 0.006);
    CHECK(std::abs(rad_to_deg(sol.theta_rad) - 41.1) < 1.5);
    CHECK(std::abs(sol.period_nm - 274.9) < 5.0);
    const auto r = design_residual(sol.crystal, 850.0);
    REQUIRE(r);
    CHECK(r->converged());
    CHECK(std::abs(sol.taylor.tau_s[1]) < 0.01);
}

TEST_CASE("literal contrast convention finds the same crystal with doubled alpha") {
    CrystalSpec base;
    base.contrast_scale = 1.0;
    DesignBox box;
    box.alpha_min = 0.01;
    box.alpha_max = 0.12;
    const auto lit = solve_design(base, box, {});
    REQUIRE(lit.converged);
    CHECK(lit.alpha == doctest::Approx(2 * designed().alpha).epsilon(1e-6));
    CHECK(lit.period_nm == doctest::Approx(designed().period_nm).epsilon(1e-7));
    CHECK(lit.theta_rad == doctest::Approx(designed().theta_rad).epsilon(1e-7));
}

TEST_CASE("random scan seeds converge to the same point") {
    const auto& ref = designed();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        DesignOptions o;
        o.seed = seed;
        o.scan_alpha = o.scan_theta = 24;
        o.scan_period = 12;
        const auto sol = solve_design(CrystalSpec{}, DesignBox{}, o);
        REQUIRE(sol.converged);
        CHECK(sol.alpha == doctest::Approx(ref.alpha).epsilon(1e-3));
        CHECK(sol.theta_rad == doctest::Approx(ref.theta_rad).epsilon(1e-3));
        CHECK(sol.period_nm == doctest::Approx(ref.period_nm).epsilon(1e-3));
    }
}

TEST_CASE("polishing from a nearby start") {
    const auto& ref = designed();
    const auto sol = polish_design(CrystalSpec{}, {0.03, deg_to_rad(41.3), 276.0}, DesignBox{}, {});
    REQUIRE(sol.converged);
    CHECK(sol.period_nm == doctest::Approx(ref.period_nm).epsilon(1e-5));
}

TEST_CASE("bulk crystal has no solution") {
    DesignBox box;
    box.alpha_min = box.alpha_max = 0.0;
    DesignOptions o;
    o.scan_theta = 32;
    o.scan_period = 16;
    const auto sol = solve_design(CrystalSpec{}, box, o);
    CHECK_FALSE(sol.converged);
    CHECK(sol.alpha == 0.0);
    CHECK(std::abs(sol.tau_s1_fs) + std::abs(sol.tau_i1_fs) > 100.0);
    CHECK(sol.diagnostic.find("no convergence") != std::string::npos);
}

TEST_CASE("contour scan") {
    const auto& ref = designed();
    const double amin = ref.alpha - 0.008, amax = ref.alpha + 0.008;
    const double tmin = ref.theta_rad - deg_to_rad(0.6), tmax = ref.theta_rad + deg_to_rad(0.6);
    SUBCASE("the three zero contours meet at the solved period") {
        const auto scan = contour_scan(CrystalSpec{}, 850, ref.period_nm, amin, amax, 65, tmin, tmax, 65, {}, 2);
        const auto cells = common_crossing_cells(scan);
        REQUIRE_FALSE(cells.empty());
        bool hit = false;
        for (const auto& c : cells) {
            const bool a = scan.alpha[c[0]] <= ref.alpha + 1e-12 && ref.alpha <= scan.alpha[c[0] + 1] + 1e-12;
            const bool t = scan.theta_rad[c[1]] <= ref.theta_rad + 1e-12 && ref.theta_rad <= scan.theta_rad[c[1] + 1] + 1e-12;
            hit = hit || (a && t);
        }
        CHECK(hit);
    }
    SUBCASE("shifting the period separates the intersections") {
        const auto scan = contour_scan(CrystalSpec{}, 850, ref.period_nm + 3, amin, amax, 65, tmin, tmax, 65, {}, 2);
        CHECK(common_crossing_cells(scan).empty());
    }
    SUBCASE("zero contrast row equals the bulk mismatch") {
        const auto scan = contour_scan(CrystalSpec{}, 850, ref.period_nm, 0.0, 0.01, 3, tmin, tmax, 3);
        CrystalSpec bulk = design_crystal(CrystalSpec{}, 0.0, scan.theta_rad[1], ref.period_nm);
        const double wo = omega_from_wavelength(850 * kNm);
        const double dk = mean_wavenumber(bulk, Polarization::extraordinary, wo) +
                          mean_wavenumber(bulk, Polarization::ordinary, wo) -
                          mean_wavenumber(bulk, Polarization::extraordinary, 2 * wo);
        CHECK(scan.dk0(0, 1) == doctest::Approx(dk).epsilon(1e-12));
    }
}

TEST_CASE("tolerance extraction from samples") {
    std::vector<double> x, K;
    for (int k = -10; k <= 10; ++k) {
        x.push_back(k * 0.1);
        K.push_back(1.0 + 4.0 * (k * 0.1) * (k * 0.1));
    }
    const auto c = tolerance_from_samples(SweepParameter::alpha, x, K);
    CHECK(c.K_min == 1.0);
    CHECK(c.x_min == doctest::Approx(0.0).scale(1));
    // 1 + 4 x^2 = sqrt(2) at |x| = 0.3218; linear interpolation between grid nodes.
    CHECK(c.width == doctest::Approx(2 * 0.3218).epsilon(0.02));
    CHECK_FALSE(c.open());
    std::vector<double> flat(x.size(), 1.0);
    flat[3] = std::nan("");
    const auto open = tolerance_from_samples(SweepParameter::alpha, x, flat);
    CHECK(open.open_low);
    CHECK(open.open_high);
    CHECK(open.x.size() == x.size() - 1);
}

TEST_CASE("period tolerance sweep has its minimum at the design") {
    const auto& ref = designed();
    ToleranceOptions o;
    o.points = 11;
    o.half_range = 1.5;
    o.grid_points = 96;
    o.threads = 2;
    const auto c = tolerance_sweep(ref, SweepParameter::period, make_pump(425, 10), o);
    CHECK(std::abs(c.x_min - ref.period_nm) <= 0.3 + 1e-9);
    for (double k : c.K) CHECK(k >= 1.0);
    CHECK_FALSE(c.open());
}

TEST_CASE("sweep parameter names") {
    CHECK(parse_sweep_parameter("period") == SweepParameter::period);
    CHECK(parse_sweep_parameter(to_string(SweepParameter::theta)) == SweepParameter::theta);
    CHECK_THROWS_AS(parse_sweep_parameter("length"), ConfigError);
}

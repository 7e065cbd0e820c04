#include <cmath>

#include "doctest.h"
#include "nlpc/bloch.hpp"
#include "nlpc/transfer_matrix.hpp"
#include "oracles.hpp"

using namespace nlpc;

namespace {

CrystalSpec fig2(double scale = 2.0) {
    CrystalSpec s;
    s.period_nm = 279.1;
    s.contrast = 0.027;
    s.angle_rad = deg_to_rad(41.8);
    s.contrast_scale = scale;
    return s;
}

double omega_nm(double nm) { return omega_from_wavelength(nm * kNm); }

}  // namespace

TEST_CASE("coupling coefficient") {
    auto s = fig2(1.0);
    const double w = omega_nm(850);
    const double kbar = mean_wavenumber(s, Polarization::ordinary, w);
    CHECK(std::abs(coupling_coefficient(s, w, Polarization::ordinary, 1)) ==
          doctest::Approx(0.027 * kbar / (2 * kPi)).epsilon(1e-14));
    CHECK(coupling_coefficient(s, w, Polarization::ordinary, 1).real() == 0.0);
    CHECK(std::abs(coupling_coefficient(s, w, Polarization::ordinary, 2)) == 0.0);
    CHECK(std::abs(coupling_coefficient(s, w, Polarization::ordinary, 3)) ==
          doctest::Approx(0.027 * kbar / (6 * kPi)).epsilon(1e-14));
    s.contrast = 0.0;
    CHECK(std::abs(coupling_coefficient(s, w, Polarization::ordinary, 1)) == 0.0);
}

TEST_CASE("Bragg mismatch") {
    auto s = fig2(1.0);
    const double w = omega_nm(900);
    CHECK(bragg_mismatch(s, w, Polarization::ordinary, 1) ==
          doctest::Approx(2 * mean_wavenumber(s, Polarization::ordinary, w) - 2 * kPi / s.period_m()));
    // Root for Lambda = 279.1 nm, ordinary, literal contrast.
    const auto root = solve_mean_wavenumber(s, Polarization::ordinary, kPi / s.period_m());
    REQUIRE(root);
    CHECK(bragg_mismatch(s, *root, Polarization::ordinary, 1) == doctest::Approx(0.0).scale(1e7).epsilon(1e-9));
    CHECK(wavelength_from_omega(*root) / kNm == doctest::Approx(919.0).epsilon(5e-4));
    s.period_nm = 1e12;
    CHECK(bragg_mismatch(s, w, Polarization::ordinary, 1) ==
          doctest::Approx(2 * mean_wavenumber(s, Polarization::ordinary, w)).epsilon(1e-9));
}

TEST_CASE("unperturbed limit gives the mean wavenumber") {
    auto s = fig2();
    s.contrast = 0.0;
    for (double nm : {700.0, 880.0, 913.0, 1100.0}) {
        const double w = omega_nm(nm);
        for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
            CHECK(bloch_wavenumber(s, w, pol).real() == mean_wavenumber(s, pol, w));
            CHECK(bloch_wavenumber(s, w, pol).imag() == 0.0);
            const auto d = dispersion_derivatives(s, w, pol, 1);
            const auto k = mean_wavenumber(s, pol, DispersionJet::variable(w));
            CHECK(d[1] == doctest::Approx(k[1]).epsilon(1e-14));
        }
        CHECK_FALSE(band_gap(s, Polarization::ordinary));
    }
}

TEST_CASE("gap edges and branches") {
    const auto s = fig2();
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
        const auto gap = band_gap(s, pol);
        REQUIRE(gap);
        CHECK(gap->omega_min < gap->omega_max);
        CHECK(bloch_wavenumber(s, gap->omega_min, pol).real() == doctest::Approx(kPi / s.period_m()).epsilon(1e-6));
        CHECK(bloch_wavenumber(s, gap->omega_max, pol).real() == doctest::Approx(kPi / s.period_m()).epsilon(1e-6));
        const double mid = 0.5 * (gap->omega_min + gap->omega_max);
        CHECK(in_band_gap(s, mid, pol));
        const auto K = bloch_wavenumber(s, mid, pol);
        CHECK(K.imag() > 0.0);
        CHECK(K.real() == doctest::Approx(kPi / s.period_m()).epsilon(1e-12));
        CHECK_THROWS_AS(bloch_jet(s, mid, pol, 1), InGapError);
        CHECK_THROWS_AS(propagating_wavenumber(s, mid, pol, "signal"), InGapError);
        const auto sample = sample_dispersion(s, mid, pol);
        CHECK(sample.in_gap);
        CHECK(std::isnan(sample.K1));
    }
}

TEST_CASE("gap centers of the reference crystal") {
    // Paper reports 904.9 nm (o) and 876.3 nm (e); 3% band.
    const auto s = fig2();
    const auto go = band_gap(s, Polarization::ordinary);
    const auto ge = band_gap(s, Polarization::extraordinary);
    REQUIRE(go);
    REQUIRE(ge);
    CHECK(std::abs(go->lambda_center_nm / 904.9 - 1) < 0.03);
    CHECK(std::abs(ge->lambda_center_nm / 876.3 - 1) < 0.03);
    CHECK(go->lambda_center_nm > ge->lambda_center_nm);
}

TEST_CASE("K is monotone on each side of the gap and group velocity collapses at the edges") {
    const auto s = fig2();
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
        const auto gap = *band_gap(s, pol);
        const double width = gap.width();
        double prev = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double w = gap.omega_min - 20 * width + 20 * width * k / 400.0 - 1e-6 * width;
            const double K = bloch_wavenumber(s, w, pol).real();
            CHECK(K > prev);
            prev = K;
        }
        double prev_vg = 1e300;
        for (double frac : {1.0, 0.3, 0.1, 0.03, 0.01, 0.001}) {
            const double vg = 1.0 / dispersion_derivatives(s, gap.omega_min - frac * width, pol, 1)[1];
            CHECK(vg < prev_vg);
            prev_vg = vg;
        }
        CHECK(prev_vg < 0.05 * kSpeedOfLight);
        // GVD near the edge far exceeds that of a dense flint glass.
        const double gvd = 2 * dispersion_derivatives(s, gap.omega_min - 0.01 * width, pol, 1)[2];
        CHECK(std::abs(gvd) > 10 * sf10_gvd(850 * kNm));
    }
}

TEST_CASE("Taylor jets match Richardson finite differences") {
    const auto s = fig2();
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
        const auto gap = *band_gap(s, pol);
        for (double w : {gap.omega_min - 2 * gap.width(), gap.omega_max + 3 * gap.width(), omega_nm(425),
                         omega_nm(1200)}) {
            const auto jet = dispersion_derivatives(s, w, pol, 1);
            const auto fd = oracle::taylor_fd([&](double x) { return bloch_wavenumber(s, x, pol).real(); }, w,
                                              std::min(0.2 * gap.width(), 1e-3 * w));
            CHECK(jet[1] == doctest::Approx(fd[0]).epsilon(1e-6));
            CHECK(jet[2] == doctest::Approx(fd[1]).epsilon(1e-6));
            CHECK(jet[3] == doctest::Approx(fd[2]).epsilon(1e-3));
        }
    }
}

TEST_CASE("coupled-mode and transfer-matrix dispersion agree away from the gap") {
    const auto s = fig2();
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
        const auto gap = *band_gap(s, pol);
        const auto exact = exact_band_gap(s, pol, 1);
        REQUIRE(exact);
        CHECK(std::abs(exact->omega_min / gap.omega_min - 1) < 5e-3);
        CHECK(std::abs(exact->omega_max / gap.omega_max - 1) < 5e-3);
        for (double d : {2.0, 3.0, 5.0, -2.0, -4.0}) {
            const double w = d > 0 ? gap.omega_max + d * gap.width() : gap.omega_min + d * gap.width();
            const auto tm = transfer_matrix_bloch(s, w, pol);
            CHECK_FALSE(tm.in_gap);
            CHECK(std::abs(tm.K.real() - bloch_wavenumber(s, w, pol).real()) * s.period_m() < 1e-3);
        }
    }
}

TEST_CASE("half-trace is cos(K Lambda) and the gap is where it exceeds one") {
    const auto s = fig2();
    const auto gap = *exact_band_gap(s, Polarization::extraordinary, 1);
    const double mid = 0.5 * (gap.omega_min + gap.omega_max);
    CHECK(std::abs(half_trace(s, mid, Polarization::extraordinary)) > 1.0);
    const double w = gap.omega_min - 3 * gap.width();
    const auto tm = transfer_matrix_bloch(s, w, Polarization::extraordinary);
    CHECK(std::cos(tm.K.real() * s.period_m()) == doctest::Approx(tm.half_trace).epsilon(1e-10));
    CHECK(transfer_matrix_bloch(s, mid, Polarization::extraordinary).in_gap);
    CHECK(transfer_matrix_bloch(s, mid, Polarization::extraordinary).K.imag() > 0.0);
}

TEST_CASE("second-order gap closes for an optical-thickness duty cycle of one half") {
    auto s = fig2();
    const auto li = layer_indices(s, 440 * kNm, Polarization::ordinary);
    // n1 a = n2 b with a + b = Lambda.
    s.duty_cycle = li.zone_b / (li.zone_a + li.zone_b);
    const auto g1 = exact_band_gap(s, Polarization::ordinary, 1);
    REQUIRE(g1);
    const auto g2 = exact_band_gap(s, Polarization::ordinary, 2);
    const double w2 = g2 ? g2->width() : 0.0;
    CHECK(w2 < 1e-4 * g1->width());
}

TEST_CASE("geometric duty cycle of one half leaves a first-order-in-contrast second gap") {
    const auto s = fig2();
    const auto g1 = exact_band_gap(s, Polarization::ordinary, 1);
    const auto g2 = exact_band_gap(s, Polarization::ordinary, 2);
    REQUIRE(g1);
    REQUIRE(g2);
    const double ratio = g2->width() / g1->width();
    CHECK(ratio == doctest::Approx(kPi * s.layer_contrast() / 4).epsilon(0.05));
}

TEST_CASE("Bloch Fourier coefficients") {
    auto s = fig2();
    SUBCASE("plane wave without modulation") {
        s.contrast = 0.0;
        const auto bf = bloch_fourier(s, omega_nm(850), Polarization::ordinary);
        CHECK(std::abs(bf(0) - 1.0) < 1e-12);
        for (int l : {-3, -2, -1, 1, 2, 3}) CHECK(std::abs(bf(l)) < 1e-12);
    }
    SUBCASE("pump at 425 nm is nearly a plane wave") {
        const auto bf = bloch_fourier(s, omega_nm(425), Polarization::extraordinary);
        CHECK(std::abs(bf(0)) == doctest::Approx(1.0));
        for (int l : {-3, -2, -1, 1, 2, 3}) CHECK(std::abs(bf(l)) < 0.05);
    }
    SUBCASE("850 nm has a small reflected component") {
        for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
            const auto bf = bloch_fourier(s, omega_nm(850), pol);
            CHECK(std::abs(bf(0)) == doctest::Approx(1.0));
            const double side = std::max(std::abs(bf(-1)), std::abs(bf(1)));
            CHECK(side > 0.01);
            CHECK(side < 0.5);
            for (int l : {-3, -2, 2, 3}) CHECK(std::abs(bf(l)) < 0.1 * side);
        }
    }
    SUBCASE("rejects coarse quadrature and in-gap frequencies") {
        CHECK_THROWS_AS(bloch_fourier(s, omega_nm(850), Polarization::ordinary, 3, 512), DomainError);
        const auto gap = *exact_band_gap(s, Polarization::ordinary, 1);
        CHECK_THROWS_AS(bloch_fourier(s, 0.5 * (gap.omega_min + gap.omega_max), Polarization::ordinary), InGapError);
    }
}

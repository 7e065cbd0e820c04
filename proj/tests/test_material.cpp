#include <cmath>

#include "doctest.h"
#include "nlpc/material.hpp"
#include "oracles.hpp"

using namespace nlpc;

namespace {

CrystalSpec literal_spec(double alpha) {
    CrystalSpec s;
    s.contrast = alpha;
    s.contrast_scale = 1.0;
    return s;
}

}  // namespace

TEST_CASE("bbo ordinary index at 850 nm") {
    const auto m = bbo_kato1986();
    CHECK(index_ordinary(m, 850 * kNm) == doctest::Approx(1.6591).epsilon(1e-4));
    // Direct evaluation of the Sellmeier form.
    const double l2 = 0.425 * 0.425;
    const double n2 = 2.7359 + 0.01878 / (l2 - 0.01822) - 0.01354 * l2;
    CHECK(index_ordinary(m, 425 * kNm) == doctest::Approx(std::sqrt(n2)).epsilon(1e-14));
}

TEST_CASE("index outside the validity window is a domain error") {
    const auto m = bbo_kato1986();
    CHECK_THROWS_AS(index_ordinary(m, 100 * kNm), DomainError);
    CHECK_THROWS_AS(index_extraordinary(m, 2000 * kNm, 0.3), DomainError);
}

TEST_CASE("angle-tuned extraordinary index") {
    const auto m = bbo_kato1986();
    const double l = 850 * kNm;
    CHECK(index_extraordinary(m, l, 0.0) == doctest::Approx(index_ordinary(m, l)).epsilon(1e-15));
    CHECK(index_extraordinary(m, l, kPi / 2) == doctest::Approx(index_principal_extraordinary(m, l)).epsilon(1e-15));
    CHECK(index_extraordinary(m, l, deg_to_rad(41.8)) == doctest::Approx(1.6046).epsilon(1e-4));
    for (double deg = 0; deg <= 90; deg += 7.5) {
        const double n = index_extraordinary(m, l, deg_to_rad(deg));
        CHECK(n <= index_ordinary(m, l) + 1e-15);
        CHECK(n >= index_principal_extraordinary(m, l) - 1e-15);
    }
}

TEST_CASE("layer indices reproduce the permittivity contrast") {
    for (double alpha : {0.0, 0.027, 0.028, -0.05, 0.5}) {
        for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
            const auto li = layer_indices(literal_spec(alpha), 850 * kNm, pol);
            const double back = (li.zone_a * li.zone_a - li.zone_b * li.zone_b) / (li.mean * li.mean);
            CHECK(back == doctest::Approx(alpha).epsilon(1e-12).scale(1e-12));
            CHECK(li.mean * li.mean ==
                  doctest::Approx((li.zone_a * li.zone_a + li.zone_b * li.zone_b) / 2).epsilon(1e-14));
        }
    }
    const auto flat = layer_indices(literal_spec(0.0), 850 * kNm, Polarization::ordinary);
    CHECK(flat.zone_b == flat.zone_a);
    CHECK(flat.mean == doctest::Approx(flat.zone_a).epsilon(1e-15));
}

TEST_CASE("positive contrast lowers zone B") {
    const auto li = layer_indices(literal_spec(0.028), 850 * kNm, Polarization::ordinary);
    CHECK(li.zone_b < li.zone_a);
    const double n1 = index_ordinary(bbo_kato1986(), 850 * kNm);
    CHECK(li.zone_b == doctest::Approx(n1 * std::sqrt(1.972 / 2.028)).epsilon(1e-14));
}

TEST_CASE("contrast scale multiplies the layer contrast") {
    CrystalSpec s = literal_spec(0.027);
    s.contrast_scale = 2.0;
    const auto li = layer_indices(s, 850 * kNm, Polarization::extraordinary);
    CHECK((li.zone_a * li.zone_a - li.zone_b * li.zone_b) / (li.mean * li.mean) == doctest::Approx(0.054));
}

TEST_CASE("crystal validation") {
    CrystalSpec s;
    CHECK_NOTHROW(s.validate());
    s.contrast = 2.5;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = CrystalSpec{};
    s.duty_cycle = 1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = CrystalSpec{};
    s.angle_rad = 2.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = CrystalSpec{};
    s.period_nm = 0.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    CHECK_THROWS_AS(layer_indices(literal_spec(2.0), 850 * kNm, Polarization::ordinary), DomainError);
}

TEST_CASE("polarization labels") {
    CHECK(parse_polarization("o") == Polarization::ordinary);
    CHECK(parse_polarization("e") == Polarization::extraordinary);
    CHECK(parse_polarization(to_string(Polarization::extraordinary)) == Polarization::extraordinary);
    CHECK_THROWS(parse_polarization("x"));
}

TEST_CASE("SF10 GVD against finite differences of its Sellmeier index") {
    // Schott SF10 coefficients (lambda in um).
    auto k = [](double w) {
        const double l = 2 * kPi * kSpeedOfLight / w / kUm;
        const double l2 = l * l;
        const double n2 = 1 + 1.62153902 * l2 / (l2 - 0.0122241457) + 0.256287842 * l2 / (l2 - 0.0595736775) +
                          1.64447552 * l2 / (l2 - 147.468793);
        return std::sqrt(n2) * w / kSpeedOfLight;
    };
    const double w = omega_from_wavelength(850 * kNm);
    const auto d = oracle::taylor_fd(k, w, 1e-3 * w);
    CHECK(sf10_gvd(850 * kNm) == doctest::Approx(2 * d[1]).epsilon(1e-6));
    // Published SF10 GVD at 850 nm is about 1.4e-25 s^2/m (140 fs^2/mm).
    CHECK(sf10_gvd(850 * kNm) == doctest::Approx(1.4e-25).epsilon(0.05));
}

#include "doctest.h"

#include <cmath>

#include "qsrc/scales.hpp"

using namespace qsrc::scales;

TEST_CASE("field units with unit inputs") {
    Constants c;
    c.hbar = 1.0;
    ScaleSystem s = make_scales(1.0, 1.0, 0.0, c);
    CHECK(s.derivation == Derivation::field_units);
    CHECK(s.length == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-14));
    CHECK(s.energy == doctest::Approx(s.length).epsilon(1e-14));  // eps = F*beta, F=1
    CHECK(s.time == doctest::Approx(1.0 / s.energy).epsilon(1e-14));
}

TEST_CASE("electron in 116 eV/m, golden scales") {
    // Frozen from tests/oracles/scale_goldens.py (40-digit constant arithmetic).
    const Constants& c = codata();
    double force = 116.0 * c.elementary_charge;
    ScaleSystem s = make_scales(c.electron_mass, force, 0.0, c);
    CHECK(s.length == doctest::Approx(6.89956402586538060308e-8).epsilon(1e-13));
    CHECK(s.energy == doctest::Approx(1.282301150975304194086e-24).epsilon(1e-13));
    CHECK(s.time == doctest::Approx(8.224057322243719738702e-11).epsilon(1e-13));

    double e_dimless = to_dimensionless(60.8e-6 * c.elementary_charge, dim::energy, s);
    CHECK(e_dimless == doctest::Approx(7.596681892791661528828).epsilon(1e-13));
}

TEST_CASE("zero fields reject") {
    CHECK_THROWS_AS(make_scales(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("identity scaling") {
    ScaleSystem s = explicit_scales(2.0, 1.0);
    CHECK(to_dimensionless(2.0, dim::length, s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("round trip within 1e-12") {
    const Constants& c = codata();
    ScaleSystem s = make_scales(c.electron_mass, 116.0 * c.elementary_charge, 0.0, c);
    const Dimension dims[] = {dim::length, dim::energy, dim::time,
                              dim::mass, dim::force, dim::velocity, dim::action};
    const double values[] = {1.3e-7, 4.2e-24, 9e-11, 9.1e-31, 2e-17, 0.034, 1e-34};
    for (const auto& d : dims) {
        for (double v : values) {
            double rt = to_physical(to_dimensionless(v, d, s), d, s);
            CHECK(std::abs(rt - v) <= 1e-12 * std::abs(v));
        }
    }
}

TEST_CASE("cyclotron units when B dominates") {
    const Constants& c = codata();
    // Fig.-4-like setting: B = 0.5 T beats a 1 eV/m force for an electron.
    ScaleSystem s = make_scales(c.electron_mass, 1.0 * c.elementary_charge, 0.5, c);
    CHECK(s.derivation == Derivation::cyclotron_units);
    double omega_c = c.elementary_charge * 0.5 / c.electron_mass;
    CHECK(s.energy == doctest::Approx(c.hbar * omega_c).epsilon(1e-13));
    CHECK(s.length == doctest::Approx(std::sqrt(c.hbar / (c.elementary_charge * 0.5)))
                          .epsilon(1e-13));
    // dimensionless mass is 1 and the dimensionless field is 1 in these units
    double m_dimless = to_dimensionless(c.electron_mass, dim::mass, s);
    CHECK(m_dimless == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dimensionless_b_field(0.5, s, c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("field units preferred when force dominates") {
    const Constants& c = codata();
    // Fig.-2 setting: F = 116 eV/m, B = 0.001 T -> field units win.
    ScaleSystem s = make_scales(c.electron_mass, 116.0 * c.elementary_charge, 0.001, c);
    CHECK(s.derivation == Derivation::field_units);
    // dimensionless mass is 1/2 in field units
    CHECK(to_dimensionless(c.electron_mass, dim::mass, s) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

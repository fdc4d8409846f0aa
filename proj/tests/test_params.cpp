#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "saftlab/params.hpp"

using namespace saftlab;

TEST_CASE("unimodularity is enforced to 1e-12") {
    ParameterMatrix ok{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(validate(ok).valid());

    ParameterMatrix off = ok;
    off.D += 2e-12;  // det = 1 + 2e-12
    CHECK_FALSE(validate(off).valid());
    CHECK_THROWS_AS(require_valid(off), std::invalid_argument);

    ParameterMatrix barely = ok;
    barely.D += 0.2e-12;  // det = 1 + 0.4e-12, inside tolerance
    CHECK(validate(barely).valid());
}

TEST_CASE("non-finite entries are rejected") {
    ParameterMatrix m{1.0, std::nan(""), 0.0, 1.0, 0.0, 0.0};
    auto r = validate(m);
    REQUIRE_FALSE(r.valid());
    CHECK(r.violations.front() == "non-finite entry");
}

TEST_CASE("inverse composes to the identity offsets") {
    ParameterMatrix m{2.0, 1.0, 1.0, 1.0, 0.7, -0.3};
    ParameterMatrix mi = inverse(m);
    CHECK(std::abs(mi.determinant() - 1.0) < 1e-12);
    // matrix part of m^-1 * m
    CHECK(mi.A * m.A + mi.B * m.C == Catch::Approx(1.0).margin(1e-12));
    CHECK(mi.A * m.B + mi.B * m.D == Catch::Approx(0.0).margin(1e-12));
    CHECK(mi.C * m.A + mi.D * m.C == Catch::Approx(0.0).margin(1e-12));
    CHECK(mi.C * m.B + mi.D * m.D == Catch::Approx(1.0).margin(1e-12));
    // offset part: (p,q) of m^-1 must cancel m's offsets under composition
    CHECK(mi.A * m.p + mi.B * m.q + mi.p == Catch::Approx(0.0).margin(1e-12));
    CHECK(mi.C * m.p + mi.D * m.q + mi.q == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("presets") {
    ParameterMatrix f = fourier_preset();
    CHECK(f.A == 0.0);
    CHECK(f.B == 1.0);
    CHECK(f.C == -1.0);
    CHECK(f.D == 0.0);

    const double th = 0.9;
    ParameterMatrix fr = fractional_preset(th);
    CHECK(fr.A == Catch::Approx(std::cos(th)));
    CHECK(fr.B == Catch::Approx(std::sin(th)));
    CHECK(std::abs(fr.determinant() - 1.0) < 1e-12);
    CHECK_THROWS(fractional_preset(0.0));
    CHECK_THROWS(fractional_preset(std::numbers::pi));
    CHECK_THROWS(fractional_preset(2.0 * std::numbers::pi));

    ParameterMatrix fz = fresnel_preset(2.5);
    CHECK(fz.B == 2.5);
    CHECK(std::abs(fz.determinant() - 1.0) < 1e-12);
    CHECK_THROWS(fresnel_preset(0.0));

    CHECK_THROWS(lct_preset(1.0, 1.0, 1.0, 1.0));
    ParameterMatrix l = lct_preset(2.0, 1.0, 1.0, 1.0);
    CHECK(l.p == 0.0);
    CHECK(l.q == 0.0);
}

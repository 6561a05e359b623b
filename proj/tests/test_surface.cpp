#include <doctest.h>

#include <cmath>

#include "nanotrap/surface.hpp"

using namespace nanotrap::surface;

TEST_CASE("van der Waals values and scaling") {
    SurfaceModel model;  // C3/h = 1.2 kHz um^3, excited x2

    // -1.2 kHz um^3 / (0.1 um)^3 = -1.2 MHz
    CHECK(surface_potential_hz(model, 0.1e-6, false) ==
          doctest::Approx(-1.2e6).epsilon(1e-12));
    CHECK(surface_potential_hz(model, 0.1e-6, true) ==
          doctest::Approx(-2.4e6).epsilon(1e-12));

    // U(2d) = U(d)/8 exactly
    for (double d : {30e-9, 100e-9, 400e-9}) {
        CHECK(surface_potential_hz(model, 2.0 * d, false) ==
              doctest::Approx(surface_potential_hz(model, d, false) / 8.0).epsilon(1e-15));
    }

    // monotone toward zero from below
    double prev = surface_potential_hz(model, 20e-9, false);
    for (double d = 30e-9; d < 2e-6; d *= 1.5) {
        const double u = surface_potential_hz(model, d, false);
        CHECK(u > prev);
        CHECK(u < 0.0);
        prev = u;
    }
    CHECK(std::abs(surface_potential_hz(model, 1.0, false)) < 1e-12);

    CHECK_THROWS_AS(surface_potential_hz(model, 0.0, false), NonPositiveDistance);
    CHECK_THROWS_AS(surface_potential_hz(model, -1e-9, false), NonPositiveDistance);
}

TEST_CASE("model validation") {
    SurfaceModel bad;
    bad.c3_over_h_khz_um3 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    SurfaceModel bad2;
    bad2.excited_scale = 0.0;
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

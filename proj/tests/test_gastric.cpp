#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gi_channel/errors.hpp"
#include "gi_channel/gastric.hpp"

using namespace gi_channel;

TEST_CASE("closed-form emptying halves every half time") {
    const double g = gamma_from_half_time(3600.0);
    CHECK(g == doctest::Approx(std::numbers::ln2 / 3600.0));
    CHECK(stomach_mass_closed_form(0.1, g, 0.0) == 0.1);
    CHECK(stomach_mass_closed_form(0.1, g, 3600.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(stomach_mass_closed_form(0.1, g, 7200.0) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK_THROWS_AS(stomach_mass_closed_form(0.1, g, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_from_half_time(0.0), ParameterError);
}

TEST_CASE("stepped emptying tracks the closed form and conserves mass") {
    GastricState s = initial_gastric_state(default_meal());
    CHECK(s.mass == 0.1);
    CHECK(emptying_flux(s) == doctest::Approx(s.rate_gamma * 0.1));
    const double dt = 30.0;
    for (int i = 0; i < 240; ++i) {
        s = gastric_step(s, dt);
        CHECK(s.mass + s.emptied_cumulative == doctest::Approx(0.1).epsilon(1e-14));
        if (i == 119) CHECK(s.mass == doctest::Approx(0.05).epsilon(1e-8));
    }
    CHECK(s.mass == doctest::Approx(0.025).epsilon(1e-8));
}

#include "gi_channel/gastric.hpp"

#include <cmath>
#include <numbers>

#include "gi_channel/errors.hpp"

namespace gi_channel {

double gamma_from_half_time(double t_half) {
    if (!(t_half > 0.0) || !std::isfinite(t_half)) {
        throw ParameterError("half_emptying_time", "must be finite and > 0");
    }
    return std::numbers::ln2 / t_half;
}

double stomach_mass_closed_form(double c0, double gamma, double t) {
    if (t < 0.0) throw std::invalid_argument("stomach_mass_closed_form: negative time");
    return c0 * std::exp(-gamma * t);
}

double emptying_flux(const GastricState& state) noexcept { return state.rate_gamma * state.mass; }

GastricState initial_gastric_state(const MealSpec& meal) {
    return GastricState{
        .mass = meal.carb_mass,
        .emptied_cumulative = 0.0,
        .rate_gamma = gamma_from_half_time(meal.half_emptying_time),
    };
}

GastricState gastric_step(const GastricState& state, double dt) {
    // RK4 on a linear ODE collapses to one amplification factor, which is
    // positive for every h.
    const double h = state.rate_gamma * dt;
    const double factor = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
    GastricState next = state;
    next.mass = state.mass * factor;
    next.emptied_cumulative = state.emptied_cumulative + (state.mass - next.mass);
    return next;
}

}  // namespace gi_channel

#ifndef GI_CHANNEL_GASTRIC_HPP
#define GI_CHANNEL_GASTRIC_HPP

#include "gi_channel/params.hpp"

namespace gi_channel {

/// Stomach content as glucose-equivalent mass, first-order emptying.
struct GastricState {
    double mass;                ///< C_st [kg]
    double emptied_cumulative;  ///< [kg]
    double rate_gamma;          ///< ln 2 / t_1/2 [1/s]
};

double gamma_from_half_time(double t_half);

/// C_0 exp(-gamma t).
double stomach_mass_closed_form(double c0, double gamma, double t);

/// gamma * mass [kg/s]; the inlet source handed to the channel.
double emptying_flux(const GastricState& state) noexcept;

GastricState initial_gastric_state(const MealSpec& meal);

/// One classical RK4 step of dC/dt = -gamma C. The emptied amount is
/// exactly the mass lost, so mass + emptied is conserved to rounding.
GastricState gastric_step(const GastricState& state, double dt);

}  // namespace gi_channel

#endif  // GI_CHANNEL_GASTRIC_HPP

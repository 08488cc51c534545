#ifndef GI_CHANNEL_BLOOD_HPP
#define GI_CHANNEL_BLOOD_HPP

/**
 * @file blood.hpp
 * @brief Three-state Bergman minimal model driven by glucose appearance.
 *
 *   dG/dt = -p1 (G - G_b) - X G + Ra / V_G
 *   dX/dt = -p2 X + p3 (I - I_b)
 *   dI/dt = -n (I - I_b) + gamma_beta max(0, G - h) t
 *
 * Time inside the model runs in minutes (t is minutes since the meal),
 * G in mg/dL, I in uU/mL, Ra in mg/min.
 */

namespace gi_channel {

struct BergmanParams {
    double p1 = 0.028;          ///< glucose effectiveness [1/min]
    double p2 = 0.025;          ///< remote insulin decay [1/min]
    double p3 = 1.3e-5;         ///< insulin action gain [1/(min^2 uU/mL)]
    double n = 0.23;            ///< insulin clearance [1/min]
    double gamma_beta = 5e-3;   ///< secretion gain [uU/mL min^-2 (mg/dL)^-1]
    double h = 79.0;            ///< secretion threshold [mg/dL]
    double G_b = 60.0;          ///< basal glucose [mg/dL]
    double I_b = 7.0;           ///< basal insulin [uU/mL]
    double V_G = 120.0;         ///< glucose distribution volume [dL]
};

struct BloodState {
    double G;     ///< plasma glucose [mg/dL]
    double X;     ///< remote insulin action [1/min]
    double I;     ///< plasma insulin [uU/mL]
    double time;  ///< seconds since the meal
};

inline constexpr double max_blood_step = 1.0;  // s

void validate(const BergmanParams& params);

BloodState basal_state(const BergmanParams& params);

/// One explicit Euler step; dt must not exceed max_blood_step.
BloodState blood_step(const BloodState& state, double ra_mg_per_min, const BergmanParams& params, double dt);

/// Advance over an arbitrary dt in equal sub-steps of at most max_blood_step.
BloodState advance_blood(const BloodState& state, double ra_mg_per_min, const BergmanParams& params, double dt);

}  // namespace gi_channel

#endif  // GI_CHANNEL_BLOOD_HPP

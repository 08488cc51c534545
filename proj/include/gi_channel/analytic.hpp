#ifndef GI_CHANNEL_ANALYTIC_HPP
#define GI_CHANNEL_ANALYTIC_HPP

/**
 * @file analytic.hpp
 * @brief Closed-form channel profiles under the saturated-enzyme limit
 *        (K_half << C_s, so hydrolysis runs at V_max everywhere).
 *
 *   C_s(x,t) = f_s / sqrt(4 pi D t) exp(-(x - u t)^2 / (4 D t)) - C_0 exp(-gamma t) - V_max t
 *   C_g(x,t) = f_g / sqrt(4 pi D t) exp(-(x - u t)^2 / (4 D t) - K t) + V_max t
 *
 * These are evaluated exactly as written. They do not satisfy the coupled
 * PDEs and can go negative; compare with the numeric channel only by trend.
 */

#include <vector>

#include "gi_channel/channel.hpp"

namespace gi_channel {

struct AnalyticChannelParams {
    double f_s;         ///< starch amplitude [kg/m^2]
    double f_g;         ///< glucose amplitude [kg/m^2]
    double gamma;       ///< gastric emptying rate [1/s]
    double velocity;    ///< u [m/s]
    double diffusion;   ///< D [m^2/s]
    double v_max;       ///< [kg m^-3 s^-1]
    double absorption;  ///< K [1/s]
    double c0;          ///< meal expressed as a lumen-average concentration [kg/m^3]
};

inline constexpr double analytic_reference_time = 60.0;  // s

double starch_analytic(double x, double t, const AnalyticChannelParams& p);
double glucose_analytic(double x, double t, const AnalyticChannelParams& p);

/// Parameters with f_s = f_g = 0, filled from the physical inputs.
AnalyticChannelParams analytic_params(const MealSpec& meal, const PhysiologyParams& p, const KineticsParams& k,
                                      RadiusMode radius = RadiusMode::tube);

/// Fix f_s and f_g so that the analytic peaks at t_ref (reached at x = u t_ref)
/// equal the given numeric peak concentrations.
AnalyticChannelParams calibrate_amplitudes(AnalyticChannelParams p, double peak_starch, double peak_glucose,
                                           double t_ref = analytic_reference_time);

/// Convenience: run the numeric channel to t_ref and calibrate against it.
AnalyticChannelParams calibrate_from_numeric(const MealSpec& meal, const PhysiologyParams& p, const KineticsParams& k,
                                             const SolverConfig& cfg, RadiusMode radius = RadiusMode::tube,
                                             double t_ref = analytic_reference_time);

struct AnalyticProfile {
    std::vector<double> starch;
    std::vector<double> glucose;
};

/// Both profiles on the grid centres; negative values are kept unless clamp is set.
AnalyticProfile analytic_profile(const Grid1D& grid, double t, const AnalyticChannelParams& p, bool clamp = false);

}  // namespace gi_channel

#endif  // GI_CHANNEL_ANALYTIC_HPP

#include "gi_channel/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gi_channel {

namespace {

void require_positive_time(double t) {
    if (!(t > 0.0)) throw std::domain_error("analytic channel profiles are defined for t > 0 only");
}

double gaussian_exponent(double x, double t, const AnalyticChannelParams& p) {
    const double shift = x - p.velocity * t;
    return -shift * shift / (4.0 * p.diffusion * t);
}

double kernel_norm(double t, const AnalyticChannelParams& p) {
    return 1.0 / std::sqrt(4.0 * std::numbers::pi * p.diffusion * t);
}

}  // namespace

double starch_analytic(double x, double t, const AnalyticChannelParams& p) {
    require_positive_time(t);
    return p.f_s * kernel_norm(t, p) * std::exp(gaussian_exponent(x, t, p)) - p.c0 * std::exp(-p.gamma * t) -
           p.v_max * t;
}

double glucose_analytic(double x, double t, const AnalyticChannelParams& p) {
    require_positive_time(t);
    return p.f_g * kernel_norm(t, p) * std::exp(gaussian_exponent(x, t, p) - p.absorption * t) + p.v_max * t;
}

AnalyticChannelParams analytic_params(const MealSpec& meal, const PhysiologyParams& p, const KineticsParams& k,
                                      RadiusMode radius) {
    const TransportCoefficients t = transport_coefficients(p, radius);
    return AnalyticChannelParams{
        .f_s = 0.0,
        .f_g = 0.0,
        .gamma = gamma_from_half_time(meal.half_emptying_time),
        .velocity = p.mean_velocity,
        .diffusion = t.diffusion,
        .v_max = k.v_max,
        .absorption = t.absorption_rate,
        .c0 = meal.carb_mass / p.lumen_volume(),
    };
}

AnalyticChannelParams calibrate_amplitudes(AnalyticChannelParams p, double peak_starch, double peak_glucose,
                                           double t_ref) {
    require_positive_time(t_ref);
    const double inv_norm = 1.0 / kernel_norm(t_ref, p);
    p.f_s = (peak_starch + p.c0 * std::exp(-p.gamma * t_ref) + p.v_max * t_ref) * inv_norm;
    p.f_g = (peak_glucose - p.v_max * t_ref) * inv_norm * std::exp(p.absorption * t_ref);
    return p;
}

AnalyticChannelParams calibrate_from_numeric(const MealSpec& meal, const PhysiologyParams& p,
                                             const KineticsParams& k, const SolverConfig& cfg, RadiusMode radius,
                                             double t_ref) {
    SolverConfig short_cfg = cfg;
    short_cfg.end_time = t_ref;
    short_cfg.couple_blood = false;
    const RunResult r = run(meal, p, k, short_cfg, radius);
    const SimulationState& last = r.snapshots.back();
    const double ps = *std::max_element(last.starch.values.begin(), last.starch.values.end());
    const double pg = *std::max_element(last.glucose.values.begin(), last.glucose.values.end());
    return calibrate_amplitudes(analytic_params(meal, p, k, radius), ps, pg, t_ref);
}

AnalyticProfile analytic_profile(const Grid1D& grid, double t, const AnalyticChannelParams& p, bool clamp) {
    AnalyticProfile out;
    out.starch.resize(grid.cell_count());
    out.glucose.resize(grid.cell_count());
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        const double x = grid.center(i);
        out.starch[i] = starch_analytic(x, t, p);
        out.glucose[i] = glucose_analytic(x, t, p);
        if (clamp) {
            out.starch[i] = std::max(0.0, out.starch[i]);
            out.glucose[i] = std::max(0.0, out.glucose[i]);
        }
    }
    return out;
}

}  // namespace gi_channel

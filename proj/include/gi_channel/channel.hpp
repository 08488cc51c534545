#ifndef GI_CHANNEL_CHANNEL_HPP
#define GI_CHANNEL_CHANNEL_HPP

/**
 * @file channel.hpp
 * @brief Coupled starch/glucose advection-diffusion-reaction along the SI tract.
 *
 *   dC_s/dt = D C_s'' - u C_s' - V_max C_s / (K_half + C_s) + (gastric inflow)
 *   dC_g/dt = D C_g'' - u C_g' + V_max C_s / (K_half + C_s) - K C_g
 *
 * Finite volumes on uniform cells: first-order upwind advection, central
 * diffusion, forward Euler for transport. The hydrolysis transfer is
 * linearly implicit (Patankar weighting) and wall absorption uses the exact
 * exponential factor, so both stay non-negative and conserve mass exactly;
 * positivity of the transport part follows from stability_dt().
 */

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gi_channel/blood.hpp"
#include "gi_channel/gastric.hpp"
#include "gi_channel/kinetics.hpp"
#include "gi_channel/params.hpp"

namespace gi_channel {

inline constexpr std::size_t min_cell_count = 8;
inline constexpr double stability_safety = 0.5;
inline constexpr double mass_audit_tolerance = 5e-3;

class Grid1D {
public:
    Grid1D(double length, std::size_t cell_count);

    double length() const noexcept { return length_; }
    std::size_t cell_count() const noexcept { return cells_; }
    double dx() const noexcept { return dx_; }
    double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx_; }
    std::vector<double> centers() const;
    /// Index of the cell whose centre is closest to x (clamped to the domain).
    std::size_t nearest_cell(double x) const noexcept;

private:
    double length_;
    std::size_t cells_;
    double dx_;
};

/// Cell-averaged concentration of one species [kg/m^3].
struct ConcentrationField {
    std::vector<double> values;

    /// sum(values) * A * dx [kg]
    double total_mass(double dx, double area) const noexcept;
};

enum class InjectionProfile { inlet_cell, uniform };
enum class OutletBoundary { outflow, zero_flux };

InjectionProfile parse_injection_profile(std::string_view name);
OutletBoundary parse_outlet_boundary(std::string_view name);
std::string_view to_string(InjectionProfile p) noexcept;
std::string_view to_string(OutletBoundary b) noexcept;

struct SolverConfig {
    std::optional<double> dt;  ///< fixed step [s]; empty selects stability_dt()
    double end_time = 5.0 * units::seconds_per_hour;
    std::size_t cell_count = 690;
    InjectionProfile injection = InjectionProfile::inlet_cell;
    OutletBoundary outlet = OutletBoundary::outflow;
    std::size_t output_stride = 0;  ///< steps between snapshots; 0 derives it from output_interval
    double output_interval = 300.0;
    bool couple_blood = true;
};

struct SimulationState {
    double time = 0.0;
    GastricState gastric{};
    ConcentrationField starch;
    ConcentrationField glucose;
    double absorbed_mass = 0.0;
    double outflow_mass = 0.0;
    double produced_glucose_mass = 0.0;
    BloodState blood{};
};

/// Plain numbers the stepper needs; lets tests switch terms off individually.
struct ChannelCoefficients {
    double velocity;    ///< u [m/s]
    double diffusion;   ///< D [m^2/s]
    double absorption;  ///< K [1/s]
    double area;        ///< A [m^2]
    KineticsParams kinetics;
};

ChannelCoefficients make_coefficients(const PhysiologyParams& p, const KineticsParams& k,
                                      const TransportCoefficients& t);

/// safety * min(dx/u, dx^2/(2D), 1/K, 1/gamma); zero rates impose no bound.
double stability_dt(const Grid1D& grid, double velocity, double diffusion, double absorption, double gamma);

class ChannelModel {
public:
    ChannelModel(Grid1D grid, ChannelCoefficients coeffs, InjectionProfile injection, OutletBoundary outlet,
                 BergmanParams bergman = {}, bool couple_blood = true);

    const Grid1D& grid() const noexcept { return grid_; }
    const ChannelCoefficients& coefficients() const noexcept { return coeffs_; }

    /// Empty channel (C_s = C_g = 0), full stomach, basal blood.
    SimulationState initial_state(const MealSpec& meal) const;

    double stability_dt(double gamma) const;

    /// Advance one dt. Throws NumericalError when dt exceeds the unsafe
    /// stability bound or a concentration turns negative or non-finite.
    SimulationState step(const SimulationState& state, double dt) const;

    /// Stomach + lumen + absorbed + outflow [kg].
    double accounted_mass(const SimulationState& state) const noexcept;

private:
    Grid1D grid_;
    ChannelCoefficients coeffs_;
    InjectionProfile injection_;
    OutletBoundary outlet_;
    BergmanParams bergman_;
    bool couple_blood_;

    void transport(std::span<const double> c, std::span<double> out, double dt, double& outflow) const;
};

struct RunResult {
    Grid1D grid;
    double area = 0.0;
    double meal_mass = 0.0;
    BergmanParams bergman{};
    TransportCoefficients transport{};
    double dt = 0.0;
    std::size_t steps = 0;
    std::vector<SimulationState> snapshots;
};

/// Full simulation with snapshots at the output stride plus the final time.
/// Every snapshot is checked against the global mass audit.
RunResult run(const MealSpec& meal, const PhysiologyParams& p, const KineticsParams& k, const SolverConfig& cfg,
              RadiusMode radius = RadiusMode::tube, const BergmanParams& bergman = {});

/// |stomach + lumen + absorbed + outflow - C_0| / C_0
double mass_audit_residual(const SimulationState& state, const Grid1D& grid, double area, double meal_mass);

/// Exact solution for a point mass released at x0 at t = 0 on an unbounded
/// line with velocity u, diffusivity D and uniform first-order decay lambda:
///   M / (A sqrt(4 pi D t)) exp(-(x - x0 - u t)^2 / (4 D t)) exp(-lambda t)
double gaussian_oracle(double mass, double x0, double velocity, double diffusion, double lambda, double area,
                       double x, double t);

}  // namespace gi_channel

#endif  // GI_CHANNEL_CHANNEL_HPP

#ifndef GI_CHANNEL_PARAMS_HPP
#define GI_CHANNEL_PARAMS_HPP

/**
 * @file params.hpp
 * @brief Physiological, kinetic and meal parameters with SI defaults.
 *
 * Everything inside the engine is kg, m, s. Clinical units (mM, mg/dL)
 * only appear at the I/O boundary through convert_concentration().
 */

#include <string_view>

namespace gi_channel {

/// Small-intestine geometry, fluid and molecular constants.
struct PhysiologyParams {
    double si_length;              ///< L [m]
    double si_diameter;            ///< d [m]
    double viscosity;              ///< mu [Pa s]
    double molecule_radius;        ///< r_m [m]
    double surface_amplification;  ///< f, folds/villi/microvilli area factor [-]
    double mean_velocity;          ///< u [m/s]
    double temperature;            ///< T [K]

    /// Lumen cross-section pi (d/2)^2 [m^2].
    double cross_section_area() const noexcept;
    /// Lumen volume A L [m^3].
    double lumen_volume() const noexcept;
};

/// Michaelis-Menten constants for starch hydrolysis (glucose-equivalent mass).
struct KineticsParams {
    double v_max;   ///< maximum reaction rate [kg m^-3 s^-1]
    double k_half;  ///< half-saturation concentration [kg m^-3]
};

struct MealSpec {
    double carb_mass;           ///< C_0 [kg]
    double half_emptying_time;  ///< t_1/2 [s]
};

/// Adult male small intestine, viscosity at the low end of the reported range.
PhysiologyParams default_params();
/// 25 mM/min and 9 mM, converted to SI.
KineticsParams default_kinetics();
/// 100 g carbohydrate, one-hour gastric half-emptying.
MealSpec default_meal();

/// Throw ParameterError naming the first invalid field.
void validate(const PhysiologyParams& p);
void validate(const KineticsParams& k);
void validate(const MealSpec& m);

namespace units {

inline constexpr double glucose_molar_mass = 0.18016;  // kg/mol
/// 1 mM = 1 mol/m^3 of glucose.
inline constexpr double millimolar_to_kg_m3 = glucose_molar_mass;
/// 1 mg/dL = 1e-6 kg / 1e-4 m^3.
inline constexpr double mg_dl_to_kg_m3 = 1.0e-2;
inline constexpr double g_l_to_kg_m3 = 1.0;
inline constexpr double seconds_per_minute = 60.0;
inline constexpr double seconds_per_hour = 3600.0;

}  // namespace units

enum class ConcentrationUnit { millimolar, mg_per_dl, kg_per_m3, g_per_l };

/// Accepts "mM", "mg/dL", "kg/m3" (or "kg/m^3", "kg/m³") and "g/L".
ConcentrationUnit parse_concentration_unit(std::string_view name);
std::string_view to_string(ConcentrationUnit unit) noexcept;

/// Linear conversion through the glucose molar mass.
double convert_concentration(double value, ConcentrationUnit from, ConcentrationUnit to);

/// mM/min -> kg m^-3 s^-1.
double millimolar_per_min_to_si(double value);

}  // namespace gi_channel

#endif  // GI_CHANNEL_PARAMS_HPP

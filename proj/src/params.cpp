#include "gi_channel/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gi_channel/errors.hpp"

namespace gi_channel {

double PhysiologyParams::cross_section_area() const noexcept {
    const double r = 0.5 * si_diameter;
    return std::numbers::pi * r * r;
}

double PhysiologyParams::lumen_volume() const noexcept { return cross_section_area() * si_length; }

PhysiologyParams default_params() {
    return PhysiologyParams{
        .si_length = 6.9,
        .si_diameter = 0.025,
        .viscosity = 0.01,
        .molecule_radius = 0.38e-9,
        .surface_amplification = 12.0,
        .mean_velocity = 1.7e-4,
        .temperature = 310.15,
    };
}

KineticsParams default_kinetics() {
    return KineticsParams{
        .v_max = millimolar_per_min_to_si(25.0),
        .k_half = convert_concentration(9.0, ConcentrationUnit::millimolar, ConcentrationUnit::kg_per_m3),
    };
}

MealSpec default_meal() { return MealSpec{.carb_mass = 0.100, .half_emptying_time = 3600.0}; }

namespace {

void require_positive(double value, const char* field) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw ParameterError(field, "must be finite and > 0 (got " + std::to_string(value) + ")");
    }
}

}  // namespace

void validate(const PhysiologyParams& p) {
    require_positive(p.si_length, "si_length");
    require_positive(p.si_diameter, "si_diameter");
    require_positive(p.viscosity, "viscosity");
    require_positive(p.molecule_radius, "molecule_radius");
    require_positive(p.surface_amplification, "surface_amplification");
    require_positive(p.mean_velocity, "mean_velocity");
    require_positive(p.temperature, "temperature");
    if (p.viscosity < 1e-4 || p.viscosity > 100.0) {
        throw ParameterError("viscosity", "outside sanity band [1e-4, 100] Pa s");
    }
    if (!(p.si_diameter < p.si_length)) {
        throw ParameterError("si_diameter", "must be smaller than si_length");
    }
}

void validate(const KineticsParams& k) {
    require_positive(k.v_max, "v_max");
    if (!std::isfinite(k.k_half) || k.k_half < 0.0) {
        throw ParameterError("k_half", "must be finite and >= 0");
    }
}

void validate(const MealSpec& m) {
    require_positive(m.carb_mass, "carb_mass");
    require_positive(m.half_emptying_time, "half_emptying_time");
}

ConcentrationUnit parse_concentration_unit(std::string_view name) {
    if (name == "mM" || name == "mmol/L") return ConcentrationUnit::millimolar;
    if (name == "mg/dL" || name == "mg/dl") return ConcentrationUnit::mg_per_dl;
    if (name == "kg/m3" || name == "kg/m^3" || name == "kg/m³") return ConcentrationUnit::kg_per_m3;
    if (name == "g/L" || name == "g/l") return ConcentrationUnit::g_per_l;
    throw ConfigError("unknown concentration unit '" + std::string(name) + "'");
}

std::string_view to_string(ConcentrationUnit unit) noexcept {
    switch (unit) {
        case ConcentrationUnit::millimolar: return "mM";
        case ConcentrationUnit::mg_per_dl: return "mg/dL";
        case ConcentrationUnit::kg_per_m3: return "kg/m3";
        case ConcentrationUnit::g_per_l: return "g/L";
    }
    return "?";
}

namespace {

double to_si_factor(ConcentrationUnit unit) {
    switch (unit) {
        case ConcentrationUnit::millimolar: return units::millimolar_to_kg_m3;
        case ConcentrationUnit::mg_per_dl: return units::mg_dl_to_kg_m3;
        case ConcentrationUnit::kg_per_m3: return 1.0;
        case ConcentrationUnit::g_per_l: return units::g_l_to_kg_m3;
    }
    return 1.0;
}

}  // namespace

double convert_concentration(double value, ConcentrationUnit from, ConcentrationUnit to) {
    if (from == to) return value;
    return value * to_si_factor(from) / to_si_factor(to);
}

double millimolar_per_min_to_si(double value) {
    return value * units::millimolar_to_kg_m3 / units::seconds_per_minute;
}

}  // namespace gi_channel

#include "gi_channel/kinetics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gi_channel/errors.hpp"

namespace gi_channel {

RadiusMode parse_radius_mode(std::string_view name) {
    if (name == "tube") return RadiusMode::tube;
    if (name == "molecule") return RadiusMode::molecule;
    throw ConfigError("unknown radius mode '" + std::string(name) + "' (expected tube|molecule)");
}

std::string_view to_string(RadiusMode mode) noexcept {
    return mode == RadiusMode::tube ? "tube" : "molecule";
}

double diffusion_coefficient(const PhysiologyParams& p) {
    return boltzmann_constant * p.temperature / (6.0 * std::numbers::pi * p.viscosity * p.molecule_radius);
}

double mass_transfer_coefficient(const PhysiologyParams& p, double diffusion) {
    return 1.62 * std::cbrt(p.mean_velocity * diffusion * diffusion / (p.si_length * p.si_diameter));
}

double absorption_rate(const PhysiologyParams& p, double mass_transfer, RadiusMode mode) {
    const double r = mode == RadiusMode::tube ? 0.5 * p.si_diameter : p.molecule_radius;
    return 2.0 / r * p.surface_amplification * mass_transfer;
}

TransportCoefficients transport_coefficients(const PhysiologyParams& p, RadiusMode mode) {
    TransportCoefficients c{};
    c.diffusion = diffusion_coefficient(p);
    c.mass_transfer = mass_transfer_coefficient(p, c.diffusion);
    c.absorption_rate = absorption_rate(p, c.mass_transfer, mode);
    return c;
}

double mm_production_rate(double c_s, const KineticsParams& k) {
    if (c_s <= 0.0) return 0.0;
    return k.v_max * c_s / (k.k_half + c_s);
}

}  // namespace gi_channel

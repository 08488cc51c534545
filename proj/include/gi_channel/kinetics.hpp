#ifndef GI_CHANNEL_KINETICS_HPP
#define GI_CHANNEL_KINETICS_HPP

#include <string_view>

#include "gi_channel/params.hpp"

namespace gi_channel {

inline constexpr double boltzmann_constant = 1.380649e-23;  // J/K

/// Radius used in the wall absorption rate K = (2/r) f K_a.
///
/// `tube` takes r = d/2 (surface-to-volume ratio of the lumen). `molecule`
/// takes r = r_m literally, which gives K of order 1e3 1/s and absorption on
/// millisecond scales.
enum class RadiusMode { tube, molecule };

RadiusMode parse_radius_mode(std::string_view name);
std::string_view to_string(RadiusMode mode) noexcept;

struct TransportCoefficients {
    double diffusion;        ///< D [m^2/s]
    double mass_transfer;    ///< K_a [m/s]
    double absorption_rate;  ///< K [1/s]
};

/// Stokes-Einstein: D = k_B T / (6 pi mu r_m).
double diffusion_coefficient(const PhysiologyParams& p);

/// Leveque-type Sherwood correlation: K_a = 1.62 (u D^2 / (L d))^(1/3).
double mass_transfer_coefficient(const PhysiologyParams& p, double diffusion);

double absorption_rate(const PhysiologyParams& p, double mass_transfer, RadiusMode mode = RadiusMode::tube);

TransportCoefficients transport_coefficients(const PhysiologyParams& p, RadiusMode mode = RadiusMode::tube);

/// V_max c / (K_half + c); 0 at c = 0 even when K_half = 0.
double mm_production_rate(double c_s, const KineticsParams& k);

}  // namespace gi_channel

#endif  // GI_CHANNEL_KINETICS_HPP

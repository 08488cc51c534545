#ifndef GI_CHANNEL_METRICS_HPP
#define GI_CHANNEL_METRICS_HPP

/**
 * @file metrics.hpp
 * @brief Link metrics for the digestion channel: path loss and delay.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gi_channel/channel.hpp"

namespace gi_channel {

/// Time (after the meal) by which more than half of the carbohydrate is
/// expected to have been digested and absorbed.
inline constexpr double delay_benchmark = 1.5 * units::seconds_per_hour;

/// 10 log10(c1 / c2) [dB]. Throws MetricError unless both are > 0.
double path_loss(double c_at_x1, double c_at_x2);

struct TimeMass {
    double time;  ///< [s]
    double mass;  ///< [kg]
};

struct DelayResult {
    double t50;    ///< [s]
    double delay;  ///< t50 - benchmark [s], may be negative
};

/// First crossing of 0.5 c0 by the absorbed mass, linearly interpolated.
/// Throws MetricError if the crossing is never reached or the series decreases.
DelayResult digestion_delay(std::span<const TimeMass> absorbed, double c0);

struct ReportOptions {
    double x1_fraction = 0.1;      ///< x1 = fraction * L, unless x1 is set
    double x2_fraction = 0.9;
    std::optional<double> x1;      ///< [m]
    std::optional<double> x2;      ///< [m]
    std::optional<double> t_eval;  ///< [s]; defaults to t50, else the end of the run
};

struct ChannelReport {
    std::optional<double> path_loss_starch_db;
    std::optional<double> path_loss_glucose_db;
    std::optional<double> t50;    ///< [s]
    std::optional<double> delay;  ///< [s]
    double benchmark = delay_benchmark;
    double peak_si_glucose = 0.0;     ///< [mg/dL], max over cells and snapshots
    double peak_blood_glucose = 0.0;  ///< [mg/dL]
    double time_to_blood_peak = 0.0;  ///< [s]
    std::optional<double> time_to_blood_restabilize;  ///< [s], first return within 5% of G_b after the peak
    double mass_audit_residual = 0.0;

    double x1 = 0.0;      ///< measurement points actually used [m]
    double x2 = 0.0;
    double t_eval = 0.0;  ///< [s]
    double absorbed_fraction = 0.0;  ///< absorbed / C_0 at the end of the run
    double digested_fraction = 0.0;  ///< produced glucose / C_0 at the end of the run
    std::vector<std::string> notes;  ///< why optional fields are missing
};

inline constexpr double restabilize_band = 0.05;

ChannelReport report(const RunResult& run, const ReportOptions& options = {});

/// Starch and glucose at cell nearest x, linearly interpolated in time between snapshots.
struct FieldSample {
    double starch;
    double glucose;
};
FieldSample sample_fields(const RunResult& run, double x, double t);

}  // namespace gi_channel

#endif  // GI_CHANNEL_METRICS_HPP

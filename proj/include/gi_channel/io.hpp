#ifndef GI_CHANNEL_IO_HPP
#define GI_CHANNEL_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gi_channel/analytic.hpp"
#include "gi_channel/config.hpp"
#include "gi_channel/metrics.hpp"

namespace gi_channel {

inline constexpr std::string_view tool_name = "gi_channel";
inline constexpr std::string_view tool_version = "1.0.0";

inline constexpr std::string_view fields_file = "fields.csv";
inline constexpr std::string_view series_file = "series.csv";
inline constexpr std::string_view report_file = "report.json";
inline constexpr std::string_view manifest_file = "manifest.json";

/// Shortest decimal that round-trips the double.
std::string format_number(double v);

/// time_s, x_m, starch_<unit>, glucose_<unit>, mode; one row per cell per snapshot.
/// OutputUnits::paper writes starch in g/L and glucose in mg/dL.
void write_fields_csv(const std::filesystem::path& path, const RunResult& run, OutputUnits units,
                      const std::optional<AnalyticChannelParams>& analytic = std::nullopt, bool clamp_analytic = true);

/// time_s, gastric_g, absorbed_g, outflow_g, blood_glucose_mg_dl, produced_g
void write_series_csv(const std::filesystem::path& path, const RunResult& run);

nlohmann::json to_json(const ChannelReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Provenance record written next to every output set.
nlohmann::json make_manifest(std::string_view command, const nlohmann::json& parameters,
                             const std::vector<std::filesystem::path>& inputs);

/// Rebuild a run from a simulate output directory (manifest, series and numeric field rows).
/// Blood X and I are not exported and read back as zero.
RunResult read_run_directory(const std::filesystem::path& dir, RunSetup* setup_out = nullptr);

}  // namespace gi_channel

#endif  // GI_CHANNEL_IO_HPP

#ifndef GI_CHANNEL_SWEEP_HPP
#define GI_CHANNEL_SWEEP_HPP

/**
 * @file sweep.hpp
 * @brief Grid parameter studies: one independent simulation per grid point.
 *
 * Points may execute concurrently; rows are always stored in lexicographic
 * axis order (last axis fastest), so the table does not depend on the
 * thread count.
 */

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gi_channel/config.hpp"
#include "gi_channel/metrics.hpp"

namespace gi_channel {

enum class AxisScale { linear, log };

struct SweepAxis {
    std::string name;  ///< registry name, values in its flag unit
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;
    AxisScale scale = AxisScale::linear;

    std::vector<double> values() const;
};

enum class TrendDirection { increasing, decreasing };

struct TrendSpec {
    std::string axis;
    std::string output;
    TrendDirection direction = TrendDirection::increasing;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;
    std::vector<std::pair<std::string, std::string>> fixed;  ///< key, raw value ("<number> [unit]" or option)
    std::vector<std::string> outputs;                        ///< report columns; empty means all
    std::vector<TrendSpec> trends;                           ///< checked after the run by the CLI
    std::size_t max_points = 10000;
};

/// Parse the JSON form:
///   {"axes": [{"name", "min", "max", "count", "scale"}], "fixed": {...},
///    "outputs": [...], "trends": [{"axis", "output", "direction"}], "max_points": N}
SweepSpec parse_sweep_spec(const nlohmann::json& j);
SweepSpec load_sweep_spec(const std::filesystem::path& path);
nlohmann::json to_json(const SweepSpec& spec);

/// Throws ConfigError for empty or unknown axes, count < 2, min >= max, or cap exceeded.
void validate(const SweepSpec& spec);
std::size_t point_count(const SweepSpec& spec);

struct SweepRow {
    std::vector<double> axis_values;
    std::optional<ChannelReport> report;
    std::string error;  ///< failure cause when report is empty
};

struct SweepTable {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;

    std::size_t succeeded() const noexcept;
};

/// Run every grid point. `threads` = 0 reads GI_CHANNEL_THREADS (default 1).
SweepTable run_sweep(const SweepSpec& spec, const RunSetup& base, std::size_t threads = 0);

std::size_t sweep_threads_from_env();

/// Names accepted as trend outputs and sweep columns.
const std::vector<std::string>& report_output_names();
std::optional<double> report_output(const ChannelReport& report, std::string_view name);

struct TrendViolation {
    std::size_t from_row;
    std::size_t to_row;
    std::string reason;
};

struct TrendResult {
    bool pass = true;
    std::vector<TrendViolation> violations;
};

TrendDirection parse_trend_direction(std::string_view name);

/// Weak monotonicity of `output` along `axis`, other axes held fixed.
TrendResult trend_check(const SweepTable& table, std::string_view axis, std::string_view output,
                        TrendDirection direction);

/// One row per grid point: axis columns, report columns, then status and error.
void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table,
                     const std::vector<std::string>& outputs = {});

}  // namespace gi_channel

#endif  // GI_CHANNEL_SWEEP_HPP

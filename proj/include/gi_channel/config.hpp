#ifndef GI_CHANNEL_CONFIG_HPP
#define GI_CHANNEL_CONFIG_HPP

/**
 * @file config.hpp
 * @brief Named parameter registry, `name = value unit` config files and the
 *        resolved setup a single simulation runs from.
 *
 * Every registry entry has a flag unit: the unit assumed when a value is
 * given without one (CLI flags always use it). Values are converted to SI on
 * entry and stored in the typed parameter records.
 */

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gi_channel/blood.hpp"
#include "gi_channel/channel.hpp"
#include "gi_channel/kinetics.hpp"
#include "gi_channel/metrics.hpp"
#include "gi_channel/params.hpp"

namespace gi_channel {

enum class OutputUnits { paper, si };

OutputUnits parse_output_units(std::string_view name);
std::string_view to_string(OutputUnits u) noexcept;

struct RunSetup {
    MealSpec meal = default_meal();
    PhysiologyParams physiology = default_params();
    KineticsParams kinetics = default_kinetics();
    BergmanParams bergman{};
    SolverConfig solver{};
    RadiusMode radius = RadiusMode::tube;
    OutputUnits units = OutputUnits::paper;
    ReportOptions report_options{};
    bool analytic = false;
    bool clamp_analytic = true;
    std::string out_dir = "out";
};

enum class Dimension {
    length,
    time,
    mass,
    viscosity,
    velocity,
    concentration,
    reaction_rate,
    rate,
    temperature,
    volume,
    dimensionless,
    count,
};

struct ParameterInfo {
    std::string_view name;
    Dimension dimension;
    std::string_view flag_unit;
    std::string_view description;
};

const std::vector<ParameterInfo>& parameter_registry();
const ParameterInfo* find_parameter(std::string_view name) noexcept;

/// String-valued keys: injection, radius_mode, units, outlet, out, analytic, clamp_analytic.
bool is_string_option(std::string_view name) noexcept;

/// SI value of `value` expressed in `unit` for the given dimension.
/// An empty unit is accepted only for dimensionless and count quantities.
double to_si(Dimension dim, double value, std::string_view unit);

/// Set a numeric parameter; an empty unit means the entry's flag unit.
void set_parameter(RunSetup& setup, std::string_view name, double value, std::string_view unit = {});
/// Current value in the entry's flag unit.
double get_parameter(const RunSetup& setup, std::string_view name);

/// Apply `key = raw` where raw is "<number> [unit]" or a string option value.
/// Dashes in the key are read as underscores, so flag spellings work too.
void apply_assignment(RunSetup& setup, std::string_view key, std::string_view raw);

/// Flat text config, one `name = value unit` per line, '#' starts a comment.
void apply_config_file(RunSetup& setup, const std::filesystem::path& path);

/// Validate all records the run will use; throws ParameterError.
void validate(const RunSetup& setup);

/// All parameters in flag units plus string options, keyed by registry name.
nlohmann::json resolved_parameters(const RunSetup& setup);

/// Inverse of resolved_parameters().
void apply_resolved_parameters(RunSetup& setup, const nlohmann::json& params);

RunResult run_setup(const RunSetup& setup);

}  // namespace gi_channel

#endif  // GI_CHANNEL_CONFIG_HPP

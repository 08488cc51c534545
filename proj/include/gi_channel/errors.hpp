#ifndef GI_CHANNEL_ERRORS_HPP
#define GI_CHANNEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gi_channel {

/// Invalid physical parameter. The message names the offending field.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed configuration file, sweep spec, or unknown key/unit.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical guard tripped (stability bound, NaN, negative concentration).
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string guard, const std::string& what)
        : std::runtime_error(guard + " guard: " + what), guard_(std::move(guard)) {}

    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

/// A channel metric is undefined for the given data.
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace gi_channel

#endif  // GI_CHANNEL_ERRORS_HPP

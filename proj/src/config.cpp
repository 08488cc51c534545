#include "gi_channel/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "gi_channel/errors.hpp"

namespace gi_channel {

OutputUnits parse_output_units(std::string_view name) {
    if (name == "paper") return OutputUnits::paper;
    if (name == "si") return OutputUnits::si;
    throw ConfigError(fmt::format("unknown output units '{}' (expected paper|si)", name));
}

std::string_view to_string(OutputUnits u) noexcept { return u == OutputUnits::paper ? "paper" : "si"; }

namespace {

using UnitTable = std::vector<std::pair<std::string_view, double>>;

const UnitTable& unit_table(Dimension dim) {
    static const UnitTable length{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    static const UnitTable time{{"s", 1.0},   {"min", 60.0},    {"h", 3600.0},
                                {"hr", 3600.0}, {"hours", 3600.0}, {"hour", 3600.0}};
    static const UnitTable mass{{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}};
    static const UnitTable viscosity{{"Pa s", 1.0},    {"Pa*s", 1.0},    {"Pa.s", 1.0}, {"Pa·s", 1.0},
                                     {"mPa s", 1e-3}, {"mPa*s", 1e-3}, {"cP", 1e-3}};
    static const UnitTable velocity{{"m/s", 1.0}, {"cm/s", 1e-2}, {"mm/s", 1e-3}, {"m/min", 1.0 / 60.0}};
    static const UnitTable concentration{{"kg/m3", 1.0},
                                         {"kg/m^3", 1.0},
                                         {"g/L", units::g_l_to_kg_m3},
                                         {"mM", units::millimolar_to_kg_m3},
                                         {"mg/dL", units::mg_dl_to_kg_m3}};
    static const UnitTable reaction_rate{{"kg/m3/s", 1.0},
                                         {"kg/(m3 s)", 1.0},
                                         {"mM/min", units::millimolar_to_kg_m3 / 60.0},
                                         {"mM/s", units::millimolar_to_kg_m3},
                                         {"g/L/min", 1.0 / 60.0},
                                         {"mg/dL/min", units::mg_dl_to_kg_m3 / 60.0}};
    static const UnitTable rate{{"1/s", 1.0}, {"1/min", 1.0 / 60.0}, {"1/h", 1.0 / 3600.0}};
    static const UnitTable temperature{{"K", 1.0}};
    static const UnitTable volume{{"m3", 1.0}, {"L", 1e-3}, {"dL", 1e-4}, {"mL", 1e-6}};
    static const UnitTable none{{"", 1.0}, {"1", 1.0}, {"-", 1.0}};
    switch (dim) {
        case Dimension::length: return length;
        case Dimension::time: return time;
        case Dimension::mass: return mass;
        case Dimension::viscosity: return viscosity;
        case Dimension::velocity: return velocity;
        case Dimension::concentration: return concentration;
        case Dimension::reaction_rate: return reaction_rate;
        case Dimension::rate: return rate;
        case Dimension::temperature: return temperature;
        case Dimension::volume: return volume;
        case Dimension::dimensionless:
        case Dimension::count: return none;
    }
    return none;
}

constexpr double unset = std::numeric_limits<double>::quiet_NaN();

struct Entry {
    ParameterInfo info;
    std::function<void(RunSetup&, double)> set_si;
    std::function<double(const RunSetup&)> get_si;
};

std::size_t to_count(double v, std::string_view name) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
        throw ParameterError(std::string(name), fmt::format("expected a non-negative integer (got {})", v));
    }
    return static_cast<std::size_t>(v);
}

const std::vector<Entry>& entries() {
    using D = Dimension;
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        const auto add = [&t](ParameterInfo info, std::function<void(RunSetup&, double)> set,
                              std::function<double(const RunSetup&)> get) {
            t.push_back(Entry{info, std::move(set), std::move(get)});
        };
        add({"meal_g", D::mass, "g", "consumed carbohydrate C_0"},
            [](RunSetup& s, double v) { s.meal.carb_mass = v; }, [](const RunSetup& s) { return s.meal.carb_mass; });
        add({"half_emptying_min", D::time, "min", "gastric half-emptying time"},
            [](RunSetup& s, double v) { s.meal.half_emptying_time = v; },
            [](const RunSetup& s) { return s.meal.half_emptying_time; });
        add({"velocity", D::velocity, "m/s", "mean digesta velocity u"},
            [](RunSetup& s, double v) { s.physiology.mean_velocity = v; },
            [](const RunSetup& s) { return s.physiology.mean_velocity; });
        add({"viscosity", D::viscosity, "Pa s", "dynamic viscosity mu"},
            [](RunSetup& s, double v) { s.physiology.viscosity = v; },
            [](const RunSetup& s) { return s.physiology.viscosity; });
        add({"vmax_mm_per_min", D::reaction_rate, "mM/min", "Michaelis-Menten maximum rate"},
            [](RunSetup& s, double v) { s.kinetics.v_max = v; }, [](const RunSetup& s) { return s.kinetics.v_max; });
        add({"khalf_mm", D::concentration, "mM", "Michaelis-Menten half-saturation concentration"},
            [](RunSetup& s, double v) { s.kinetics.k_half = v; }, [](const RunSetup& s) { return s.kinetics.k_half; });
        add({"si_length", D::length, "m", "small-intestine length L"},
            [](RunSetup& s, double v) { s.physiology.si_length = v; },
            [](const RunSetup& s) { return s.physiology.si_length; });
        add({"si_diameter", D::length, "m", "small-intestine diameter d"},
            [](RunSetup& s, double v) { s.physiology.si_diameter = v; },
            [](const RunSetup& s) { return s.physiology.si_diameter; });
        add({"molecule_radius", D::length, "m", "glucose molecule radius r_m"},
            [](RunSetup& s, double v) { s.physiology.molecule_radius = v; },
            [](const RunSetup& s) { return s.physiology.molecule_radius; });
        add({"surface_amplification", D::dimensionless, "", "fold/villi area factor f"},
            [](RunSetup& s, double v) { s.physiology.surface_amplification = v; },
            [](const RunSetup& s) { return s.physiology.surface_amplification; });
        add({"temperature", D::temperature, "K", "absolute temperature T"},
            [](RunSetup& s, double v) { s.physiology.temperature = v; },
            [](const RunSetup& s) { return s.physiology.temperature; });
        add({"cells", D::count, "", "number of finite-volume cells"},
            [](RunSetup& s, double v) { s.solver.cell_count = to_count(v, "cells"); },
            [](const RunSetup& s) { return static_cast<double>(s.solver.cell_count); });
        add({"end_hours", D::time, "h", "simulated horizon"},
            [](RunSetup& s, double v) { s.solver.end_time = v; }, [](const RunSetup& s) { return s.solver.end_time; });
        add({"dt_s", D::time, "s", "fixed time step; 0 selects the stability bound"},
            [](RunSetup& s, double v) {
                if (v == 0.0) {
                    s.solver.dt.reset();
                } else {
                    s.solver.dt = v;
                }
            },
            [](const RunSetup& s) { return s.solver.dt.value_or(0.0); });
        add({"output_interval_s", D::time, "s", "snapshot spacing when output_stride is 0"},
            [](RunSetup& s, double v) { s.solver.output_interval = v; },
            [](const RunSetup& s) { return s.solver.output_interval; });
        add({"output_stride", D::count, "", "steps between snapshots (0 = use output_interval_s)"},
            [](RunSetup& s, double v) { s.solver.output_stride = to_count(v, "output_stride"); },
            [](const RunSetup& s) { return static_cast<double>(s.solver.output_stride); });
        add({"x1_m", D::length, "m", "upstream path-loss point (default 0.1 L)"},
            [](RunSetup& s, double v) { s.report_options.x1 = v; },
            [](const RunSetup& s) { return s.report_options.x1.value_or(unset); });
        add({"x2_m", D::length, "m", "downstream path-loss point (default 0.9 L)"},
            [](RunSetup& s, double v) { s.report_options.x2 = v; },
            [](const RunSetup& s) { return s.report_options.x2.value_or(unset); });
        add({"t_eval_s", D::time, "s", "path-loss evaluation time (default t50)"},
            [](RunSetup& s, double v) { s.report_options.t_eval = v; },
            [](const RunSetup& s) { return s.report_options.t_eval.value_or(unset); });
        // Bergman minimal model; rates are stored per minute, glucose in mg/dL.
        add({"bergman_p1", D::rate, "1/min", "glucose effectiveness"},
            [](RunSetup& s, double v) { s.bergman.p1 = v * 60.0; }, [](const RunSetup& s) { return s.bergman.p1 / 60.0; });
        add({"bergman_p2", D::rate, "1/min", "remote insulin decay"},
            [](RunSetup& s, double v) { s.bergman.p2 = v * 60.0; }, [](const RunSetup& s) { return s.bergman.p2 / 60.0; });
        add({"bergman_p3", D::dimensionless, "", "insulin action gain [1/(min^2 uU/mL)]"},
            [](RunSetup& s, double v) { s.bergman.p3 = v; }, [](const RunSetup& s) { return s.bergman.p3; });
        add({"bergman_n", D::rate, "1/min", "insulin clearance"},
            [](RunSetup& s, double v) { s.bergman.n = v * 60.0; }, [](const RunSetup& s) { return s.bergman.n / 60.0; });
        add({"bergman_gamma_beta", D::dimensionless, "", "insulin secretion gain [uU/mL min^-2 (mg/dL)^-1]"},
            [](RunSetup& s, double v) { s.bergman.gamma_beta = v; },
            [](const RunSetup& s) { return s.bergman.gamma_beta; });
        add({"bergman_h", D::concentration, "mg/dL", "insulin secretion threshold"},
            [](RunSetup& s, double v) { s.bergman.h = v / units::mg_dl_to_kg_m3; },
            [](const RunSetup& s) { return s.bergman.h * units::mg_dl_to_kg_m3; });
        add({"bergman_G_b", D::concentration, "mg/dL", "basal plasma glucose"},
            [](RunSetup& s, double v) { s.bergman.G_b = v / units::mg_dl_to_kg_m3; },
            [](const RunSetup& s) { return s.bergman.G_b * units::mg_dl_to_kg_m3; });
        add({"bergman_I_b", D::dimensionless, "", "basal plasma insulin [uU/mL]"},
            [](RunSetup& s, double v) { s.bergman.I_b = v; }, [](const RunSetup& s) { return s.bergman.I_b; });
        add({"bergman_V_G", D::volume, "dL", "glucose distribution volume"},
            [](RunSetup& s, double v) { s.bergman.V_G = v / 1e-4; }, [](const RunSetup& s) { return s.bergman.V_G * 1e-4; });
        return t;
    }();
    return table;
}

const Entry* find_entry(std::string_view name) noexcept {
    for (const auto& e : entries()) {
        if (e.info.name == name) return &e;
    }
    return nullptr;
}

constexpr std::string_view string_options[] = {"injection", "radius_mode", "units", "outlet",
                                               "out",       "analytic",    "clamp_analytic"};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string_view key) {
    std::string k(trim(key));
    while (!k.empty() && k.front() == '-') k.erase(k.begin());
    for (char& c : k) {
        if (c == '-') c = '_';
    }
    return k;
}

bool parse_bool(std::string_view v, std::string_view key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(fmt::format("{}: expected a boolean (got '{}')", key, v));
}

void set_string_option(RunSetup& s, std::string_view key, std::string_view v) {
    if (key == "injection") {
        s.solver.injection = parse_injection_profile(v);
    } else if (key == "radius_mode") {
        s.radius = parse_radius_mode(v);
    } else if (key == "units") {
        s.units = parse_output_units(v);
    } else if (key == "outlet") {
        s.solver.outlet = parse_outlet_boundary(v);
    } else if (key == "out") {
        if (v.empty()) throw ConfigError("out: empty output directory");
        s.out_dir = std::string(v);
    } else if (key == "analytic") {
        s.analytic = parse_bool(v, key);
    } else if (key == "clamp_analytic") {
        s.clamp_analytic = parse_bool(v, key);
    }
}

}  // namespace

const std::vector<ParameterInfo>& parameter_registry() {
    static const std::vector<ParameterInfo> infos = [] {
        std::vector<ParameterInfo> v;
        for (const auto& e : entries()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

const ParameterInfo* find_parameter(std::string_view name) noexcept {
    const Entry* e = find_entry(name);
    return e ? &e->info : nullptr;
}

bool is_string_option(std::string_view name) noexcept {
    for (auto opt : string_options) {
        if (opt == name) return true;
    }
    return false;
}

double to_si(Dimension dim, double value, std::string_view unit) {
    for (const auto& [name, factor] : unit_table(dim)) {
        if (name == unit) return value * factor;
    }
    std::string known;
    for (const auto& [name, factor] : unit_table(dim)) {
        if (!known.empty()) known += ", ";
        known += name.empty() ? "<none>" : std::string(name);
    }
    throw ConfigError(fmt::format("unit '{}' not valid here (accepted: {})", unit, known));
}

void set_parameter(RunSetup& setup, std::string_view name, double value, std::string_view unit) {
    const Entry* e = find_entry(name);
    if (!e) throw ConfigError(fmt::format("unknown parameter '{}'", name));
    if (!std::isfinite(value)) throw ParameterError(std::string(name), "value must be finite");
    const std::string_view u = unit.empty() ? e->info.flag_unit : unit;
    try {
        e->set_si(setup, to_si(e->info.dimension, value, u));
    } catch (const ConfigError& err) {
        throw ConfigError(fmt::format("{}: {}", name, err.what()));
    }
}

double get_parameter(const RunSetup& setup, std::string_view name) {
    const Entry* e = find_entry(name);
    if (!e) throw ConfigError(fmt::format("unknown parameter '{}'", name));
    return e->get_si(setup) / to_si(e->info.dimension, 1.0, e->info.flag_unit);
}

void apply_assignment(RunSetup& setup, std::string_view key, std::string_view raw) {
    const std::string name = normalize_key(key);
    const std::string_view value = trim(raw);
    if (is_string_option(name)) {
        set_string_option(setup, name, value);
        return;
    }
    if (!find_entry(name)) throw ConfigError(fmt::format("unknown parameter '{}'", name));
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
    if (ec != std::errc{}) throw ConfigError(fmt::format("{}: cannot parse a number from '{}'", name, value));
    const std::string_view unit = trim(value.substr(static_cast<std::size_t>(ptr - value.data())));
    set_parameter(setup, name, number, unit);
}

void apply_config_file(RunSetup& setup, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'name = value [unit]'", path.string(), lineno));
        }
        try {
            apply_assignment(setup, view.substr(0, eq), view.substr(eq + 1));
        } catch (const std::exception& e) {
            throw ConfigError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        }
    }
}

void validate(const RunSetup& setup) {
    validate(setup.physiology);
    validate(setup.kinetics);
    validate(setup.meal);
    validate(setup.bergman);
    if (!(setup.solver.end_time >= 0.0)) throw ParameterError("end_hours", "must be >= 0");
    if (setup.solver.cell_count < min_cell_count) {
        throw ParameterError("cells", fmt::format("need at least {} cells", min_cell_count));
    }
    if (!(setup.solver.output_interval > 0.0)) throw ParameterError("output_interval_s", "must be > 0");
}

nlohmann::json resolved_parameters(const RunSetup& setup) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& e : entries()) {
        const double v = get_parameter(setup, e.info.name);
        j[std::string(e.info.name)] = std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
    }
    j["injection"] = std::string(to_string(setup.solver.injection));
    j["radius_mode"] = std::string(to_string(setup.radius));
    j["units"] = std::string(to_string(setup.units));
    j["outlet"] = std::string(to_string(setup.solver.outlet));
    j["out"] = setup.out_dir;
    j["analytic"] = setup.analytic;
    j["clamp_analytic"] = setup.clamp_analytic;
    return j;
}

void apply_resolved_parameters(RunSetup& setup, const nlohmann::json& params) {
    for (const auto& [key, value] : params.items()) {
        if (value.is_null()) continue;
        if (value.is_boolean()) {
            apply_assignment(setup, key, value.get<bool>() ? "true" : "false");
        } else if (value.is_string()) {
            apply_assignment(setup, key, value.get<std::string>());
        } else if (value.is_number()) {
            set_parameter(setup, key, value.get<double>());
        } else {
            throw ConfigError(fmt::format("parameter '{}' has an unsupported JSON type", key));
        }
    }
}

RunResult run_setup(const RunSetup& setup) {
    validate(setup);
    return run(setup.meal, setup.physiology, setup.kinetics, setup.solver, setup.radius, setup.bergman);
}

}  // namespace gi_channel

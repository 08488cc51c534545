#include "gi_channel/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "gi_channel/errors.hpp"
#include "gi_channel/io.hpp"

namespace gi_channel {

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double w = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        if (scale == AxisScale::log) {
            v[i] = std::exp(std::log(min) + w * (std::log(max) - std::log(min)));
        } else {
            v[i] = min + w * (max - min);
        }
    }
    // pin the end points against rounding
    if (count > 0) {
        v.front() = min;
        v.back() = max;
    }
    return v;
}

namespace {

std::string raw_value(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return format_number(v.get<double>());
    throw ConfigError(fmt::format("fixed parameter '{}' must be a number or string", key));
}

}  // namespace

TrendDirection parse_trend_direction(std::string_view name) {
    if (name == "increasing") return TrendDirection::increasing;
    if (name == "decreasing") return TrendDirection::decreasing;
    throw ConfigError(fmt::format("unknown trend direction '{}'", name));
}

SweepSpec parse_sweep_spec(const nlohmann::json& j) {
    SweepSpec spec;
    try {
        if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object");
        if (!j.contains("axes") || !j.at("axes").is_array()) throw ConfigError("sweep spec needs an 'axes' array");
        for (const auto& a : j.at("axes")) {
            SweepAxis axis;
            axis.name = a.at("name").get<std::string>();
            axis.min = a.at("min").get<double>();
            axis.max = a.at("max").get<double>();
            axis.count = a.at("count").get<std::size_t>();
            const std::string scale = a.value("scale", std::string("linear"));
            if (scale == "linear") {
                axis.scale = AxisScale::linear;
            } else if (scale == "log") {
                axis.scale = AxisScale::log;
            } else {
                throw ConfigError(fmt::format("axis '{}': unknown scale '{}'", axis.name, scale));
            }
            spec.axes.push_back(std::move(axis));
        }
        if (j.contains("fixed")) {
            for (const auto& [k, v] : j.at("fixed").items()) spec.fixed.emplace_back(k, raw_value(v, k));
        }
        if (j.contains("outputs")) spec.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("trends")) {
            for (const auto& t : j.at("trends")) {
                spec.trends.push_back(TrendSpec{t.at("axis").get<std::string>(), t.at("output").get<std::string>(),
                                                parse_trend_direction(t.at("direction").get<std::string>())});
            }
        }
        spec.max_points = j.value("max_points", spec.max_points);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("sweep spec: {}", e.what()));
    }
    validate(spec);
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) { return parse_sweep_spec(read_json(path)); }

nlohmann::json to_json(const SweepSpec& spec) {
    nlohmann::json j;
    j["axes"] = nlohmann::json::array();
    for (const auto& a : spec.axes) {
        j["axes"].push_back({{"name", a.name},
                             {"min", a.min},
                             {"max", a.max},
                             {"count", a.count},
                             {"scale", a.scale == AxisScale::log ? "log" : "linear"}});
    }
    j["fixed"] = nlohmann::json::object();
    for (const auto& [k, v] : spec.fixed) j["fixed"][k] = v;
    j["outputs"] = spec.outputs;
    j["trends"] = nlohmann::json::array();
    for (const auto& t : spec.trends) {
        j["trends"].push_back({{"axis", t.axis},
                               {"output", t.output},
                               {"direction", t.direction == TrendDirection::increasing ? "increasing" : "decreasing"}});
    }
    j["max_points"] = spec.max_points;
    return j;
}

std::size_t point_count(const SweepSpec& spec) {
    std::size_t n = 1;
    for (const auto& a : spec.axes) {
        if (a.count != 0 && n > spec.max_points / a.count + 1) return spec.max_points + 1;
        n *= a.count;
    }
    return n;
}

void validate(const SweepSpec& spec) {
    if (spec.axes.empty()) throw ConfigError("sweep spec has no axes");
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const auto& a = spec.axes[i];
        if (!find_parameter(a.name)) throw ConfigError(fmt::format("unknown sweep axis '{}'", a.name));
        for (std::size_t k = 0; k < i; ++k) {
            if (spec.axes[k].name == a.name) throw ConfigError(fmt::format("duplicate sweep axis '{}'", a.name));
        }
        if (a.count < 2) throw ConfigError(fmt::format("axis '{}': count must be >= 2", a.name));
        if (!(a.min < a.max)) throw ConfigError(fmt::format("axis '{}': min must be < max", a.name));
        if (a.scale == AxisScale::log && !(a.min > 0.0)) {
            throw ConfigError(fmt::format("axis '{}': log scale needs min > 0", a.name));
        }
    }
    const auto& names = report_output_names();
    for (const auto& o : spec.outputs) {
        if (std::find(names.begin(), names.end(), o) == names.end()) {
            throw ConfigError(fmt::format("unknown sweep output '{}'", o));
        }
    }
    for (const auto& t : spec.trends) {
        const bool axis_ok = std::any_of(spec.axes.begin(), spec.axes.end(), [&](const auto& a) { return a.name == t.axis; });
        if (!axis_ok) throw ConfigError(fmt::format("trend axis '{}' is not a sweep axis", t.axis));
        if (std::find(names.begin(), names.end(), t.output) == names.end()) {
            throw ConfigError(fmt::format("unknown trend output '{}'", t.output));
        }
    }
    const std::size_t n = point_count(spec);
    if (n > spec.max_points) {
        throw ConfigError(fmt::format("sweep has more than the cap of {} grid points", spec.max_points));
    }
}

std::size_t SweepTable::succeeded() const noexcept {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.report.has_value(); }));
}

std::size_t sweep_threads_from_env() {
    const char* env = std::getenv("GI_CHANNEL_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1;
    return static_cast<std::size_t>(v);
}

namespace {

SweepRow run_point(const SweepSpec& spec, const RunSetup& base, std::vector<double> values) {
    SweepRow row{.axis_values = std::move(values), .report = std::nullopt, .error = {}};
    try {
        RunSetup setup = base;
        for (const auto& [k, v] : spec.fixed) apply_assignment(setup, k, v);
        for (std::size_t a = 0; a < spec.axes.size(); ++a) set_parameter(setup, spec.axes[a].name, row.axis_values[a]);
        const RunResult r = run_setup(setup);
        row.report = report(r, setup.report_options);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, const RunSetup& base, std::size_t threads) {
    validate(spec);
    SweepTable table;
    std::vector<std::vector<double>> axis_values;
    for (const auto& a : spec.axes) {
        table.axis_names.push_back(a.name);
        axis_values.push_back(a.values());
    }

    const std::size_t n = point_count(spec);
    std::vector<std::vector<double>> points(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t rem = idx;
        std::vector<double> p(spec.axes.size());
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            p[a] = axis_values[a][rem % spec.axes[a].count];
            rem /= spec.axes[a].count;
        }
        points[idx] = std::move(p);
    }

    table.rows.resize(n);
    if (threads == 0) threads = sweep_threads_from_env();
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) table.rows[i] = run_point(spec, base, points[i]);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) table.rows[i] = run_point(spec, base, points[i]);
        });
    }
    pool.clear();
    return table;
}

const std::vector<std::string>& report_output_names() {
    static const std::vector<std::string> names{
        "t50",           "delay",           "benchmark",          "path_loss_starch_db",
        "path_loss_glucose_db", "peak_si_glucose", "peak_blood_glucose", "time_to_blood_peak",
        "time_to_blood_restabilize", "mass_audit_residual", "absorbed_fraction", "digested_fraction",
        "x1",            "x2",              "t_eval"};
    return names;
}

std::optional<double> report_output(const ChannelReport& r, std::string_view name) {
    if (name == "t50") return r.t50;
    if (name == "delay") return r.delay;
    if (name == "benchmark") return r.benchmark;
    if (name == "path_loss_starch_db") return r.path_loss_starch_db;
    if (name == "path_loss_glucose_db") return r.path_loss_glucose_db;
    if (name == "peak_si_glucose") return r.peak_si_glucose;
    if (name == "peak_blood_glucose") return r.peak_blood_glucose;
    if (name == "time_to_blood_peak") return r.time_to_blood_peak;
    if (name == "time_to_blood_restabilize") return r.time_to_blood_restabilize;
    if (name == "mass_audit_residual") return r.mass_audit_residual;
    if (name == "absorbed_fraction") return r.absorbed_fraction;
    if (name == "digested_fraction") return r.digested_fraction;
    if (name == "x1") return r.x1;
    if (name == "x2") return r.x2;
    if (name == "t_eval") return r.t_eval;
    throw ConfigError(fmt::format("unknown report output '{}'", name));
}

TrendResult trend_check(const SweepTable& table, std::string_view axis, std::string_view output,
                        TrendDirection direction) {
    const auto it = std::find(table.axis_names.begin(), table.axis_names.end(), axis);
    if (it == table.axis_names.end()) throw ConfigError(fmt::format("trend axis '{}' absent from table", axis));
    const auto a = static_cast<std::size_t>(it - table.axis_names.begin());

    // group rows by the values of every other axis, then order by this one
    std::map<std::vector<double>, std::vector<std::size_t>> lines;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::vector<double> key = table.rows[i].axis_values;
        key.erase(key.begin() + static_cast<std::ptrdiff_t>(a));
        lines[key].push_back(i);
    }

    TrendResult result;
    for (auto& [key, idx] : lines) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
            return table.rows[l].axis_values[a] < table.rows[r].axis_values[a];
        });
        if (idx.size() < 2) throw ConfigError(fmt::format("trend check needs >= 2 points along '{}'", axis));
        for (std::size_t k = 1; k < idx.size(); ++k) {
            const SweepRow& lo = table.rows[idx[k - 1]];
            const SweepRow& hi = table.rows[idx[k]];
            const auto v_lo = lo.report ? report_output(*lo.report, output) : std::nullopt;
            const auto v_hi = hi.report ? report_output(*hi.report, output) : std::nullopt;
            if (!v_lo || !v_hi) {
                result.violations.push_back({idx[k - 1], idx[k], fmt::format("{} undefined", output)});
                continue;
            }
            const bool ok = direction == TrendDirection::increasing ? *v_hi >= *v_lo : *v_hi <= *v_lo;
            if (!ok) {
                result.violations.push_back(
                    {idx[k - 1], idx[k],
                     fmt::format("{}: {} -> {} as {} goes {} -> {}", output, *v_lo, *v_hi, axis, lo.axis_values[a],
                                 hi.axis_values[a])});
            }
        }
    }
    result.pass = result.violations.empty();
    return result;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table,
                     const std::vector<std::string>& outputs) {
    const std::vector<std::string>& cols = outputs.empty() ? report_output_names() : outputs;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    for (const auto& a : table.axis_names) out << a << ',';
    for (const auto& c : cols) out << c << ',';
    out << "status,error\n";
    for (const auto& row : table.rows) {
        for (double v : row.axis_values) out << format_number(v) << ',';
        for (const auto& c : cols) {
            if (row.report) {
                if (const auto v = report_output(*row.report, c)) out << format_number(*v);
            }
            out << ',';
        }
        std::string err = row.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << (row.report ? "ok" : "failed") << ',' << err << '\n';
    }
}

}  // namespace gi_channel

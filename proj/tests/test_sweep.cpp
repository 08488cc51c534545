#include <doctest.h>

#include <cmath>

#include "gi_channel/errors.hpp"
#include "gi_channel/sweep.hpp"

using namespace gi_channel;

namespace {

RunSetup quick_setup() {
    RunSetup s;
    s.solver.end_time = 1800.0;
    s.solver.cell_count = 69;
    s.solver.couple_blood = false;
    return s;
}

}  // namespace

TEST_CASE("axis values") {
    const SweepAxis lin{.name = "velocity", .min = 1.0, .max = 4.0, .count = 4};
    CHECK(lin.values() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    const SweepAxis lg{.name = "viscosity", .min = 0.01, .max = 10.0, .count = 4, .scale = AxisScale::log};
    const auto v = lg.values();
    CHECK(v.front() == 0.01);
    CHECK(v.back() == 10.0);
    CHECK(v[1] == doctest::Approx(0.1));
}

TEST_CASE("spec validation rejects malformed grids") {
    SweepSpec s;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes = {{.name = "no_such_key", .min = 0.0, .max = 1.0, .count = 2}};
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes = {{.name = "velocity", .min = 1.0, .max = 1.0, .count = 2}};
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes = {{.name = "velocity", .min = 0.0, .max = 1.0, .count = 1}};
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes = {{.name = "velocity", .min = 0.0, .max = 1.0, .count = 2, .scale = AxisScale::log}};
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes = {{.name = "velocity", .min = 1.0, .max = 2.0, .count = 2}, {.name = "velocity", .min = 1.0, .max = 2.0, .count = 2}};
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes = {{.name = "velocity", .min = 1.0, .max = 2.0, .count = 200}, {.name = "viscosity", .min = 0.1, .max = 2.0, .count = 200}};
    s.max_points = 10000;
    CHECK_THROWS_AS(validate(s), ConfigError);
    s.axes.pop_back();
    CHECK_NOTHROW(validate(s));
    CHECK(point_count(s) == 200);
}

TEST_CASE("spec JSON round trip") {
    const auto j = nlohmann::json::parse(R"({
        "axes": [{"name": "vmax_mm_per_min", "min": 10, "max": 30, "count": 3},
                 {"name": "velocity", "min": 1e-6, "max": 1e-3, "count": 4, "scale": "log"}],
        "fixed": {"end_hours": 2, "injection": "uniform"},
        "outputs": ["t50", "peak_si_glucose"],
        "trends": [{"axis": "velocity", "output": "peak_si_glucose", "direction": "decreasing"}]
    })");
    const SweepSpec s = parse_sweep_spec(j);
    REQUIRE(s.axes.size() == 2);
    CHECK(s.axes[1].scale == AxisScale::log);
    CHECK(s.fixed.size() == 2);
    CHECK(s.trends[0].direction == TrendDirection::decreasing);
    const SweepSpec back = parse_sweep_spec(to_json(s));
    CHECK(to_json(back) == to_json(s));
    CHECK_THROWS_AS(parse_sweep_spec(nlohmann::json::parse(R"({"axes": 3})")), ConfigError);
}

TEST_CASE("single-point sweep equals a direct run") {
    SweepSpec s;
    s.axes = {{.name = "vmax_mm_per_min", .min = 20.0, .max = 25.0, .count = 2}};
    const RunSetup base = quick_setup();
    const SweepTable t = run_sweep(s, base, 1);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[1].report);
    RunSetup direct = base;
    set_parameter(direct, "vmax_mm_per_min", 25.0);
    const ChannelReport r = report(run_setup(direct), direct.report_options);
    CHECK(t.rows[1].report->absorbed_fraction == r.absorbed_fraction);
    CHECK(t.rows[1].report->peak_si_glucose == r.peak_si_glucose);
}

TEST_CASE("parallel and sequential sweeps agree exactly") {
    SweepSpec s;
    s.axes = {{.name = "velocity", .min = 1e-4, .max = 3e-4, .count = 3},
              {.name = "khalf_mm", .min = 0.0, .max = 40.0, .count = 2}};
    const RunSetup base = quick_setup();
    const SweepTable a = run_sweep(s, base, 1);
    const SweepTable b = run_sweep(s, base, 4);
    REQUIRE(a.rows.size() == 6);
    CHECK(a.rows[1].axis_values == std::vector<double>{1e-4, 40.0});
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].axis_values == b.rows[i].axis_values);
        REQUIRE(a.rows[i].report);
        REQUIRE(b.rows[i].report);
        CHECK(a.rows[i].report->peak_si_glucose == b.rows[i].report->peak_si_glucose);
        CHECK(a.rows[i].report->absorbed_fraction == b.rows[i].report->absorbed_fraction);
    }
}

TEST_CASE("failed points are recorded, not fatal") {
    SweepSpec s;
    s.axes = {{.name = "viscosity", .min = 1.0, .max = 1000.0, .count = 2}};
    const SweepTable t = run_sweep(s, quick_setup(), 1);
    CHECK(t.rows[0].report.has_value());
    CHECK_FALSE(t.rows[1].report.has_value());
    CHECK(t.rows[1].error.find("viscosity") != std::string::npos);
    CHECK(t.succeeded() == 1);
}

namespace {

SweepTable table_of(std::vector<double> xs, std::vector<std::optional<double>> t50s) {
    SweepTable t;
    t.axis_names = {"half_emptying_min"};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        SweepRow row;
        row.axis_values = {xs[i]};
        ChannelReport r;
        r.t50 = t50s[i];
        row.report = r;
        t.rows.push_back(row);
    }
    return t;
}

}  // namespace

TEST_CASE("trend check") {
    const auto up = table_of({1, 2, 3}, {1.0, 2.0, 3.0});
    CHECK(trend_check(up, "half_emptying_min", "t50", TrendDirection::increasing).pass);
    const auto down = trend_check(up, "half_emptying_min", "t50", TrendDirection::decreasing);
    CHECK_FALSE(down.pass);
    CHECK(down.violations.size() == 2);

    const auto flat = table_of({1, 2, 3}, {5.0, 5.0, 5.0});
    CHECK(trend_check(flat, "half_emptying_min", "t50", TrendDirection::increasing).pass);
    CHECK(trend_check(flat, "half_emptying_min", "t50", TrendDirection::decreasing).pass);

    const auto gap = table_of({1, 2, 3}, {1.0, std::nullopt, 3.0});
    CHECK_FALSE(trend_check(gap, "half_emptying_min", "t50", TrendDirection::increasing).pass);
    CHECK_THROWS_AS(trend_check(up, "velocity", "t50", TrendDirection::increasing), ConfigError);
}

TEST_CASE("report outputs by name") {
    ChannelReport r;
    r.peak_si_glucose = 12.0;
    CHECK(report_output(r, "peak_si_glucose") == 12.0);
    CHECK_FALSE(report_output(r, "t50").has_value());
    CHECK_THROWS_AS(report_output(r, "no_such_output"), ConfigError);
    CHECK(report_output_names().size() > 5);
}

#include <doctest.h>

#include <filesystem>
#include <cstdlib>
#include <fstream>

#include "gi_channel/config.hpp"
#include "gi_channel/errors.hpp"
#include "gi_channel/io.hpp"

using namespace gi_channel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gi_channel_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("parameters are set in flag units and stored in SI") {
    RunSetup s;
    set_parameter(s, "meal_g", 50.0);
    CHECK(s.meal.carb_mass == doctest::Approx(0.05));
    set_parameter(s, "half_emptying_min", 90.0);
    CHECK(s.meal.half_emptying_time == doctest::Approx(5400.0));
    set_parameter(s, "khalf_mm", 18.016, "mg/dL");
    CHECK(s.kinetics.k_half == doctest::Approx(0.18016));
    set_parameter(s, "end_hours", 2.0);
    CHECK(s.solver.end_time == doctest::Approx(7200.0));
    CHECK(get_parameter(s, "vmax_mm_per_min") == doctest::Approx(25.0));
    CHECK_THROWS_AS(set_parameter(s, "nonsense", 1.0), ConfigError);
    CHECK_THROWS_AS(set_parameter(s, "velocity", 1.0, "parsecs"), ConfigError);
}

TEST_CASE("assignments accept dashed keys, units and string options") {
    RunSetup s;
    apply_assignment(s, "si-length", "690 cm");
    CHECK(s.physiology.si_length == doctest::Approx(6.9));
    apply_assignment(s, "injection", "uniform");
    CHECK(s.solver.injection == InjectionProfile::uniform);
    apply_assignment(s, "radius_mode", "molecule");
    CHECK(s.radius == RadiusMode::molecule);
    CHECK_THROWS_AS(apply_assignment(s, "injection", "sideways"), ConfigError);
    CHECK_THROWS_AS(apply_assignment(s, "velocity", "fast"), ConfigError);
}

TEST_CASE("config files") {
    const fs::path dir = scratch("config");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# slower transit\nvelocity = 1e-4 m/s\nhalf_emptying_min = 45   # stomach\n\nkhalf_mm = 0\n";
    }
    RunSetup s;
    apply_config_file(s, dir / "run.cfg");
    CHECK(s.physiology.mean_velocity == doctest::Approx(1e-4));
    CHECK(s.meal.half_emptying_time == doctest::Approx(2700.0));
    CHECK(s.kinetics.k_half == 0.0);

    {
        std::ofstream f(dir / "bad.cfg");
        f << "velocity 1e-4\n";
    }
    CHECK_THROWS_AS(apply_config_file(s, dir / "bad.cfg"), ConfigError);
    CHECK_THROWS_AS(apply_config_file(s, dir / "missing.cfg"), ConfigError);
}

TEST_CASE("resolved parameters round trip") {
    RunSetup a;
    set_parameter(a, "viscosity", 0.5);
    set_parameter(a, "cells", 345.0);
    apply_assignment(a, "outlet", "zero_flux");
    RunSetup b;
    apply_resolved_parameters(b, resolved_parameters(a));
    CHECK(resolved_parameters(b) == resolved_parameters(a));
    CHECK(b.physiology.viscosity == a.physiology.viscosity);
    CHECK(b.solver.cell_count == 345);
    CHECK(b.solver.outlet == OutletBoundary::zero_flux);
}

TEST_CASE("setup validation") {
    RunSetup s;
    CHECK_NOTHROW(validate(s));
    s.physiology.viscosity = 1e-6;
    CHECK_THROWS_AS(validate(s), ParameterError);
}

TEST_CASE("number formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.5, 0.0}) {
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("hashing and JSON files") {
    const fs::path dir = scratch("hash");
    {
        std::ofstream f(dir / "abc.txt", std::ios::binary);
        f << "abc";
    }
    CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const nlohmann::json j = {{"a", 1}, {"b", {1.5, 2.5}}};
    write_json(dir / "x.json", j);
    CHECK(read_json(dir / "x.json") == j);
    const nlohmann::json m = make_manifest("simulate", j, {dir / "abc.txt"});
    CHECK(m.at("tool") == "gi_channel");
    CHECK(m.at("parameters") == j);
    CHECK(m.at("input_files").size() == 1);
}

TEST_CASE("report JSON uses snake case keys and nulls") {
    ChannelReport r;
    r.t50 = 7200.0;
    r.delay = 1800.0;
    const nlohmann::json j = to_json(r);
    for (const char* key : {"path_loss_starch_db", "path_loss_glucose_db", "t50", "delay", "benchmark", "peak_si_glucose",
                            "peak_blood_glucose", "time_to_blood_peak", "time_to_blood_restabilize",
                            "mass_audit_residual"}) {
        CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j.at("path_loss_starch_db").is_null());
    CHECK(j.at("delay") == 1800.0);
}

TEST_CASE("run directory round trip") {
    const fs::path dir = scratch("rundir");
    RunSetup s;
    s.solver.end_time = 3600.0;
    s.solver.cell_count = 138;
    const RunResult r = run_setup(s);
    write_fields_csv(dir / fields_file, r, OutputUnits::paper);
    write_series_csv(dir / series_file, r);
    write_json(dir / manifest_file, make_manifest("simulate", resolved_parameters(s), {}));

    RunSetup back;
    const RunResult rr = read_run_directory(dir, &back);
    CHECK(back.solver.cell_count == 138);
    REQUIRE(rr.snapshots.size() == r.snapshots.size());
    const auto& a = r.snapshots.back();
    const auto& b = rr.snapshots.back();
    CHECK(b.time == doctest::Approx(a.time));
    CHECK(b.absorbed_mass == doctest::Approx(a.absorbed_mass).epsilon(1e-12));
    for (std::size_t i = 0; i < a.glucose.values.size(); ++i) {
        CHECK(b.glucose.values[i] == doctest::Approx(a.glucose.values[i]).epsilon(1e-12));
    }
}

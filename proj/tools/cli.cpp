#include "cli.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gi_channel/analytic.hpp"
#include "gi_channel/config.hpp"
#include "gi_channel/errors.hpp"
#include "gi_channel/io.hpp"
#include "gi_channel/sweep.hpp"
#include "gi_channel/verification.hpp"

namespace gi_channel::cli {

namespace fs = std::filesystem;

namespace {

/// Flags that mirror registry/config keys. Values are in the key's flag unit.
struct ParameterFlags {
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    std::vector<std::string> sets;
    std::string config;

    void attach(CLI::App& app) {
        const std::pair<const char*, const char*> flags[] = {
            {"--meal-g", "consumed carbohydrate [g]"},
            {"--half-emptying-min", "gastric half-emptying time [min]"},
            {"--velocity", "mean digesta velocity [m/s]"},
            {"--viscosity", "dynamic viscosity [Pa s]"},
            {"--vmax-mm-per-min", "Michaelis-Menten V_max [mM/min]"},
            {"--khalf-mm", "half-saturation concentration [mM]"},
            {"--cells", "finite-volume cells along the tract"},
            {"--end-hours", "simulated horizon [h]"},
            {"--injection", "gastric inflow profile: inlet|uniform"},
            {"--radius-mode", "radius in the absorption rate: tube|molecule"},
            {"--units", "CSV concentration units: paper|si"},
            {"--out", "output directory"},
        };
        for (const auto& [flag, help] : flags) {
            std::string key = std::string(flag).substr(2);
            for (char& c : key) {
                if (c == '-') c = '_';
            }
            options.emplace_back(key, app.add_option(flag, values[key], help));
        }
        app.add_option("--config", config, "flat 'name = value unit' config file");
        app.add_option("--set", sets, "override any config key: name=value [unit]");
    }

    void apply(RunSetup& setup) const {
        if (!config.empty()) apply_config_file(setup, config);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects name=value (got '{}')", s));
            apply_assignment(setup, s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) apply_assignment(setup, key, values.at(key));
        }
    }

    std::vector<fs::path> inputs() const {
        if (config.empty()) return {};
        return {fs::path(config)};
    }
};

void print_report(std::ostream& out, const ChannelReport& r) {
    const auto hours = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.3f} h", *v / 3600.0) : std::string("n/a");
    };
    const auto db = [](const std::optional<double>& v) { return v ? fmt::format("{:.3f} dB", *v) : std::string("n/a"); };
    out << fmt::format("t50                 {}\n", hours(r.t50));
    out << fmt::format("delay               {}\n", hours(r.delay));
    out << fmt::format("absorbed fraction   {:.4f}\n", r.absorbed_fraction);
    out << fmt::format("digested fraction   {:.4f}\n", r.digested_fraction);
    out << fmt::format("path loss starch    {}\n", db(r.path_loss_starch_db));
    out << fmt::format("path loss glucose   {}\n", db(r.path_loss_glucose_db));
    out << fmt::format("peak SI glucose     {:.3f} mg/dL\n", r.peak_si_glucose);
    out << fmt::format("peak blood glucose  {:.3f} mg/dL at {:.3f} h\n", r.peak_blood_glucose, r.time_to_blood_peak / 3600.0);
    out << fmt::format("mass audit residual {:.3e}\n", r.mass_audit_residual);
    for (const auto& n : r.notes) out << "note: " << n << '\n';
}

int cmd_simulate(const ParameterFlags& flags, bool analytic_flag, bool no_clamp, std::ostream& out, std::ostream& err) {
    RunSetup setup;
    try {
        flags.apply(setup);
        if (analytic_flag) setup.analytic = true;
        if (no_clamp) setup.clamp_analytic = false;
        validate(setup);
    } catch (const std::exception& e) {
        err << "simulate: invalid configuration: " << e.what() << '\n';
        return exit_invalid_input;
    }

    std::optional<RunResult> result;
    ChannelReport rep;
    std::optional<AnalyticChannelParams> analytic;
    try {
        result = run_setup(setup);
        rep = report(*result, setup.report_options);
        if (setup.analytic) {
            analytic = calibrate_from_numeric(setup.meal, setup.physiology, setup.kinetics, setup.solver, setup.radius);
        }
    } catch (const NumericalError& e) {
        err << "simulate: numerical failure (" << e.guard() << "): " << e.what() << '\n';
        return exit_numerical_failure;
    } catch (const MetricError& e) {
        err << "simulate: " << e.what() << '\n';
        return exit_invalid_input;
    }

    const fs::path dir(setup.out_dir);
    try {
        fs::create_directories(dir);
        write_fields_csv(dir / fields_file, *result, setup.units, analytic, setup.clamp_analytic);
        write_series_csv(dir / series_file, *result);
        write_json(dir / report_file, to_json(rep));
        nlohmann::json manifest = make_manifest("simulate", resolved_parameters(setup), flags.inputs());
        manifest["derived"] = {{"diffusion_m2_s", result->transport.diffusion},
                               {"mass_transfer_m_s", result->transport.mass_transfer},
                               {"absorption_rate_1_s", result->transport.absorption_rate},
                               {"dt_s", result->dt},
                               {"steps", result->steps}};
        if (analytic) {
            manifest["derived"]["analytic_f_s"] = analytic->f_s;
            manifest["derived"]["analytic_f_g"] = analytic->f_g;
        }
        write_json(dir / manifest_file, manifest);
    } catch (const std::exception& e) {
        err << "simulate: " << e.what() << '\n';
        return exit_invalid_input;
    }
    out << fmt::format("simulated {:.2f} h on {} cells (dt = {:.4g} s, {} steps) -> {}\n", setup.solver.end_time / 3600.0,
                       setup.solver.cell_count, result->dt, result->steps, dir.string());
    print_report(out, rep);
    return exit_ok;
}

int cmd_sweep(const ParameterFlags& flags, const std::string& spec_path, std::size_t threads, std::ostream& out,
              std::ostream& err) {
    RunSetup base;
    SweepSpec spec;
    try {
        flags.apply(base);
        spec = load_sweep_spec(spec_path);
        RunSetup check = base;
        for (const auto& [k, v] : spec.fixed) apply_assignment(check, k, v);
        validate(check);
    } catch (const std::exception& e) {
        err << "sweep: invalid spec: " << e.what() << '\n';
        return exit_invalid_input;
    }

    const SweepTable table = run_sweep(spec, base, threads);
    const fs::path dir(base.out_dir);
    nlohmann::json trends = nlohmann::json::array();
    try {
        fs::create_directories(dir);
        write_sweep_csv(dir / "sweep.csv", table, spec.outputs);
        for (const auto& t : spec.trends) {
            const TrendResult r = trend_check(table, t.axis, t.output, t.direction);
            const char* dir_name = t.direction == TrendDirection::increasing ? "increasing" : "decreasing";
            out << fmt::format("[{}] {} {} along {}\n", r.pass ? "PASS" : "FAIL", t.output, dir_name, t.axis);
            nlohmann::json v = nlohmann::json::array();
            for (const auto& viol : r.violations) {
                out << "       " << viol.reason << '\n';
                v.push_back({{"from_row", viol.from_row}, {"to_row", viol.to_row}, {"reason", viol.reason}});
            }
            trends.push_back({{"axis", t.axis}, {"output", t.output}, {"direction", dir_name}, {"pass", r.pass}, {"violations", v}});
        }
        std::vector<fs::path> inputs = flags.inputs();
        inputs.emplace_back(spec_path);
        nlohmann::json manifest = make_manifest("sweep", resolved_parameters(base), inputs);
        manifest["sweep_spec"] = to_json(spec);
        manifest["points"] = table.rows.size();
        manifest["succeeded"] = table.succeeded();
        manifest["trends"] = trends;
        write_json(dir / manifest_file, manifest);
    } catch (const std::exception& e) {
        err << "sweep: " << e.what() << '\n';
        return exit_invalid_input;
    }
    out << fmt::format("{} of {} grid points succeeded -> {}\n", table.succeeded(), table.rows.size(),
                       (dir / "sweep.csv").string());
    return table.succeeded() > 0 ? exit_ok : exit_numerical_failure;
}

int cmd_verify(double dt_factor, std::ostream& out) {
    const auto checks = run_verification(VerifyOptions{.dt_factor = dt_factor});
    bool all = true;
    for (const auto& c : checks) {
        out << fmt::format("[{}] {:<44} {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
        all = all && c.pass;
    }
    out << (all ? "all checks passed\n" : "verification FAILED\n");
    return all ? exit_ok : exit_check_failed;
}

int cmd_report(const std::string& dir, std::optional<double> x1, std::optional<double> x2, std::optional<double> t_eval,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
    try {
        RunSetup setup;
        const RunResult r = read_run_directory(dir, &setup);
        ReportOptions opts = setup.report_options;
        if (x1) opts.x1 = *x1;
        if (x2) opts.x2 = *x2;
        if (t_eval) opts.t_eval = *t_eval;
        const ChannelReport rep = report(r, opts);
        const nlohmann::json j = to_json(rep);
        if (out_path.empty()) {
            out << j.dump(2) << '\n';
        } else {
            write_json(out_path, j);
            print_report(out, rep);
        }
    } catch (const std::exception& e) {
        err << "report: " << e.what() << '\n';
        return exit_invalid_input;
    }
    return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Starch digestion as a molecular-communication channel"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "run one simulation and write CSV/JSON outputs");
    ParameterFlags sim_flags;
    sim_flags.attach(*simulate);
    bool analytic = false;
    bool no_clamp = false;
    simulate->add_flag("--analytic", analytic, "also write the closed-form profiles (mode = analytic)");
    simulate->add_flag("--no-clamp-analytic", no_clamp, "keep negative closed-form values");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON spec");
    ParameterFlags sweep_flags;
    sweep_flags.attach(*sweep);
    std::string spec_path;
    std::size_t threads = 0;
    sweep->add_option("spec", spec_path, "sweep spec (JSON)")->required();
    sweep->add_option("--threads", threads, "worker threads (default: GI_CHANNEL_THREADS or 1)");

    auto* verify = app.add_subcommand("verify", "run the built-in verification battery");
    double dt_factor = 1.0;
    verify->add_option("--inject-dt-factor", dt_factor)->group("");

    auto* rep = app.add_subcommand("report", "recompute the channel report from a simulate output directory");
    std::string dir;
    std::optional<double> x1;
    std::optional<double> x2;
    std::optional<double> t_eval;
    std::string report_out;
    rep->add_option("dir", dir, "directory written by simulate")->required();
    rep->add_option("--x1", x1, "upstream point [m]");
    rep->add_option("--x2", x2, "downstream point [m]");
    rep->add_option("--t-eval", t_eval, "evaluation time [s]");
    rep->add_option("--out", report_out, "write the report JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid_input;
    }

    if (simulate->parsed()) return cmd_simulate(sim_flags, analytic, no_clamp, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, spec_path, threads, out, err);
    if (verify->parsed()) return cmd_verify(dt_factor, out);
    if (rep->parsed()) return cmd_report(dir, x1, x2, t_eval, report_out, out, err);
    return exit_invalid_input;
}

}  // namespace gi_channel::cli

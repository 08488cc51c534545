// Acceptance gate: one line per criterion, tolerances fixed here.
// usage: gi_channel_acceptance <path-to-gi_channel> <sweep-spec> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "gi_channel/channel.hpp"
#include "gi_channel/config.hpp"
#include "gi_channel/errors.hpp"
#include "gi_channel/gastric.hpp"
#include "gi_channel/kinetics.hpp"
#include "gi_channel/metrics.hpp"
#include "gi_channel/sweep.hpp"
#include "gi_channel/verification.hpp"

using namespace gi_channel;
namespace fs = std::filesystem;

namespace {

constexpr double gastric_closed_tol = 1e-6;
constexpr double gastric_step_tol = 1e-4;
constexpr double oracle_l2_max = 0.05;
constexpr double order_min = 0.8;
constexpr double order_max = 1.2;
constexpr double audit_max = 5e-3;
constexpr double absorbed_target = 0.9;
constexpr double window_start_h = 2.0;
constexpr double window_end_h = 4.0;
constexpr double excursion_min = 10.0;
constexpr double excursion_max = 60.0;
constexpr double trend_horizon_h = 12.0;
constexpr int property_cases = 1000;

struct Outcome {
    bool pass;
    std::string detail;
    std::vector<std::string> info;
};

struct Criterion {
    std::string id;
    std::string title;
    double time_limit;  // s
    std::function<Outcome()> check;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome gastric_exactness() {
    const MealSpec meal{.carb_mass = 0.1, .half_emptying_time = 3600.0};
    const double g = gamma_from_half_time(meal.half_emptying_time);
    const double c1 = rel(stomach_mass_closed_form(meal.carb_mass, g, 3600.0), 0.05);
    const double c2 = rel(stomach_mass_closed_form(meal.carb_mass, g, 7200.0), 0.025);

    // step at the channel's automatic dt for the default physiology
    const PhysiologyParams p = default_params();
    const TransportCoefficients t = transport_coefficients(p);
    const double dt_target = stability_dt(Grid1D(p.si_length, 690), p.mean_velocity, t.diffusion, t.absorption_rate, g);
    const auto n = static_cast<int>(std::ceil(3600.0 / dt_target));
    const double dt = 3600.0 / n;
    GastricState s = initial_gastric_state(meal);
    for (int i = 0; i < n; ++i) s = gastric_step(s, dt);
    const double s1 = rel(s.mass, 0.05);
    for (int i = 0; i < n; ++i) s = gastric_step(s, dt);
    const double s2 = rel(s.mass, 0.025);

    const bool ok = c1 <= gastric_closed_tol && c2 <= gastric_closed_tol && s1 <= gastric_step_tol && s2 <= gastric_step_tol;
    return {ok, fmt::format("closed form rel err {:.1e}/{:.1e} (tol {:.0e}), stepped {:.1e}/{:.1e} (tol {:.0e})", c1, c2,
                            gastric_closed_tol, s1, s2, gastric_step_tol),
            {}};
}

Outcome oracle_equivalence() {
    const OracleProblem prob = default_oracle_problem();
    std::vector<double> dx, err;
    double l2_at_1cm = 0.0;
    for (std::size_t n : {172u, 345u, 690u, 1380u}) {
        const OracleComparison c = compare_with_oracle(prob, n);
        dx.push_back(c.dx);
        err.push_back(c.relative_l2);
        if (n == 690) l2_at_1cm = c.relative_l2;
    }
    const double order = observed_order(dx, err);
    const bool ok = l2_at_1cm <= oracle_l2_max && order >= order_min && order <= order_max;
    return {ok,
            fmt::format("L2 at dx = 1 cm {:.4f} (max {}), observed order {:.3f} (range [{}, {}])", l2_at_1cm,
                        oracle_l2_max, order, order_min, order_max),
            {fmt::format("errors at dx = 4/2/1/0.5 cm: {:.4f} {:.4f} {:.4f} {:.4f}", err[0], err[1], err[2], err[3])}};
}

const RunResult& default_run() {
    static const RunResult r = run(default_meal(), default_params(), default_kinetics(), SolverConfig{});
    return r;
}

Outcome mass_audit() {
    const RunResult& r = default_run();
    double worst = 0.0;
    for (const auto& s : r.snapshots) worst = std::max(worst, mass_audit_residual(s, r.grid, r.area, r.meal_mass));
    return {worst <= audit_max, fmt::format("worst residual over {} snapshots {:.2e} (max {})", r.snapshots.size(), worst, audit_max),
            {}};
}

/// First time a mass series reaches `target`, linearly interpolated; negative if never.
double first_crossing(const RunResult& r, double target, double SimulationState::*field) {
    for (std::size_t i = 1; i < r.snapshots.size(); ++i) {
        const auto& a = r.snapshots[i - 1];
        const auto& b = r.snapshots[i];
        if (b.*field >= target) {
            const double w = (target - a.*field) / (b.*field - a.*field);
            return a.time + w * (b.time - a.time);
        }
    }
    return -1.0;
}

Outcome timescale() {
    const RunResult& r = default_run();
    const double target = absorbed_target * r.meal_mass;
    const double t_abs = first_crossing(r, target, &SimulationState::absorbed_mass);
    const bool ok = t_abs >= window_start_h * 3600.0 && t_abs <= window_end_h * 3600.0;
    const double final_abs = r.snapshots.back().absorbed_mass / r.meal_mass;

    Outcome o{ok,
              t_abs < 0 ? fmt::format("absorbed mass never reaches {:.0f}% in {:.0f} h (final {:.1f}%), window [{}, {}] h",
                                      100 * absorbed_target, r.snapshots.back().time / 3600.0, 100 * final_abs,
                                      window_start_h, window_end_h)
                        : fmt::format("{:.0f}% absorbed at {:.3f} h, window [{}, {}] h", 100 * absorbed_target,
                                      t_abs / 3600.0, window_start_h, window_end_h),
              {}};
    const double t_dig = first_crossing(r, target, &SimulationState::produced_glucose_mass);
    if (t_dig > 0) {
        o.info.push_back(fmt::format("for reference: {:.0f}% of the meal is hydrolysed to glucose by {:.3f} h",
                                     100 * absorbed_target, t_dig / 3600.0));
    }
    const TransportCoefficients t = transport_coefficients(default_params());
    o.info.push_back(fmt::format("wall absorption time constant 1/K = {:.2f} h", 1.0 / t.absorption_rate / 3600.0));
    return o;
}

Outcome magnitude() {
    const RunResult& r = default_run();
    double peak = r.bergman.G_b;
    double at = 0.0;
    for (const auto& s : r.snapshots) {
        if (s.blood.G > peak) {
            peak = s.blood.G;
            at = s.time;
        }
    }
    const double excursion = peak - r.bergman.G_b;
    const bool ok = excursion >= excursion_min && excursion <= excursion_max;
    return {ok, fmt::format("peak excursion {:.2f} mg/dL at {:.2f} h (range [{}, {}])", excursion, at / 3600.0,
                            excursion_min, excursion_max),
            {}};
}

struct TrendCase {
    SweepAxis axis;
    std::string output;
    TrendDirection direction;
};

Outcome trend_suite() {
    RunSetup base;
    base.solver.end_time = trend_horizon_h * 3600.0;
    const std::vector<TrendCase> cases{
        {{.name = "half_emptying_min", .min = 30, .max = 120, .count = 4}, "delay", TrendDirection::increasing},
        {{.name = "velocity", .min = 1e-6, .max = 1e-3, .count = 4, .scale = AxisScale::log}, "peak_si_glucose",
         TrendDirection::decreasing},
        {{.name = "viscosity", .min = 0.01, .max = 10, .count = 4, .scale = AxisScale::log}, "peak_si_glucose",
         TrendDirection::increasing},
        {{.name = "vmax_mm_per_min", .min = 10, .max = 30, .count = 4}, "path_loss_glucose_db",
         TrendDirection::decreasing},
        {{.name = "velocity", .min = 1e-6, .max = 1e-3, .count = 4, .scale = AxisScale::log}, "path_loss_glucose_db",
         TrendDirection::increasing},
    };

    Outcome o{true, "", {}};
    int passed = 0;
    for (const auto& c : cases) {
        SweepSpec spec;
        spec.axes = {c.axis};
        const SweepTable table = run_sweep(spec, base);
        const TrendResult tr = trend_check(table, c.axis.name, c.output, c.direction);
        std::string values;
        for (const auto& row : table.rows) {
            const auto v = row.report ? report_output(*row.report, c.output) : std::nullopt;
            values += v ? fmt::format(" {:.4g}", *v) : std::string(" n/a");
        }
        o.info.push_back(fmt::format("{} {} {} along {}:{}", tr.pass ? "ok  " : "FAIL", c.output,
                                     c.direction == TrendDirection::increasing ? "increasing" : "decreasing",
                                     c.axis.name, values));
        passed += tr.pass ? 1 : 0;
        o.pass = o.pass && tr.pass;
    }

    // reported only: the half-saturation effect on starch path loss
    SweepSpec khalf;
    khalf.axes = {{.name = "khalf_mm", .min = 0, .max = 40, .count = 4}};
    const SweepTable kt = run_sweep(khalf, base);
    std::string values;
    for (const auto& row : kt.rows) {
        const auto v = row.report ? row.report->path_loss_starch_db : std::nullopt;
        values += v ? fmt::format(" {:.4g}", *v) : std::string(" n/a");
    }
    o.info.push_back("reported only: path_loss_starch_db along khalf_mm:" + values);

    o.detail = fmt::format("{} of {} trends hold ({} h horizon, other parameters at defaults)", passed, cases.size(),
                           trend_horizon_h);
    return o;
}

Outcome property_batteries() {
    std::mt19937_64 rng(20240601);
    int failures = 0;

    const KineticsParams k = default_kinetics();
    std::uniform_real_distribution<double> conc(0.0, 100.0);
    std::vector<double> cs(property_cases);
    for (double& c : cs) c = conc(rng);
    std::sort(cs.begin(), cs.end());
    double prev = -1.0;
    for (double c : cs) {
        const double r = mm_production_rate(c, k);
        if (r < prev || r < 0.0 || r > k.v_max) ++failures;
        prev = r;
    }

    std::uniform_real_distribution<double> logc(-6.0, 3.0);
    std::uniform_int_distribution<std::size_t> cell(0, 99);
    for (int i = 0; i < property_cases; ++i) {
        std::vector<double> field(100);
        for (double& v : field) v = std::pow(10.0, logc(rng));
        std::size_t idx[3] = {cell(rng), cell(rng), cell(rng)};
        std::sort(std::begin(idx), std::end(idx));
        const double a = field[idx[0]], b = field[idx[1]], c = field[idx[2]];
        const double alpha = std::pow(10.0, logc(rng));
        const double pl = path_loss(a, c);
        if (std::abs(path_loss(alpha * a, alpha * c) - pl) > 1e-9) ++failures;
        if (std::abs(path_loss(c, a) + pl) > 1e-12) ++failures;
        if (std::abs(path_loss(a, b) + path_loss(b, c) - pl) > 1e-9) ++failures;
    }

    const RunResult& r = default_run();
    std::size_t negative = 0;
    for (const auto& s : r.snapshots) {
        negative += static_cast<std::size_t>(std::count_if(s.starch.values.begin(), s.starch.values.end(), [](double v) { return !(v >= 0.0); }));
        negative += static_cast<std::size_t>(std::count_if(s.glucose.values.begin(), s.glucose.values.end(), [](double v) { return !(v >= 0.0); }));
    }

    const bool ok = failures == 0 && negative == 0;
    return {ok,
            fmt::format("{} property violations over {} rate samples and {} path-loss cases; {} negative cells over {} snapshots",
                        failures, property_cases, property_cases, negative, r.snapshots.size()),
            {}};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const std::string& spec, const fs::path& scratch) {
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    const fs::path a = scratch / "a";
    const fs::path b = scratch / "b";
    for (const fs::path& dir : {a, b}) {
        const std::string cmd = fmt::format("\"{}\" sweep \"{}\" --threads 2 --out \"{}\" > \"{}\" 2>&1", cli, spec,
                                            dir.string(), (scratch / (dir.filename().string() + ".log")).string());
        const int rc = std::system(cmd.c_str());
        if (rc != 0) return {false, fmt::format("sweep command failed ({}): {}", rc, cmd), {}};
    }
    const std::string ca = slurp(a / "sweep.csv");
    const std::string cb = slurp(b / "sweep.csv");
    const bool ok = !ca.empty() && ca == cb;
    return {ok, fmt::format("sweep.csv {} bytes, byte-identical: {}", ca.size(), ca == cb ? "yes" : "no"), {}};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: gi_channel_acceptance <gi_channel> <sweep-spec> <scratch-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string spec = argv[2];
    const fs::path scratch = argv[3];

    const std::vector<Criterion> criteria{
        {"AC1", "gastric exactness", 1.0, gastric_exactness},
        {"AC2", "oracle equivalence", 30.0, oracle_equivalence},
        {"AC3", "mass audit", 10.0, mass_audit},
        {"AC4", "90% absorbed within 2-4 h", 10.0, timescale},
        {"AC5", "blood glucose excursion", 10.0, magnitude},
        {"AC6", "trend suite", 120.0, trend_suite},
        {"AC7", "property batteries", 30.0, property_batteries},
        {"AC8", "sweep determinism", 120.0, [&] { return determinism(cli, spec, scratch); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), {}};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed <= c.time_limit;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::cout << fmt::format("[{}] {} {}: {} [{:.2f} s of {:.0f} s{}]\n", pass ? "PASS" : "FAIL", c.id, c.title,
                                 o.detail, elapsed, c.time_limit, in_time ? "" : ", too slow");
        for (const auto& line : o.info) std::cout << "       " << line << '\n';
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

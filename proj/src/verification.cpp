#include "gi_channel/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "gi_channel/errors.hpp"
#include "gi_channel/kinetics.hpp"

namespace gi_channel {

OracleProblem default_oracle_problem() {
    const PhysiologyParams p = default_params();
    const TransportCoefficients t = transport_coefficients(p);
    return OracleProblem{
        .velocity = p.mean_velocity,
        .diffusion = 1e-7,
        .decay = t.absorption_rate,
        .area = p.cross_section_area(),
        .length = p.si_length,
        .mass = 0.01,
        .sigma0 = 0.5,
        .peak_start = 2.0,
        .duration = 3.0 * units::seconds_per_hour,
    };
}

OracleComparison compare_with_oracle(const OracleProblem& pr, std::size_t cells, double dt_factor) {
    const Grid1D grid(pr.length, cells);
    const ChannelCoefficients coeffs{.velocity = pr.velocity,
                                     .diffusion = pr.diffusion,
                                     .absorption = pr.decay,
                                     .area = pr.area,
                                     .kinetics = KineticsParams{.v_max = 0.0, .k_half = 0.0}};
    const ChannelModel model(grid, coeffs, InjectionProfile::inlet_cell, OutletBoundary::outflow, {}, false);

    // a pulse of width sigma0 is the point release observed at t0 = sigma0^2 / (2D)
    const double t0 = pr.sigma0 * pr.sigma0 / (2.0 * pr.diffusion);
    const double x0 = pr.peak_start - pr.velocity * t0;

    SimulationState s;
    s.gastric = GastricState{.mass = 0.0, .emptied_cumulative = 0.0, .rate_gamma = 0.0};
    s.starch.values.assign(cells, 0.0);
    s.glucose.values.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        s.glucose.values[i] = gaussian_oracle(pr.mass, x0, pr.velocity, pr.diffusion, pr.decay, pr.area, grid.center(i), t0);
    }

    const double dt_auto = model.stability_dt(0.0);
    const auto steps = static_cast<std::size_t>(std::ceil(pr.duration / dt_auto - 1e-9));
    const double dt = pr.duration / static_cast<double>(steps) * dt_factor;
    for (std::size_t k = 0; k < steps; ++k) s = model.step(s, dt);

    double num = 0.0;
    double den = 0.0;
    const double t_end = t0 + dt * static_cast<double>(steps);
    for (std::size_t i = 0; i < cells; ++i) {
        const double exact = gaussian_oracle(pr.mass, x0, pr.velocity, pr.diffusion, pr.decay, pr.area, grid.center(i), t_end);
        num += (s.glucose.values[i] - exact) * (s.glucose.values[i] - exact);
        den += exact * exact;
    }
    return OracleComparison{.cells = cells, .dx = grid.dx(), .relative_l2 = std::sqrt(num / den)};
}

double observed_order(std::span<const double> dx, std::span<const double> error) {
    const std::size_t n = std::min(dx.size(), error.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(dx[i]);
        my += std::log(error[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ex = std::log(dx[i]) - mx;
        sxy += ex * (std::log(error[i]) - my);
        sxx += ex * ex;
    }
    return sxy / sxx;
}

namespace {

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return CheckResult{name, false, e.what()};
    }
}

SolverConfig default_solver(double dt_factor) {
    SolverConfig cfg;
    if (dt_factor != 1.0) {
        const PhysiologyParams p = default_params();
        const TransportCoefficients t = transport_coefficients(p);
        const Grid1D grid(p.si_length, cfg.cell_count);
        cfg.dt = dt_factor * stability_dt(grid, p.mean_velocity, t.diffusion, t.absorption_rate,
                                          gamma_from_half_time(default_meal().half_emptying_time));
    }
    return cfg;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    const double f = options.dt_factor;

    out.push_back(guarded("gastric closed form vs RK4 stepping", [&] {
        const MealSpec meal = default_meal();
        const double g = gamma_from_half_time(meal.half_emptying_time);
        const double at1 = stomach_mass_closed_form(meal.carb_mass, g, 3600.0);
        const double at2 = stomach_mass_closed_form(meal.carb_mass, g, 7200.0);
        const RunResult r = run(meal, default_params(), default_kinetics(), default_solver(f));
        double worst = 0.0;
        for (const auto& s : r.snapshots) {
            const double exact = stomach_mass_closed_form(meal.carb_mass, g, s.time);
            worst = std::max(worst, std::abs(s.gastric.mass - exact) / exact);
        }
        const bool ok = std::abs(at1 - 0.05) / 0.05 <= 1e-6 && std::abs(at2 - 0.025) / 0.025 <= 1e-6 && worst <= 1e-8;
        return CheckResult{"gastric closed form vs RK4 stepping", ok,
                           fmt::format("C(1h) = {:.9g} kg, C(2h) = {:.9g} kg, max stepping error {:.2e}", at1, at2, worst)};
    }));

    const OracleProblem problem = default_oracle_problem();
    out.push_back(guarded("Gaussian oracle L2 at dx = 1 cm", [&] {
        const OracleComparison c = compare_with_oracle(problem, 690, f);
        return CheckResult{"Gaussian oracle L2 at dx = 1 cm", c.relative_l2 <= 0.05,
                           fmt::format("relative L2 = {:.4f} (limit 0.05)", c.relative_l2)};
    }));

    out.push_back(guarded("spatial convergence order", [&] {
        std::vector<double> dx;
        std::vector<double> err;
        for (std::size_t cells : {172u, 345u, 690u, 1380u}) {
            const OracleComparison c = compare_with_oracle(problem, cells, f);
            dx.push_back(c.dx);
            err.push_back(c.relative_l2);
        }
        const double order = observed_order(dx, err);
        return CheckResult{"spatial convergence order", order >= 0.8 && order <= 1.2,
                           fmt::format("observed order {:.3f} (accepted [0.8, 1.2])", order)};
    }));

    out.push_back(guarded("mass audit and positivity, default 5 h run", [&] {
        const RunResult r = run(default_meal(), default_params(), default_kinetics(), default_solver(f));
        double worst = 0.0;
        double min_value = 0.0;
        for (const auto& s : r.snapshots) {
            worst = std::max(worst, mass_audit_residual(s, r.grid, r.area, r.meal_mass));
            for (double v : s.starch.values) min_value = std::min(min_value, v);
            for (double v : s.glucose.values) min_value = std::min(min_value, v);
        }
        return CheckResult{"mass audit and positivity, default 5 h run", worst <= mass_audit_tolerance && min_value >= 0.0,
                           fmt::format("max residual {:.3e}, min concentration {}", worst, min_value)};
    }));

    out.push_back(guarded("closed-channel conservation", [&] {
        const PhysiologyParams p = default_params();
        const Grid1D grid(p.si_length, 690);
        const ChannelCoefficients coeffs{.velocity = p.mean_velocity,
                                         .diffusion = 1e-6,
                                         .absorption = 0.0,
                                         .area = p.cross_section_area(),
                                         .kinetics = KineticsParams{.v_max = 0.0, .k_half = 0.0}};
        const ChannelModel model(grid, coeffs, InjectionProfile::inlet_cell, OutletBoundary::zero_flux, {}, false);
        SimulationState s;
        s.gastric = GastricState{0.0, 0.0, 0.0};
        s.starch.values.resize(690);
        s.glucose.values.resize(690);
        for (std::size_t i = 0; i < 690; ++i) {
            s.starch.values[i] = 1.0 + std::sin(0.05 * static_cast<double>(i));
            s.glucose.values[i] = static_cast<double>(i % 7);
        }
        const double dt = f * model.stability_dt(0.0);
        double worst = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const double before = model.accounted_mass(s);
            s = model.step(s, dt);
            worst = std::max(worst, std::abs(model.accounted_mass(s) - before) / before);
        }
        return CheckResult{"closed-channel conservation", worst <= 1e-12, fmt::format("max per-step drift {:.2e}", worst)};
    }));

    out.push_back(guarded("Michaelis-Menten monotone and bounded", [&] {
        const KineticsParams k = default_kinetics();
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> expo(-6.0, 6.0);
        std::vector<double> c(1000);
        for (double& v : c) v = k.k_half * std::pow(10.0, expo(rng));
        std::sort(c.begin(), c.end());
        bool ok = true;
        double prev = 0.0;
        for (double v : c) {
            const double r = mm_production_rate(v, k);
            ok = ok && r >= prev && r <= k.v_max;
            prev = r;
        }
        const double near_sat = mm_production_rate(1e6 * k.k_half, k);
        ok = ok && std::abs(near_sat - k.v_max) / k.v_max <= 1e-4;
        ok = ok && std::abs(mm_production_rate(k.k_half, k) - 0.5 * k.v_max) <= 1e-15 * k.v_max;
        return CheckResult{"Michaelis-Menten monotone and bounded", ok,
                           fmt::format("1000 samples over 12 decades; rate at 1e6 K_half = {:.6g} of V_max", near_sat / k.v_max)};
    }));

    return out;
}

}  // namespace gi_channel

#include "gi_channel/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "gi_channel/errors.hpp"

namespace gi_channel {

Grid1D::Grid1D(double length, std::size_t cell_count) : length_(length), cells_(cell_count), dx_(0.0) {
    if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("si_length", "grid length must be > 0");
    if (cell_count < min_cell_count) {
        throw ParameterError("cells", fmt::format("need at least {} cells (got {})", min_cell_count, cell_count));
    }
    dx_ = length / static_cast<double>(cell_count);
}

std::vector<double> Grid1D::centers() const {
    std::vector<double> out(cells_);
    for (std::size_t i = 0; i < cells_; ++i) out[i] = center(i);
    return out;
}

std::size_t Grid1D::nearest_cell(double x) const noexcept {
    if (x <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(std::floor(x / dx_));
    return std::min(i, cells_ - 1);
}

double ConcentrationField::total_mass(double dx, double area) const noexcept {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * area * dx;
}

InjectionProfile parse_injection_profile(std::string_view name) {
    if (name == "inlet" || name == "inlet_cell") return InjectionProfile::inlet_cell;
    if (name == "uniform") return InjectionProfile::uniform;
    throw ConfigError(fmt::format("unknown injection profile '{}' (expected inlet|uniform)", name));
}

OutletBoundary parse_outlet_boundary(std::string_view name) {
    if (name == "outflow") return OutletBoundary::outflow;
    if (name == "zero_flux") return OutletBoundary::zero_flux;
    throw ConfigError(fmt::format("unknown outlet boundary '{}' (expected outflow|zero_flux)", name));
}

std::string_view to_string(InjectionProfile p) noexcept { return p == InjectionProfile::inlet_cell ? "inlet" : "uniform"; }

std::string_view to_string(OutletBoundary b) noexcept { return b == OutletBoundary::outflow ? "outflow" : "zero_flux"; }

ChannelCoefficients make_coefficients(const PhysiologyParams& p, const KineticsParams& k,
                                      const TransportCoefficients& t) {
    return ChannelCoefficients{
        .velocity = p.mean_velocity,
        .diffusion = t.diffusion,
        .absorption = t.absorption_rate,
        .area = p.cross_section_area(),
        .kinetics = k,
    };
}

namespace {

double unsafe_bound(const Grid1D& grid, double u, double D, double K, double gamma) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dx = grid.dx();
    const double adv = u > 0.0 ? dx / u : inf;
    const double diff = D > 0.0 ? dx * dx / (2.0 * D) : inf;
    const double abs = K > 0.0 ? 1.0 / K : inf;
    const double emp = gamma > 0.0 ? 1.0 / gamma : inf;
    return std::min({adv, diff, abs, emp});
}

}  // namespace

double stability_dt(const Grid1D& grid, double velocity, double diffusion, double absorption, double gamma) {
    return stability_safety * unsafe_bound(grid, velocity, diffusion, absorption, gamma);
}

ChannelModel::ChannelModel(Grid1D grid, ChannelCoefficients coeffs, InjectionProfile injection,
                           OutletBoundary outlet, BergmanParams bergman, bool couple_blood)
    : grid_(grid),
      coeffs_(coeffs),
      injection_(injection),
      outlet_(outlet),
      bergman_(bergman),
      couple_blood_(couple_blood) {}

SimulationState ChannelModel::initial_state(const MealSpec& meal) const {
    SimulationState s;
    s.gastric = initial_gastric_state(meal);
    s.starch.values.assign(grid_.cell_count(), 0.0);
    s.glucose.values.assign(grid_.cell_count(), 0.0);
    s.blood = basal_state(bergman_);
    return s;
}

double ChannelModel::stability_dt(double gamma) const {
    return gi_channel::stability_dt(grid_, coeffs_.velocity, coeffs_.diffusion, coeffs_.absorption, gamma);
}

void ChannelModel::transport(std::span<const double> c, std::span<double> out, double dt, double& outflow) const {
    const std::size_t n = c.size();
    const double dx = grid_.dx();
    const double u = coeffs_.velocity;
    const double D = coeffs_.diffusion;

    // Face i sits between cell i-1 and cell i; face 0 is the closed inlet wall.
    double left_flux = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double right_flux = 0.0;
        if (i + 1 < n) {
            right_flux = u * c[i] - D * (c[i + 1] - c[i]) / dx;
        } else if (outlet_ == OutletBoundary::outflow) {
            right_flux = u * c[i];
        }
        out[i] = c[i] - dt / dx * (right_flux - left_flux);
        left_flux = right_flux;
    }
    if (outlet_ == OutletBoundary::outflow) outflow += dt * u * c[n - 1] * coeffs_.area;
}

SimulationState ChannelModel::step(const SimulationState& state, double dt) const {
    const double bound = unsafe_bound(grid_, coeffs_.velocity, coeffs_.diffusion, coeffs_.absorption,
                                      state.gastric.rate_gamma);
    if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12)) {
        throw NumericalError("stability", fmt::format("dt = {} s outside (0, {}] s at t = {} s", dt, bound, state.time));
    }

    const std::size_t n = grid_.cell_count();
    const double dx = grid_.dx();
    const double area = coeffs_.area;
    const KineticsParams& kin = coeffs_.kinetics;

    SimulationState next;
    next.gastric = gastric_step(state.gastric, dt);
    next.starch.values.resize(n);
    next.glucose.values.resize(n);
    next.absorbed_mass = state.absorbed_mass;
    next.outflow_mass = state.outflow_mass;
    next.produced_glucose_mass = state.produced_glucose_mass;

    const double emptied = next.gastric.emptied_cumulative - state.gastric.emptied_cumulative;

    transport(state.starch.values, next.starch.values, dt, next.outflow_mass);
    if (injection_ == InjectionProfile::inlet_cell) {
        next.starch.values[0] += emptied / (area * dx);
    } else {
        const double add = emptied / (area * dx * static_cast<double>(n));
        for (double& v : next.starch.values) v += add;
    }

    transport(state.glucose.values, next.glucose.values, dt, next.outflow_mass);

    const double decay = std::exp(-coeffs_.absorption * dt);
    double converted_total = 0.0;
    double absorbed_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double& cs = next.starch.values[i];
        double& cg = next.glucose.values[i];
        double converted = 0.0;
        if (cs > 0.0 && kin.v_max > 0.0) {
            const double k_eff = kin.v_max / (kin.k_half + cs);
            const double remaining = cs / (1.0 + dt * k_eff);
            converted = cs - remaining;
            cs = remaining;
        }
        cg += converted;
        const double after = cg * decay;
        absorbed_total += cg - after;
        cg = after;
        converted_total += converted;

        if (!std::isfinite(cs) || !std::isfinite(cg)) {
            throw NumericalError("nan", fmt::format("non-finite concentration in cell {} at t = {} s", i, state.time + dt));
        }
        if (cs < 0.0 || cg < 0.0) {
            throw NumericalError("negativity", fmt::format("negative concentration in cell {} at t = {} s (starch {}, glucose {})",
                                                           i, state.time + dt, cs, cg));
        }
    }
    next.produced_glucose_mass += converted_total * area * dx;
    const double absorbed_step = absorbed_total * area * dx;
    next.absorbed_mass += absorbed_step;
    next.time = state.time + dt;

    if (couple_blood_) {
        const double ra_mg_per_min = absorbed_step / dt * 1e6 * units::seconds_per_minute;
        next.blood = advance_blood(state.blood, ra_mg_per_min, bergman_, dt);
        next.blood.time = next.time;
    } else {
        next.blood = state.blood;
        next.blood.time = next.time;
    }
    return next;
}

double ChannelModel::accounted_mass(const SimulationState& s) const noexcept {
    return s.gastric.mass + s.starch.total_mass(grid_.dx(), coeffs_.area) +
           s.glucose.total_mass(grid_.dx(), coeffs_.area) + s.absorbed_mass + s.outflow_mass;
}

double mass_audit_residual(const SimulationState& s, const Grid1D& grid, double area, double meal_mass) {
    const double total = s.gastric.mass + s.starch.total_mass(grid.dx(), area) + s.glucose.total_mass(grid.dx(), area) +
                         s.absorbed_mass + s.outflow_mass;
    return std::abs(total - meal_mass) / meal_mass;
}

RunResult run(const MealSpec& meal, const PhysiologyParams& p, const KineticsParams& k, const SolverConfig& cfg,
              RadiusMode radius, const BergmanParams& bergman) {
    validate(p);
    validate(k);
    validate(meal);
    validate(bergman);
    if (!(cfg.end_time >= 0.0) || !std::isfinite(cfg.end_time)) {
        throw ParameterError("end_time", "must be finite and >= 0");
    }
    if (cfg.dt && !(*cfg.dt > 0.0)) throw ParameterError("dt", "must be > 0");

    Grid1D grid(p.si_length, cfg.cell_count);
    const TransportCoefficients transport = transport_coefficients(p, radius);
    const ChannelModel model(grid, make_coefficients(p, k, transport), cfg.injection, cfg.outlet, bergman,
                             cfg.couple_blood);

    RunResult result{.grid = grid,
                     .area = p.cross_section_area(),
                     .meal_mass = meal.carb_mass,
                     .bergman = bergman,
                     .transport = transport,
                     .dt = 0.0,
                     .steps = 0,
                     .snapshots = {}};

    SimulationState state = model.initial_state(meal);
    result.snapshots.push_back(state);
    if (cfg.end_time == 0.0) return result;

    const double dt_target = cfg.dt ? *cfg.dt : std::min(model.stability_dt(state.gastric.rate_gamma), cfg.end_time);
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.end_time / dt_target - 1e-9));
    const double dt = cfg.end_time / static_cast<double>(steps);
    const std::size_t stride =
        cfg.output_stride > 0 ? cfg.output_stride
                              : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.output_interval / dt)));
    result.dt = dt;
    result.steps = steps;

    for (std::size_t i = 1; i <= steps; ++i) {
        state = model.step(state, dt);
        // pin the clock to the step index so snapshot times do not drift
        state.time = static_cast<double>(i) * dt;
        state.blood.time = state.time;
        if (i % stride == 0 || i == steps) {
            const double residual = mass_audit_residual(state, grid, result.area, meal.carb_mass);
            if (!(residual <= mass_audit_tolerance)) {
                throw NumericalError("mass audit", fmt::format("residual {} at t = {} s", residual, state.time));
            }
            result.snapshots.push_back(state);
        }
    }
    return result;
}

double gaussian_oracle(double mass, double x0, double velocity, double diffusion, double lambda, double area,
                       double x, double t) {
    const double spread = 4.0 * diffusion * t;
    const double shift = x - x0 - velocity * t;
    return mass / (area * std::sqrt(std::numbers::pi * spread)) * std::exp(-shift * shift / spread) *
           std::exp(-lambda * t);
}

}  // namespace gi_channel

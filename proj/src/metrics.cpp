#include "gi_channel/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gi_channel/errors.hpp"

namespace gi_channel {

double path_loss(double c_at_x1, double c_at_x2) {
    if (!(c_at_x1 > 0.0) || !(c_at_x2 > 0.0) || !std::isfinite(c_at_x1) || !std::isfinite(c_at_x2)) {
        throw MetricError(fmt::format("path loss undefined for concentrations {} and {}", c_at_x1, c_at_x2));
    }
    return 10.0 * std::log10(c_at_x1 / c_at_x2);
}

DelayResult digestion_delay(std::span<const TimeMass> absorbed, double c0) {
    if (absorbed.empty()) throw MetricError("digestion delay: empty absorbed series");
    const double target = 0.5 * c0;
    for (std::size_t i = 1; i < absorbed.size(); ++i) {
        if (absorbed[i].mass < absorbed[i - 1].mass) {
            throw MetricError(fmt::format("digestion delay: absorbed mass decreases at t = {} s", absorbed[i].time));
        }
    }
    if (absorbed.front().mass >= target) {
        const double t50 = absorbed.front().time;
        return {t50, t50 - delay_benchmark};
    }
    for (std::size_t i = 1; i < absorbed.size(); ++i) {
        const TimeMass& a = absorbed[i - 1];
        const TimeMass& b = absorbed[i];
        if (b.mass >= target) {
            const double w = (target - a.mass) / (b.mass - a.mass);
            const double t50 = a.time + w * (b.time - a.time);
            return {t50, t50 - delay_benchmark};
        }
    }
    throw MetricError(fmt::format("digestion delay: only {:.1f}% of the meal absorbed by t = {} s",
                                  100.0 * absorbed.back().mass / c0, absorbed.back().time));
}

FieldSample sample_fields(const RunResult& run, double x, double t) {
    const auto& snaps = run.snapshots;
    const std::size_t cell = run.grid.nearest_cell(x);
    if (snaps.empty()) throw MetricError("no snapshots");
    if (t <= snaps.front().time) return {snaps.front().starch.values[cell], snaps.front().glucose.values[cell]};
    if (t >= snaps.back().time) return {snaps.back().starch.values[cell], snaps.back().glucose.values[cell]};
    const auto it = std::lower_bound(snaps.begin(), snaps.end(), t,
                                     [](const SimulationState& s, double v) { return s.time < v; });
    const SimulationState& b = *it;
    const SimulationState& a = *(it - 1);
    const double w = (t - a.time) / (b.time - a.time);
    const auto lerp = [w](double lo, double hi) { return lo + w * (hi - lo); };
    return {lerp(a.starch.values[cell], b.starch.values[cell]), lerp(a.glucose.values[cell], b.glucose.values[cell])};
}

ChannelReport report(const RunResult& run, const ReportOptions& options) {
    if (run.snapshots.empty()) throw MetricError("report: run has no snapshots");
    ChannelReport rep;
    const double L = run.grid.length();
    rep.x1 = options.x1.value_or(options.x1_fraction * L);
    rep.x2 = options.x2.value_or(options.x2_fraction * L);
    if (!(rep.x1 >= 0.0 && rep.x1 < rep.x2 && rep.x2 <= L)) {
        throw MetricError(fmt::format("report: need 0 <= x1 < x2 <= L (x1 = {}, x2 = {}, L = {})", rep.x1, rep.x2, L));
    }
    const double end = run.snapshots.back().time;

    std::vector<TimeMass> absorbed;
    absorbed.reserve(run.snapshots.size());
    for (const auto& s : run.snapshots) absorbed.push_back({s.time, s.absorbed_mass});
    try {
        const DelayResult d = digestion_delay(absorbed, run.meal_mass);
        rep.t50 = d.t50;
        rep.delay = d.delay;
    } catch (const MetricError& e) {
        rep.notes.emplace_back(e.what());
    }

    if (options.t_eval) {
        if (*options.t_eval < 0.0 || *options.t_eval > end) {
            throw MetricError(fmt::format("report: t_eval = {} s outside the run horizon [0, {}] s", *options.t_eval, end));
        }
        rep.t_eval = *options.t_eval;
    } else if (rep.t50) {
        rep.t_eval = *rep.t50;
    } else {
        rep.t_eval = end;
        rep.notes.emplace_back("t_eval falls back to the end of the run because t50 was not reached");
    }

    const FieldSample s1 = sample_fields(run, rep.x1, rep.t_eval);
    const FieldSample s2 = sample_fields(run, rep.x2, rep.t_eval);
    try {
        rep.path_loss_starch_db = path_loss(s1.starch, s2.starch);
    } catch (const MetricError& e) {
        rep.notes.emplace_back(std::string("starch: ") + e.what());
    }
    try {
        rep.path_loss_glucose_db = path_loss(s1.glucose, s2.glucose);
    } catch (const MetricError& e) {
        rep.notes.emplace_back(std::string("glucose: ") + e.what());
    }

    double peak_g = 0.0;
    std::size_t peak_blood = 0;
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        const auto& s = run.snapshots[i];
        for (double v : s.glucose.values) peak_g = std::max(peak_g, v);
        if (s.blood.G > run.snapshots[peak_blood].blood.G) peak_blood = i;
    }
    rep.peak_si_glucose = convert_concentration(peak_g, ConcentrationUnit::kg_per_m3, ConcentrationUnit::mg_per_dl);
    rep.peak_blood_glucose = run.snapshots[peak_blood].blood.G;
    rep.time_to_blood_peak = run.snapshots[peak_blood].time;

    const double gb = run.bergman.G_b;
    if (rep.peak_blood_glucose - gb > restabilize_band * gb) {
        for (std::size_t i = peak_blood + 1; i < run.snapshots.size(); ++i) {
            if (std::abs(run.snapshots[i].blood.G - gb) <= restabilize_band * gb) {
                rep.time_to_blood_restabilize = run.snapshots[i].time;
                break;
            }
        }
        if (!rep.time_to_blood_restabilize) rep.notes.emplace_back("blood glucose did not restabilize within the run");
    } else {
        rep.time_to_blood_restabilize = rep.time_to_blood_peak;
    }

    double worst = 0.0;
    for (const auto& s : run.snapshots) {
        worst = std::max(worst, mass_audit_residual(s, run.grid, run.area, run.meal_mass));
    }
    rep.mass_audit_residual = worst;
    rep.absorbed_fraction = run.snapshots.back().absorbed_mass / run.meal_mass;
    rep.digested_fraction = run.snapshots.back().produced_glucose_mass / run.meal_mass;
    return rep;
}

}  // namespace gi_channel

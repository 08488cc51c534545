#include "gi_channel/blood.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gi_channel/errors.hpp"

namespace gi_channel {

void validate(const BergmanParams& b) {
    const auto check = [](double v, const char* field) {
        if (!std::isfinite(v) || !(v > 0.0)) throw ParameterError(field, "must be finite and > 0");
    };
    check(b.p1, "p1");
    check(b.p2, "p2");
    check(b.p3, "p3");
    check(b.n, "n");
    check(b.gamma_beta, "gamma_beta");
    check(b.h, "h");
    check(b.G_b, "G_b");
    check(b.I_b, "I_b");
    check(b.V_G, "V_G");
}

BloodState basal_state(const BergmanParams& params) {
    return BloodState{.G = params.G_b, .X = 0.0, .I = params.I_b, .time = 0.0};
}

BloodState blood_step(const BloodState& s, double ra_mg_per_min, const BergmanParams& b, double dt) {
    if (dt > max_blood_step * (1.0 + 1e-12)) {
        throw NumericalError("blood stability", "dt " + std::to_string(dt) + " s exceeds " +
                                                    std::to_string(max_blood_step) + " s");
    }
    if (ra_mg_per_min < 0.0) throw std::invalid_argument("blood_step: negative glucose appearance");

    const double h = dt / 60.0;
    const double t_min = s.time / 60.0;
    const double dG = -b.p1 * (s.G - b.G_b) - s.X * s.G + ra_mg_per_min / b.V_G;
    const double dX = -b.p2 * s.X + b.p3 * (s.I - b.I_b);
    const double dI = -b.n * (s.I - b.I_b) + b.gamma_beta * std::max(0.0, s.G - b.h) * t_min;

    BloodState next{.G = s.G + h * dG, .X = s.X + h * dX, .I = s.I + h * dI, .time = s.time + dt};
    if (!std::isfinite(next.G) || !std::isfinite(next.X) || !std::isfinite(next.I)) {
        throw NumericalError("blood nan", "non-finite blood state at t=" + std::to_string(next.time) + " s");
    }
    if (next.G < 0.0) {
        throw NumericalError("blood negativity", "plasma glucose below zero at t=" + std::to_string(next.time) + " s");
    }
    return next;
}

BloodState advance_blood(const BloodState& state, double ra_mg_per_min, const BergmanParams& params, double dt) {
    if (dt <= 0.0) return state;
    const auto substeps = static_cast<long>(std::ceil(dt / max_blood_step - 1e-9));
    const double h = dt / static_cast<double>(substeps);
    BloodState s = state;
    for (long i = 0; i < substeps; ++i) s = blood_step(s, ra_mg_per_min, params, h);
    // keep the clock exact against accumulated rounding
    s.time = state.time + dt;
    return s;
}

}  // namespace gi_channel

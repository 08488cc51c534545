#ifndef GI_CHANNEL_VERIFICATION_HPP
#define GI_CHANNEL_VERIFICATION_HPP

/**
 * @file verification.hpp
 * @brief Built-in self-checks of the numerics against independent references.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gi_channel/channel.hpp"

namespace gi_channel {

/// Linear sub-problem: no hydrolysis, no gastric source, a Gaussian pulse
/// advected, diffused and absorbed at a uniform rate.
struct OracleProblem {
    double velocity;
    double diffusion;
    double decay;       ///< uniform first-order loss [1/s]
    double area;
    double length;
    double mass;        ///< pulse mass [kg]
    double sigma0;      ///< pulse standard deviation at the start [m]
    double peak_start;  ///< pulse centre at the start [m]
    double duration;    ///< [s]
};

/// Default-physiology velocity, area, length and absorption rate with
/// D = 1e-7 m^2/s, sigma0 = 0.5 m, centre 2 m, three hours of transport.
OracleProblem default_oracle_problem();

struct OracleComparison {
    std::size_t cells;
    double dx;
    double relative_l2;
};

/// Evolve the pulse on `cells` cells and compare with gaussian_oracle at the end.
/// dt_factor scales the automatic step (values > 2 violate the stability bound).
OracleComparison compare_with_oracle(const OracleProblem& problem, std::size_t cells, double dt_factor = 1.0);

/// Least-squares slope of log(error) against log(dx).
double observed_order(std::span<const double> dx, std::span<const double> error);

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct VerifyOptions {
    double dt_factor = 1.0;  ///< test hook: scales every automatic step
};

std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace gi_channel

#endif  // GI_CHANNEL_VERIFICATION_HPP

// SPDX-License-Identifier: Apache-2.0
//
// Simulation of the posterior belief diffusion
//
//     dp = sqrt(phi(p)) * k * p * (1 - p) dW,    k = (mu_h - mu_l) / sigma,
//
// and of its exit time from a belief interval [lower, upper].
//
// The primary simulator works on the natural scale: it draws a Brownian path
// B_u for the belief itself and recovers calendar time via the time change
//
//     tau = int_0^{u_exit} du / (phi(p0 + B_u) * sigma0(p0 + B_u)^2).
//
// Terminal beliefs therefore land exactly on the boundaries and two
// attenuations evaluated on the same driving path are coupled pathwise.
// A calendar-time Euler-Maruyama scheme is kept as an independent oracle.
#pragma once

#include "persuasion/model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace persuasion {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    std::size_t n_paths = 10000;
    double du = 1e-5;     ///< natural-scale step (Euler oracle: calendar step)
    double max_u = 10.0;  ///< clock cap; paths exceeding it are censored
    std::uint64_t seed = 1;
    bool bridge_correction = true;

    bool operator==(const SimConfig&) const = default;
};

void validate_sim_config(const SimConfig& cfg);

struct PathOutcome {
    std::size_t path_index = 0;
    double terminal_belief = 0.0;
    double tau = 0.0;     ///< calendar stopping time
    double u_exit = 0.0;  ///< quadratic variation accumulated at exit

    bool operator==(const PathOutcome&) const = default;
};

struct ExitSimulation {
    std::vector<PathOutcome> paths;  ///< uncensored paths in index order
    std::size_t censored = 0;

    [[nodiscard]] HittingStats stats(double upper) const;
};

struct CoupledOutcome {
    std::size_t path_index = 0;
    double terminal_belief_g = 0.0;
    double terminal_belief_0 = 0.0;
    double tau_g = 0.0;
    double tau_0 = 0.0;
    double u_exit = 0.0;
};

struct CoupledSimulation {
    std::vector<CoupledOutcome> pairs;
    std::size_t censored = 0;
};

/// Ungarbled posterior volatility k * p * (1 - p); zero at the absorbing
/// endpoints 0 and 1.
[[nodiscard]] double sigma0(double p, const ModelParams& params);

/// Number of workers to use when the caller passes 0.
[[nodiscard]] unsigned resolve_workers(unsigned workers);

/// Exit of the (garbled) belief process from [lower, upper] started at
/// params.p0. Requires 0 < lower < p0 < upper < 1; intervals touching 0 or 1
/// have infinite expected exit time and are rejected. Throws SimulationError
/// when more than 1% of paths are censored by cfg.max_u.
[[nodiscard]] ExitSimulation simulate_exit(const ModelParams& params, double lower, double upper,
                                           const GarblingPolicy& garbling, const SimConfig& cfg,
                                           unsigned workers = 1);

/// Exit times under `garbling` and under no garbling on identical driving
/// paths. tau_g >= tau_0 holds on every path whenever phi <= 1.
[[nodiscard]] CoupledSimulation coupled_no_garbling_comparison(
    const ModelParams& params, double lower, double upper, const GarblingPolicy& garbling,
    const SimConfig& cfg, unsigned workers = 1);

struct ResidualPoint {
    double value = 0.0;
    double std_err = 0.0;
};

/// Empirical residual expectation R(t) = mean((tau_i - t)_+).
[[nodiscard]] std::vector<double> residual_curve(const HittingStats& stats,
                                                 std::span<const double> t_grid);

/// As residual_curve, with the standard error of each point.
[[nodiscard]] std::vector<ResidualPoint> residual_curve_with_se(const HittingStats& stats,
                                                                std::span<const double> t_grid);

/// Calendar-time Euler-Maruyama simulation of the garbled belief SDE with
/// step cfg.du, capped at calendar time cfg.max_u. Used to cross-validate
/// the time-change construction.
[[nodiscard]] HittingStats direct_euler_check(const ModelParams& params, double lower,
                                              double upper, const GarblingPolicy& garbling,
                                              const SimConfig& cfg, unsigned workers = 1);

struct MeanEstimate {
    double mean = 0.0;
    double std_err = 0.0;
};

/// Mean belief of the Euler scheme at fixed calendar horizons, with paths
/// that already exited held at their boundary.
[[nodiscard]] std::vector<MeanEstimate> euler_belief_profile(
    const ModelParams& params, double lower, double upper, const GarblingPolicy& garbling,
    const SimConfig& cfg, std::span<const double> horizons, unsigned workers = 1);

}  // namespace persuasion

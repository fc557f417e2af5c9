// SPDX-License-Identifier: Apache-2.0
//
// The sender's reduced problem: choose the lower posterior atom of a
// two-point law to maximize success probability minus expected delay cost,
//
//     max_{lower in (0, p0]}  (p0 - lower) / (p_bar - lower) - E[c(tau_lower)],
//
// plus comparative-statics sweeps over cost convexity and signal-to-noise.
#pragma once

#include "persuasion/costs.hpp"
#include "persuasion/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace persuasion {

struct TracePoint {
    double lower = 0.0;
    double objective = 0.0;
};

struct SolveResult {
    double p_star = 0.0;      ///< optimal success probability
    double lower_star = 0.0;  ///< optimal lower atom
    double objective = 0.0;   ///< p_star - cost_at_opt
    double cost_at_opt = 0.0;
    std::vector<TracePoint> trace;  ///< coarse grid
};

struct SolverOptions {
    std::size_t grid_n = 64;
    double eps_low = 1e-6;  ///< smallest lower atom searched
    double x_tol = 1e-8;    ///< golden-section tolerance in the lower atom
    unsigned workers = 1;
    /// Required for cost terms without a closed form. The seed is reused for
    /// every candidate so that all candidates see the same driving paths.
    std::optional<MonteCarloSpec> mc;
};

/// Success probability minus expected cost at lower atom `lower`; 0 at
/// lower == p0 and -infinity at lower == 0.
[[nodiscard]] double objective(double lower, const CostModel& cost, const ModelParams& params,
                               const MonteCarloSpec* mc = nullptr);

/// Coarse grid over [eps_low, p0] followed by golden-section refinement
/// around every local grid maximum. Ties within 1e-10 go to the smallest
/// lower atom.
[[nodiscard]] SolveResult solve_sender(const CostModel& cost, const ModelParams& params,
                                       const SolverOptions& options = {});

struct SweepPoint {
    double param = 0.0;
    SolveResult result;
};

/// Solves with cost base + w t^2 for each weight (increasing, >= 0).
[[nodiscard]] std::vector<SweepPoint> sweep_convexity(const CostModel& base,
                                                      std::span<const double> weights,
                                                      const ModelParams& params,
                                                      const SolverOptions& options = {});

/// Solves with the drift gap rescaled so that (mu_h - mu_l) / sigma equals
/// each kappa (increasing, > 0).
[[nodiscard]] std::vector<SweepPoint> sweep_snr(const CostModel& cost,
                                                std::span<const double> kappas,
                                                const ModelParams& params_template,
                                                const SolverOptions& options = {});

}  // namespace persuasion

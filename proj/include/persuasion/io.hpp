// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV forms of the domain types.
//
//   ModelParams   {"mu_h", "mu_l", "sigma", "p0", "p_bar"}
//   TerminalLaw   {"atoms": [[belief, mass], ...]}
//   SimConfig     {"n_paths", "du", "max_u", "seed", "bridge_correction"}
//   CostModel     {"variant": "linear", "rate"} | {"variant": "power", "coef", "exponent"}
//                 | {"variant": "laplace_mixture", "affine_rate", "atoms": [[s, w], ...]}
//                 | {"variant": "tabulated", "knots": [[t, c], ...]}
//                 | {"variant": "sum", "terms": [cost, ...]}
//   Garbling      {"type": "none"} | {"type": "constant", "value"}
//                 | {"type": "piecewise", "breaks": [...], "values": [...]}
//                 | {"type": "tabulated", "grid": [...], "values": [...]}
//
// Parsing is strict: missing keys, unknown keys and wrong types raise
// ConfigError. Doubles are written with 17 significant digits.
#pragma once

#include "persuasion/costs.hpp"
#include "persuasion/dynamics.hpp"
#include "persuasion/model.hpp"
#include "persuasion/solver.hpp"

#include <json.hpp>

#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace persuasion {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

[[nodiscard]] Json to_json(const ModelParams& params);
[[nodiscard]] Json to_json(const TerminalLaw& law);
[[nodiscard]] Json to_json(const SimConfig& cfg);
[[nodiscard]] Json to_json(const CostModel& cost);
[[nodiscard]] Json to_json(const GarblingPolicy& garbling);
[[nodiscard]] Json to_json(const SolveResult& result);

[[nodiscard]] ModelParams model_params_from_json(const Json& j);
[[nodiscard]] TerminalLaw terminal_law_from_json(const Json& j);
[[nodiscard]] SimConfig sim_config_from_json(const Json& j);
/// Construction failures of a well-formed cost raise CostModelError.
[[nodiscard]] CostModel cost_model_from_json(const Json& j);
[[nodiscard]] GarblingPolicy garbling_from_json(const Json& j);

/// printf("%.17g").
[[nodiscard]] std::string format_double(double x);

/// Header: path_index,terminal_belief,tau,u_exit
void write_paths_csv(std::ostream& out, std::span<const PathOutcome> paths);

/// Header: sweep_param,p_star,lower_star,objective,cost_at_opt
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> sweep);

}  // namespace persuasion

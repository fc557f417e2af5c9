// SPDX-License-Identifier: Apache-2.0
//
// Delay cost models c(t) (increasing, convex, c(0) = 0), their expected value
// under the exit time of a two-point terminal law, and an empirical
// increasing-convex-order test on stopping-time samples.
#pragma once

#include "persuasion/dynamics.hpp"
#include "persuasion/model.hpp"

#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace persuasion {

class CostModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinearCost {
    double rate = 1.0;
};

/// coef * t^exponent.
struct PowerCost {
    double coef = 1.0;
    double exponent = 2.0;
};

struct LaplaceAtom {
    double s = 1.0;
    double weight = 0.0;
};

/// affine_rate * t + sum_i weight_i * (1 - exp(-s_i t)). Weights may be
/// negative; convexity and monotonicity are checked numerically.
struct LaplaceMixtureCost {
    double affine_rate = 0.0;
    std::vector<LaplaceAtom> atoms;
};

struct CostKnot {
    double t = 0.0;
    double c = 0.0;
};

/// Piecewise-linear interpolation through the knots, extended past the last
/// knot with the last slope.
struct TabulatedCost {
    std::vector<CostKnot> knots;
};

using CostTerm = std::variant<LinearCost, PowerCost, LaplaceMixtureCost, TabulatedCost>;

/// Horizon used to check LaplaceMixture shape: ten times the expected exit
/// time ln 3 of the symmetric benchmark (k = 1, p0 = 1/2, [1/4, 3/4]).
inline constexpr double kDefaultShapeCheckHorizon = 10.0 * 1.0986122886681098;

/// A cost is a sum of terms; factories build single-term costs and
/// operator+ adds them.
class CostModel {
public:
    [[nodiscard]] static CostModel linear(double rate);
    [[nodiscard]] static CostModel power(double coef, double exponent);
    [[nodiscard]] static CostModel laplace_mixture(
        double affine_rate, std::vector<LaplaceAtom> atoms,
        double check_horizon = kDefaultShapeCheckHorizon);
    [[nodiscard]] static CostModel tabulated(std::vector<CostKnot> knots);

    [[nodiscard]] CostModel operator+(const CostModel& other) const;

    [[nodiscard]] double operator()(double t) const;

    [[nodiscard]] const std::vector<CostTerm>& terms() const { return terms_; }

    /// True when some term has no closed-form expected value.
    [[nodiscard]] bool needs_monte_carlo() const;

private:
    explicit CostModel(CostTerm term) : terms_{std::move(term)} {}
    CostModel() = default;

    std::vector<CostTerm> terms_;
};

[[nodiscard]] double eval_cost(const CostModel& cost, double t);

[[nodiscard]] double eval_term(const CostTerm& term, double t);

/// Variant name used in serialized form: linear, power, laplace_mixture, tabulated.
[[nodiscard]] std::string_view variant_name(const CostTerm& term);

/// Monte Carlo settings for cost terms without a closed form.
struct MonteCarloSpec {
    SimConfig sim;
    unsigned workers = 1;
};

struct CostEstimate {
    double value = 0.0;
    double std_err = 0.0;  ///< zero when every term is exact
    bool monte_carlo = false;
};

/// E[c(tau)] for the no-garbling exit time that embeds a two-point (or
/// point-mass) law. Linear, LaplaceMixture and Power with exponent 1 or 2
/// are exact; other terms average c(tau) over paths simulated with `mc`,
/// which is then required.
[[nodiscard]] CostEstimate expected_cost(const CostModel& cost, const TerminalLaw& law,
                                         const ModelParams& params,
                                         const MonteCarloSpec* mc = nullptr);

/// Mean of c over stopping-time samples, with its standard error.
[[nodiscard]] CostEstimate sample_cost(const CostModel& cost, std::span<const double> taus);

/// Empirical increasing-convex-order test: a dominates b when
/// R_a(t) >= R_b(t) - 2 (se_a(t) + se_b(t)) on every grid point and the same
/// holds for the means.
[[nodiscard]] bool icx_dominates(const HittingStats& a, const HittingStats& b,
                                 std::span<const double> t_grid);

}  // namespace persuasion

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/solver.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace persuasion {

namespace {

constexpr double kTieTolerance = 1e-10;

struct Candidate {
    double lower = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

// Prefers the higher objective; near-ties go to the smaller lower atom.
bool better(const Candidate& a, const Candidate& b) {
    if (a.value > b.value + kTieTolerance) return true;
    if (b.value > a.value + kTieTolerance) return false;
    return a.lower < b.lower;
}

template <class F>
Candidate golden_section_max(F&& f, double a, double b, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    Candidate best{x1, f1};
    if (better({x2, f2}, best)) best = {x2, f2};
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
            if (better({x1, f1}, best)) best = {x1, f1};
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
            if (better({x2, f2}, best)) best = {x2, f2};
        }
    }
    return best;
}

const MonteCarloSpec* mc_of(const SolverOptions& options) {
    return options.mc ? &*options.mc : nullptr;
}

}  // namespace

double objective(double lower, const CostModel& cost, const ModelParams& params,
                 const MonteCarloSpec* mc) {
    validate_params(params);
    if (!(lower >= 0.0 && lower <= params.p0)) {
        throw InvalidArgument("lower atom must lie in [0, p0]");
    }
    if (lower == params.p0) return 0.0;
    if (lower == 0.0) return -std::numeric_limits<double>::infinity();
    const auto law = two_atom_law_from_lower(params, lower);
    return success_probability(params, lower) - expected_cost(cost, law, params, mc).value;
}

SolveResult solve_sender(const CostModel& cost, const ModelParams& params,
                         const SolverOptions& options) {
    validate_params(params);
    if (options.grid_n < 16) throw InvalidArgument("grid_n >= 16 violated");
    if (!(options.eps_low > 0.0 && options.eps_low < params.p0)) {
        throw InvalidArgument("eps_low must lie in (0, p0)");
    }
    const MonteCarloSpec* mc = mc_of(options);
    if (cost.needs_monte_carlo() && mc == nullptr) {
        throw InvalidArgument("cost needs Monte Carlo settings");
    }
    const auto f = [&](double lower) { return objective(lower, cost, params, mc); };

    const std::size_t n = options.grid_n;
    std::vector<Candidate> grid(n);
    const double lo = options.eps_low;
    const double hi = params.p0;
    detail::parallel_for(n, resolve_workers(options.workers), [&](std::size_t i) {
        const double x = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) /
                                                   static_cast<double>(n - 1);
        grid[i] = {x, f(x)};
    });

    Candidate best = grid.front();
    for (const auto& c : grid) {
        if (better(c, best)) best = c;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || grid[i].value >= grid[i - 1].value;
        const bool right_ok = i + 1 == n || grid[i].value >= grid[i + 1].value;
        if (!left_ok || !right_ok) continue;
        const double a = grid[i == 0 ? 0 : i - 1].lower;
        const double b = grid[i + 1 == n ? n - 1 : i + 1].lower;
        const auto refined = golden_section_max(f, a, b, options.x_tol);
        if (better(refined, best)) best = refined;
    }

    SolveResult result;
    result.lower_star = best.lower;
    result.p_star = success_probability(params, best.lower);
    if (best.lower == params.p0) {
        result.cost_at_opt = 0.0;
    } else {
        const auto law = two_atom_law_from_lower(params, best.lower);
        result.cost_at_opt = expected_cost(cost, law, params, mc).value;
    }
    result.objective = result.p_star - result.cost_at_opt;
    result.trace.reserve(n);
    for (const auto& c : grid) result.trace.push_back({c.lower, c.value});
    return result;
}

std::vector<SweepPoint> sweep_convexity(const CostModel& base, std::span<const double> weights,
                                        const ModelParams& params,
                                        const SolverOptions& options) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0) || (i > 0 && weights[i] < weights[i - 1])) {
            throw InvalidArgument("quadratic weights must be nonnegative and increasing");
        }
    }
    std::vector<SweepPoint> out;
    out.reserve(weights.size());
    for (double w : weights) {
        const CostModel cost = w > 0.0 ? base + CostModel::power(w, 2.0) : base;
        out.push_back({w, solve_sender(cost, params, options)});
    }
    return out;
}

std::vector<SweepPoint> sweep_snr(const CostModel& cost, std::span<const double> kappas,
                                  const ModelParams& params_template,
                                  const SolverOptions& options) {
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        if (!(kappas[i] > 0.0) || (i > 0 && kappas[i] < kappas[i - 1])) {
            throw InvalidArgument("kappas must be positive and increasing");
        }
    }
    std::vector<SweepPoint> out;
    out.reserve(kappas.size());
    for (double k : kappas) {
        out.push_back({k, solve_sender(cost, params_template.with_kappa(k), options)});
    }
    return out;
}

}  // namespace persuasion

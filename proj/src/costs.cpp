// SPDX-License-Identifier: Apache-2.0
#include "persuasion/costs.hpp"

#include "persuasion/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace persuasion {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool closed_form_term(const CostTerm& term) {
    if (const auto* p = std::get_if<PowerCost>(&term)) {
        return p->exponent == 1.0 || p->exponent == 2.0;
    }
    return !std::holds_alternative<TabulatedCost>(term);
}

void check_laplace_shape(const LaplaceMixtureCost& c, double horizon) {
    double min_s = std::numeric_limits<double>::infinity();
    double scale_d1 = c.affine_rate;
    double scale_d2 = 0.0;
    for (const auto& a : c.atoms) {
        min_s = std::min(min_s, a.s);
        scale_d1 += std::abs(a.weight) * a.s;
        scale_d2 += std::abs(a.weight) * a.s * a.s;
    }
    const double t_max = std::max(horizon, 40.0 / min_s);
    constexpr int kPoints = 4001;
    for (int i = 0; i < kPoints; ++i) {
        const double t = t_max * i / (kPoints - 1);
        double d1 = c.affine_rate;
        double d2 = 0.0;
        for (const auto& a : c.atoms) {
            const double e = std::exp(-a.s * t);
            d1 += a.weight * a.s * e;
            d2 -= a.weight * a.s * a.s * e;
        }
        if (d1 < -1e-12 * scale_d1) {
            std::ostringstream msg;
            msg << "laplace_mixture cost decreasing at t = " << t << " (c' = " << d1 << ")";
            throw CostModelError(msg.str());
        }
        if (d2 < -1e-12 * scale_d2) {
            std::ostringstream msg;
            msg << "laplace_mixture cost not convex at t = " << t << " (c'' = " << d2 << ")";
            throw CostModelError(msg.str());
        }
    }
}

}  // namespace

CostModel CostModel::linear(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw CostModelError("linear rate must be > 0");
    return CostModel(LinearCost{rate});
}

CostModel CostModel::power(double coef, double exponent) {
    if (!(coef > 0.0) || !std::isfinite(coef)) throw CostModelError("power coef must be > 0");
    if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
        throw CostModelError("power exponent must be >= 1");
    }
    return CostModel(PowerCost{coef, exponent});
}

CostModel CostModel::laplace_mixture(double affine_rate, std::vector<LaplaceAtom> atoms,
                                     double check_horizon) {
    if (!(affine_rate >= 0.0) || !std::isfinite(affine_rate)) {
        throw CostModelError("laplace_mixture affine_rate must be >= 0");
    }
    for (const auto& a : atoms) {
        if (!(a.s > 0.0) || !std::isfinite(a.s) || !std::isfinite(a.weight)) {
            throw CostModelError("laplace_mixture atoms need s > 0 and finite weight");
        }
    }
    LaplaceMixtureCost cost{affine_rate, std::move(atoms)};
    if (!cost.atoms.empty()) check_laplace_shape(cost, check_horizon);
    if (cost.affine_rate == 0.0 &&
        std::all_of(cost.atoms.begin(), cost.atoms.end(),
                    [](const LaplaceAtom& a) { return a.weight == 0.0; })) {
        throw CostModelError("laplace_mixture cost is identically zero");
    }
    return CostModel(std::move(cost));
}

CostModel CostModel::tabulated(std::vector<CostKnot> knots) {
    if (knots.size() < 2) throw CostModelError("tabulated cost needs at least two knots");
    if (knots.front().t != 0.0 || knots.front().c != 0.0) {
        throw CostModelError("tabulated cost must start at (0, 0)");
    }
    double prev_slope = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const double dt = knots[i].t - knots[i - 1].t;
        if (!(dt > 0.0) || !std::isfinite(knots[i].c)) {
            throw CostModelError("tabulated cost knots must have strictly increasing t");
        }
        const double slope = (knots[i].c - knots[i - 1].c) / dt;
        if (slope < 0.0) {
            std::ostringstream msg;
            msg << "tabulated cost decreasing on [" << knots[i - 1].t << ", " << knots[i].t << "]";
            throw CostModelError(msg.str());
        }
        if (slope < prev_slope * (1.0 - 1e-12)) {
            std::ostringstream msg;
            msg << "tabulated cost not convex at t = " << knots[i - 1].t;
            throw CostModelError(msg.str());
        }
        prev_slope = slope;
    }
    return CostModel(TabulatedCost{std::move(knots)});
}

CostModel CostModel::operator+(const CostModel& other) const {
    CostModel sum;
    sum.terms_ = terms_;
    sum.terms_.insert(sum.terms_.end(), other.terms_.begin(), other.terms_.end());
    return sum;
}

double eval_term(const CostTerm& term, double t) {
    return std::visit(
        Overloaded{
            [t](const LinearCost& c) { return c.rate * t; },
            [t](const PowerCost& c) { return c.coef * std::pow(t, c.exponent); },
            [t](const LaplaceMixtureCost& c) {
                double v = c.affine_rate * t;
                for (const auto& a : c.atoms) v -= a.weight * std::expm1(-a.s * t);
                return v;
            },
            [t](const TabulatedCost& c) {
                const auto& k = c.knots;
                auto it = std::upper_bound(k.begin(), k.end(), t,
                                           [](double x, const CostKnot& kn) { return x < kn.t; });
                std::size_t hi = static_cast<std::size_t>(it - k.begin());
                hi = std::clamp<std::size_t>(hi, 1, k.size() - 1);
                const auto& a = k[hi - 1];
                const auto& b = k[hi];
                return a.c + (t - a.t) * (b.c - a.c) / (b.t - a.t);
            },
        },
        term);
}

double CostModel::operator()(double t) const {
    double v = 0.0;
    for (const auto& term : terms_) v += eval_term(term, t);
    return v;
}

bool CostModel::needs_monte_carlo() const {
    return !std::all_of(terms_.begin(), terms_.end(), closed_form_term);
}

double eval_cost(const CostModel& cost, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("cost evaluated at negative time");
    return cost(t);
}

std::string_view variant_name(const CostTerm& term) {
    return std::visit(Overloaded{
                          [](const LinearCost&) { return std::string_view("linear"); },
                          [](const PowerCost&) { return std::string_view("power"); },
                          [](const LaplaceMixtureCost&) {
                              return std::string_view("laplace_mixture");
                          },
                          [](const TabulatedCost&) { return std::string_view("tabulated"); },
                      },
                      term);
}

CostEstimate sample_cost(const CostModel& cost, std::span<const double> taus) {
    CostEstimate out;
    out.monte_carlo = true;
    if (taus.empty()) return out;
    std::vector<double> values;
    values.reserve(taus.size());
    for (double t : taus) values.push_back(cost(t));
    const auto stats = HittingStats::from_samples(std::move(values));
    out.value = stats.mean;
    out.std_err = stats.std_err;
    return out;
}

CostEstimate expected_cost(const CostModel& cost, const TerminalLaw& law,
                           const ModelParams& params, const MonteCarloSpec* mc) {
    if (law.atoms.empty()) throw InvalidArgument("empty terminal law");
    if (law.atoms.size() > 2) {
        throw InvalidArgument("expected_cost needs a two-point or point-mass law");
    }
    if (law.is_point_mass()) return {};
    const double lower = law.atoms[0].belief;
    const double upper = law.atoms[1].belief;
    const double p = params.p0;
    if (!(lower > 0.0) || !(upper < 1.0)) {
        throw InvalidArgument("law touches 0 or 1: expected delay cost is infinite");
    }

    CostEstimate out;
    double mean_tau = -1.0;
    const auto exit_mean = [&] {
        if (mean_tau < 0.0) mean_tau = expected_exit_time(p, lower, upper, params);
        return mean_tau;
    };
    std::vector<CostTerm> mc_terms;
    for (const auto& term : cost.terms()) {
        if (const auto* c = std::get_if<LinearCost>(&term)) {
            out.value += c->rate * exit_mean();
        } else if (const auto* c = std::get_if<LaplaceMixtureCost>(&term)) {
            out.value += c->affine_rate * exit_mean();
            for (const auto& a : c->atoms) {
                out.value +=
                    a.weight * (1.0 - laplace_exit_transform(a.s, p, lower, upper, params));
            }
        } else if (const auto* c = std::get_if<PowerCost>(&term); c && c->exponent == 1.0) {
            out.value += c->coef * exit_mean();
        } else if (c && c->exponent == 2.0) {
            // E[tau^2] by quadrature; keeps quadratic costs deterministic
            out.value += c->coef * exit_time_second_moment(p, lower, upper, params);
        } else {
            mc_terms.push_back(term);
        }
    }
    if (mc_terms.empty()) return out;
    if (mc == nullptr) {
        throw InvalidArgument("cost term without closed form needs Monte Carlo settings");
    }
    const auto sim = simulate_exit(params, lower, upper, GarblingPolicy::none(), mc->sim,
                                   mc->workers);
    std::vector<double> values;
    values.reserve(sim.paths.size());
    for (const auto& path : sim.paths) {
        double v = 0.0;
        for (const auto& term : mc_terms) v += eval_term(term, path.tau);
        values.push_back(v);
    }
    const auto stats = HittingStats::from_samples(std::move(values));
    out.value += stats.mean;
    out.std_err = stats.std_err;
    out.monte_carlo = true;
    return out;
}

bool icx_dominates(const HittingStats& a, const HittingStats& b, std::span<const double> t_grid) {
    if (a.samples.empty() || b.samples.empty()) {
        throw InvalidArgument("icx_dominates needs nonempty sample sets");
    }
    if (a.mean < b.mean - 2.0 * (a.std_err + b.std_err)) return false;
    const auto ra = residual_curve_with_se(a, t_grid);
    const auto rb = residual_curve_with_se(b, t_grid);
    for (std::size_t i = 0; i < ra.size(); ++i) {
        if (ra[i].value < rb[i].value - 2.0 * (ra[i].std_err + rb[i].std_err)) return false;
    }
    return true;
}

}  // namespace persuasion

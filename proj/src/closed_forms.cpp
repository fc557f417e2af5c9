// SPDX-License-Identifier: Apache-2.0
#include "persuasion/closed_forms.hpp"

#include "persuasion/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace persuasion {

namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }

double entropy_like(double x) { return (2.0 * x - 1.0) * logit(x); }

void check_open_interval(double p, double lower, double upper) {
    if (!(lower > 0.0) || !(upper < 1.0)) {
        throw InvalidArgument(
            "boundary at 0 or 1: log-odds diverge and the exit time is infinite");
    }
    if (!(lower <= p && p <= upper)) {
        throw InvalidArgument("belief must lie in [lower, upper]");
    }
}

double inv_sigma0_sq(double y, const ModelParams& params) {
    const double k = params.kappa();
    const double v = y * (1.0 - y);
    return 1.0 / (k * k * v * v);
}

}  // namespace

double gamma_of_s(double s, const ModelParams& params) {
    if (!(s >= 0.0)) throw InvalidArgument("s >= 0 violated");
    const double gap = params.mu_h - params.mu_l;
    return std::sqrt(1.0 + 8.0 * s * params.sigma * params.sigma / (gap * gap));
}

double laplace_exit_transform(double s, double p, double lower, double upper,
                              const ModelParams& params) {
    check_open_interval(p, lower, upper);
    if (p == lower || p == upper) return 1.0;
    const double g = gamma_of_s(s, params);
    const double a = logit(upper) - logit(p);
    const double b = logit(p) - logit(lower);
    const double width = a + b;
    // sinh(g a/2) / sinh(g L/2) = exp(-g b/2) * expm1(-g a) / expm1(-g L)
    const double denom = std::expm1(-g * width);
    const double ratio_a = std::exp(-0.5 * g * b) * (std::expm1(-g * a) / denom);
    const double ratio_b = std::exp(-0.5 * g * a) * (std::expm1(-g * b) / denom);
    return std::sqrt(p * (1.0 - p)) * (ratio_a / std::sqrt(lower * (1.0 - lower)) +
                                       ratio_b / std::sqrt(upper * (1.0 - upper)));
}

double expected_exit_time(double p, double lower, double upper, const ModelParams& params) {
    check_open_interval(p, lower, upper);
    if (p == lower || p == upper) return 0.0;
    const double k = params.kappa();
    const double q = (p - lower) / (upper - lower);
    const double value = q * entropy_like(upper) + (1.0 - q) * entropy_like(lower) -
                         entropy_like(p);
    return std::max(0.0, 2.0 / (k * k) * value);
}

double expected_exit_time_by_integration(double p, double lower, double upper,
                                         const ModelParams& params) {
    check_open_interval(p, lower, upper);
    if (p == lower || p == upper) return 0.0;
    const double k = params.kappa();
    const auto psi_prime = [k](double r) {
        const double v = r * (1.0 - r);
        return 2.0 / (k * k * v * v);
    };
    // psi(s) = int_p^s psi'(r) dr; the linear part of the antiderivative
    // cancels by the martingale property.
    const auto psi = [&](double s) { return adaptive_simpson(psi_prime, p, s, 1e-11); };
    const double q = (p - lower) / (upper - lower);
    return (1.0 - q) * adaptive_simpson(psi, p, lower, 1e-9) +
           q * adaptive_simpson(psi, p, upper, 1e-9);
}

double exit_time_second_moment(double p, double lower, double upper,
                               const ModelParams& params) {
    check_open_interval(p, lower, upper);
    if (p == lower || p == upper) return 0.0;
    const double width = upper - lower;
    const auto integrand = [&](double y) {
        const double green = (std::min(p, y) - lower) * (upper - std::max(p, y)) / width;
        return 4.0 * green * expected_exit_time(y, lower, upper, params) *
               inv_sigma0_sq(y, params);
    };
    const double breaks[] = {p};
    return integrate_piecewise(integrand, lower, upper, breaks, 1e-10);
}

double potential(const TerminalLaw& law, double y) {
    double u = 0.0;
    for (const auto& a : law.atoms) u += a.mass * std::abs(a.belief - y);
    return u;
}

double embedding_time_via_potential(const TerminalLaw& law, const ModelParams& params) {
    if (law.atoms.empty()) throw InvalidArgument("empty terminal law");
    const double lo = law.min_belief();
    const double hi = law.max_belief();
    if (!(lo > 0.0) || !(hi < 1.0)) {
        throw InvalidArgument("support touches 0 or 1: embedding time integral diverges");
    }
    if (lo == hi) return 0.0;
    std::vector<double> breaks{params.p0};
    for (const auto& a : law.atoms) breaks.push_back(a.belief);
    const auto integrand = [&](double y) {
        return (potential(law, y) - std::abs(params.p0 - y)) * inv_sigma0_sq(y, params);
    };
    return integrate_piecewise(integrand, lo, hi, breaks, 1e-8);
}

}  // namespace persuasion

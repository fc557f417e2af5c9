// SPDX-License-Identifier: Apache-2.0
//
// Exact exit-time functionals of the ungarbled belief diffusion
// dp = k p (1 - p) dW on an interval [lower, upper] strictly inside (0, 1).
#pragma once

#include "persuasion/model.hpp"

namespace persuasion {

/// sqrt(1 + 8 s sigma^2 / (mu_h - mu_l)^2).
[[nodiscard]] double gamma_of_s(double s, const ModelParams& params);

/// E_p[exp(-s tau)] for the exit time tau of [lower, upper], in closed form:
///
///   sqrt(p(1-p)) / sinh(g L/2) * [ sinh(g a/2) / sqrt(lo(1-lo)) + sinh(g b/2) / sqrt(hi(1-hi)) ]
///
/// with g = gamma_of_s(s), a = logit(hi) - logit(p), b = logit(p) - logit(lo)
/// and L = a + b. Evaluated through expm1 of negative exponents so that large
/// s or wide intervals do not overflow.
[[nodiscard]] double laplace_exit_transform(double s, double p, double lower, double upper,
                                            const ModelParams& params);

/// E[tau] = (2 / k^2) [ q Phi(upper) + (1 - q) Phi(lower) - Phi(p) ],
/// Phi(x) = (2x - 1) log(x / (1 - x)), q = (p - lower) / (upper - lower).
[[nodiscard]] double expected_exit_time(double p, double lower, double upper,
                                        const ModelParams& params);

/// E[tau] recomputed by numerically integrating psi' = 2 / (k^2 r^2 (1-r)^2)
/// twice; an independent route to expected_exit_time.
[[nodiscard]] double expected_exit_time_by_integration(double p, double lower, double upper,
                                                       const ModelParams& params);

/// E[tau^2] from the Green's function of the interval:
/// 4 * int G(p, y) E_y[tau] / sigma0(y)^2 dy.
[[nodiscard]] double exit_time_second_moment(double p, double lower, double upper,
                                             const ModelParams& params);

/// Potential U(y) = sum_i mass_i |belief_i - y|.
[[nodiscard]] double potential(const TerminalLaw& law, double y);

/// Expected time to embed `law` without garbling:
/// int (U(y) - |p0 - y|) / sigma0(y)^2 dy over the support hull, by adaptive
/// Simpson split at p0 and at every atom (absolute tolerance 1e-8).
[[nodiscard]] double embedding_time_via_potential(const TerminalLaw& law,
                                                  const ModelParams& params);

}  // namespace persuasion

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>

namespace persuasion {

/// Adaptive Simpson quadrature of f over [a, b] (a > b integrates backwards)
/// to absolute tolerance abs_tol.
[[nodiscard]] double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                      double abs_tol, int max_depth = 50);

/// Adaptive Simpson over [a, b] split at every breakpoint inside (a, b).
/// The tolerance budget is shared between pieces in proportion to length.
[[nodiscard]] double integrate_piecewise(const std::function<double(double)>& f, double a,
                                         double b, std::span<const double> breakpoints,
                                         double abs_tol);

}  // namespace persuasion

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace persuasion {

namespace {

struct Panel {
    double a, m, b;
    double fa, fm, fb;
    double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
    const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return refine(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
           refine(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    if (a > b) return -adaptive_simpson(f, b, a, abs_tol, max_depth);
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    // Start from four panels so that integrands vanishing at a, m and b are
    // not accepted after a single evaluation.
    const double q1 = 0.5 * (a + m);
    const double q3 = 0.5 * (m + b);
    const double fq1 = f(q1);
    const double fq3 = f(q3);
    const double tol = 0.5 * abs_tol;
    return refine(f, {a, q1, m, fa, fq1, fm, simpson(a, m, fa, fq1, fm)}, tol, max_depth) +
           refine(f, {m, q3, b, fm, fq3, fb, simpson(m, b, fm, fq3, fb)}, tol, max_depth);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, double abs_tol) {
    if (a == b) return 0.0;
    if (a > b) return -integrate_piecewise(f, b, a, breakpoints, abs_tol);
    std::vector<double> cuts{a};
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double share = abs_tol * (cuts[i + 1] - cuts[i]) / (b - a);
        total += adaptive_simpson(f, cuts[i], cuts[i + 1], share);
    }
    return total;
}

}  // namespace persuasion

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/closed_forms.hpp"
#include "persuasion/dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

using namespace persuasion;

namespace {

const ModelParams kSym{1.0, 0.0, 1.0, 0.5, 0.75};

// Finite-difference solve of 0.5*v(p)^2*u'' - s*u = -f(p) on [lo, hi] with
// Dirichlet data, v(p) = kappa*p*(1-p). Returns u at the interior node
// nearest to p (p is placed on the grid).
struct FdGrid {
    std::vector<double> x;
    std::vector<double> u;
};

FdGrid fd_solve(double lo, double hi, double kappa, double s,
                const std::function<double(double, std::size_t)>& rhs, double left,
                double right, std::size_t n) {
    const double h = (hi - lo) / static_cast<double>(n);
    FdGrid g;
    g.x.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.x[i] = lo + h * static_cast<double>(i);
    const std::size_t m = n - 1;
    std::vector<double> a(m), b(m), c(m), d(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double p = g.x[k + 1];
        const double v = kappa * p * (1.0 - p);
        const double w = 0.5 * v * v / (h * h);
        a[k] = w;
        b[k] = -2.0 * w - s;
        c[k] = w;
        d[k] = -rhs(p, k + 1);
    }
    d[0] -= a[0] * left;
    d[m - 1] -= c[m - 1] * right;
    for (std::size_t k = 1; k < m; ++k) {
        const double f = a[k] / b[k - 1];
        b[k] -= f * c[k - 1];
        d[k] -= f * d[k - 1];
    }
    std::vector<double> sol(m);
    sol[m - 1] = d[m - 1] / b[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) sol[k] = (d[k] - c[k] * sol[k + 1]) / b[k];
    g.u.resize(n + 1);
    g.u[0] = left;
    g.u[n] = right;
    for (std::size_t k = 0; k < m; ++k) g.u[k + 1] = sol[k];
    return g;
}

double node_value(const FdGrid& g, double p) {
    const double h = g.x[1] - g.x[0];
    const auto i = static_cast<std::size_t>(std::lround((p - g.x[0]) / h));
    return g.u[i];
}

// Grid size chosen so p is a node on both levels; Richardson on n and 2n.
std::size_t grid_for(double lo, double hi, double p) {
    for (std::size_t n = 2000; n < 200000; n += 2) {
        const double pos = (p - lo) / (hi - lo) * static_cast<double>(n);
        if (std::abs(pos - std::round(pos)) < 1e-9) return n;
    }
    FAIL("no grid places p on a node");
    return 0;
}

double fd_laplace(double s, double p, double lo, double hi, double kappa) {
    const std::size_t n = grid_for(lo, hi, p);
    const auto zero = [](double, std::size_t) { return 0.0; };
    const double c = node_value(fd_solve(lo, hi, kappa, s, zero, 1.0, 1.0, n), p);
    const double f = node_value(fd_solve(lo, hi, kappa, s, zero, 1.0, 1.0, 2 * n), p);
    return (4.0 * f - c) / 3.0;
}

double fd_mean(double p, double lo, double hi, double kappa) {
    const std::size_t n = grid_for(lo, hi, p);
    const auto one = [](double, std::size_t) { return 1.0; };
    const double c = node_value(fd_solve(lo, hi, kappa, 0.0, one, 0.0, 0.0, n), p);
    const double f = node_value(fd_solve(lo, hi, kappa, 0.0, one, 0.0, 0.0, 2 * n), p);
    return (4.0 * f - c) / 3.0;
}

double fd_second_moment(double p, double lo, double hi, double kappa) {
    const std::size_t n = grid_for(lo, hi, p);
    const auto one = [](double, std::size_t) { return 1.0; };
    double level[2];
    for (int j = 0; j < 2; ++j) {
        const std::size_t nn = n << j;
        const auto mean = fd_solve(lo, hi, kappa, 0.0, one, 0.0, 0.0, nn);
        const auto rhs = [&](double, std::size_t i) { return 2.0 * mean.u[i]; };
        level[j] = node_value(fd_solve(lo, hi, kappa, 0.0, rhs, 0.0, 0.0, nn), p);
    }
    return (4.0 * level[1] - level[0]) / 3.0;
}

struct Case {
    ModelParams m;
    double lo;
    double hi;
};

std::vector<Case> cases() {
    return {
        {kSym, 0.25, 0.75},
        {ModelParams{1.0, 0.0, 1.0, 0.3, 0.75}, 0.1, 0.75},
        {ModelParams{2.0, 0.5, 1.5, 0.6, 0.9}, 0.2, 0.9},
        {ModelParams{3.0, 0.0, 0.5, 0.2, 0.4}, 0.05, 0.4},
    };
}

}  // namespace

TEST_SUITE("closed_forms") {

TEST_CASE("gamma examples") {
    CHECK(gamma_of_s(0.0, kSym) == 1.0);
    CHECK(gamma_of_s(1.0, kSym) == doctest::Approx(3.0));
    CHECK(gamma_of_s(0.25, kSym) == doctest::Approx(std::sqrt(3.0)));
    CHECK_THROWS_AS((void)gamma_of_s(-1.0, kSym), InvalidArgument);
}

TEST_CASE("Laplace transform boundary values") {
    CHECK(laplace_exit_transform(0.0, 0.5, 0.25, 0.75, kSym) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(laplace_exit_transform(2.0, 0.25, 0.25, 0.75, kSym) == doctest::Approx(1.0));
    CHECK(laplace_exit_transform(2.0, 0.75, 0.25, 0.75, kSym) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)laplace_exit_transform(1.0, 0.5, 0.0, 0.75, kSym), InvalidArgument);
    CHECK_THROWS_AS((void)laplace_exit_transform(1.0, 0.9, 0.25, 0.75, kSym), InvalidArgument);
}

TEST_CASE("Laplace transform matches a finite-difference oracle") {
    for (const auto& c : cases()) {
        for (double s : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            const double exact = laplace_exit_transform(s, c.m.p0, c.lo, c.hi, c.m);
            const double fd = fd_laplace(s, c.m.p0, c.lo, c.hi, c.m.kappa());
            CHECK_MESSAGE(std::abs(exact - fd) <= 1e-8, "s=" << s << " exact=" << exact
                                                            << " fd=" << fd);
            CHECK(exact > 0.0);
            CHECK(exact < 1.0);
        }
    }
}

TEST_CASE("Laplace transform is stable for large s") {
    const double v = laplace_exit_transform(1e6, 0.5, 0.25, 0.75, kSym);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    CHECK(v < 1e-100);
}

TEST_CASE("expected exit time examples") {
    CHECK(expected_exit_time(0.5, 0.25, 0.75, kSym) == doctest::Approx(std::log(3.0)));
    CHECK(expected_exit_time(0.5, 0.25, 0.75, kSym.with_kappa(2.0)) ==
          doctest::Approx(std::log(3.0) / 4.0));
    CHECK(expected_exit_time(0.25, 0.25, 0.75, kSym) == 0.0);
    CHECK(expected_exit_time(0.5, 0.5, 0.5, kSym) == 0.0);
}

TEST_CASE("expected exit time matches the finite-difference oracle and the integral route") {
    for (const auto& c : cases()) {
        const double exact = expected_exit_time(c.m.p0, c.lo, c.hi, c.m);
        const double fd = fd_mean(c.m.p0, c.lo, c.hi, c.m.kappa());
        CHECK(exact == doctest::Approx(fd).epsilon(1e-8));
        const double integ = expected_exit_time_by_integration(c.m.p0, c.lo, c.hi, c.m);
        CHECK(exact == doctest::Approx(integ).epsilon(1e-8));
    }
}

TEST_CASE("second moment matches the finite-difference oracle") {
    for (const auto& c : cases()) {
        const double exact = exit_time_second_moment(c.m.p0, c.lo, c.hi, c.m);
        const double fd = fd_second_moment(c.m.p0, c.lo, c.hi, c.m.kappa());
        CHECK(exact == doctest::Approx(fd).epsilon(1e-7));
        const double mean = expected_exit_time(c.m.p0, c.lo, c.hi, c.m);
        CHECK(exact > mean * mean);
    }
}

TEST_CASE("second moment agrees with simulation") {
    SimConfig cfg;
    cfg.n_paths = 8000;
    cfg.du = 1e-4;
    cfg.seed = 17;
    const auto stats =
        simulate_exit(kSym, 0.25, 0.75, GarblingPolicy::none(), cfg).stats(0.75);
    std::vector<double> sq;
    for (double t : stats.samples) sq.push_back(t * t);
    const auto m2 = HittingStats::from_samples(std::move(sq));
    const double exact = exit_time_second_moment(0.5, 0.25, 0.75, kSym);
    CHECK(std::abs(m2.mean - exact) <= 4.0 * m2.std_err);
}

TEST_CASE("potential examples") {
    const TerminalLaw point{{{0.5, 1.0}}};
    CHECK(potential(point, 0.3) == doctest::Approx(0.2));
    const TerminalLaw two{{{0.25, 0.5}, {0.75, 0.5}}};
    CHECK(potential(two, 0.5) == doctest::Approx(0.25));
    CHECK(potential(two, 0.0) == doctest::Approx(0.5));
    CHECK(potential(two, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("potential is convex and dominates the prior's") {
    const TerminalLaw three{{{0.1, 0.3}, {0.4, 0.3}, {0.9, 0.4}}};
    const TerminalLaw prior{{{three.mean(), 1.0}}};
    for (int i = 1; i < 200; ++i) {
        const double y = i / 200.0;
        const double h = 1e-3;
        CHECK(potential(three, y - h) - 2 * potential(three, y) + potential(three, y + h) >=
              -1e-14);
        CHECK(potential(three, y) >= potential(prior, y) - 1e-15);
    }
}

TEST_CASE("embedding time via the potential") {
    CHECK(embedding_time_via_potential(TerminalLaw{{{0.5, 1.0}}}, kSym) == 0.0);
    const TerminalLaw two{{{0.25, 0.5}, {0.75, 0.5}}};
    CHECK(std::abs(embedding_time_via_potential(two, kSym) - std::log(3.0)) <= 1e-6);
    const TerminalLaw split{{{0.2, 0.5 * 0.45 / 0.5}, {0.7, 0.5 * 0.05 / 0.5}, {0.75, 0.5}}};
    REQUIRE(split.mean() == doctest::Approx(0.5));
    CHECK(embedding_time_via_potential(split, kSym) > std::log(3.0) + 1e-6);
    const TerminalLaw touches{{{0.0, 1.0 / 3.0}, {0.75, 2.0 / 3.0}}};
    CHECK_THROWS_AS((void)embedding_time_via_potential(touches, kSym), InvalidArgument);
}

TEST_CASE("embedding time matches closed form for two-atom laws") {
    for (const auto& c : cases()) {
        const auto law = two_atom_law_from_lower(c.m, c.lo);
        CHECK(std::abs(embedding_time_via_potential(law, c.m) -
                       expected_exit_time(c.m.p0, c.lo, c.m.p_bar, c.m)) <= 1e-6);
    }
}

}  // TEST_SUITE

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/verify.hpp"

#include "persuasion/closed_forms.hpp"
#include "persuasion/costs.hpp"
#include "persuasion/dynamics.hpp"
#include "persuasion/rng.hpp"
#include "persuasion/solver.hpp"

#include <cmath>
#include <sstream>

namespace persuasion {

namespace {

// Symmetric benchmark: k = 1, p0 = 1/2, interval [1/4, 3/4], E[tau] = ln 3.
const ModelParams kBenchmark{1.0, 0.0, 1.0, 0.5, 0.75};
constexpr double kLower = 0.25;
constexpr double kUpper = 0.75;

CheckResult check(std::string name, bool passed, double observed, double expected,
                  std::string detail = {}) {
    return {std::move(name), passed, observed, expected, std::move(detail)};
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(10);
    s << x;
    return s.str();
}

std::vector<CostModel> benchmark_costs() {
    return {CostModel::linear(1.0), CostModel::power(1.0, 2.0),
            CostModel::laplace_mixture(1.0, {{1.0, -1.0}})};
}

std::vector<CheckResult> no_garbling_suite(std::uint64_t seed, unsigned workers) {
    std::vector<CheckResult> out;
    SimConfig cfg{10000, 1e-5, 10.0, seed, true};
    const std::vector<std::pair<std::string, GarblingPolicy>> policies = {
        {"half_below_prior", GarblingPolicy::piecewise({0.5}, {0.5, 1.0})},
        {"constant_half", GarblingPolicy::constant(0.5)},
        {"tabulated_ramp", GarblingPolicy::tabulated({0.25, 0.75}, {0.3, 1.0})},
        {"identity", GarblingPolicy::none()},
    };
    const auto costs = benchmark_costs();
    for (const auto& [name, phi] : policies) {
        const auto sim = coupled_no_garbling_comparison(kBenchmark, kLower, kUpper, phi, cfg,
                                                        workers);
        std::size_t dominated = 0;
        std::size_t matched = 0;
        std::size_t exact = 0;
        std::vector<double> tau_g;
        std::vector<double> tau_0;
        for (const auto& pair : sim.pairs) {
            dominated += pair.tau_g >= pair.tau_0;
            matched += pair.terminal_belief_g == pair.terminal_belief_0;
            if (name == "constant_half") exact += pair.tau_g == 2.0 * pair.tau_0;
            if (name == "identity") exact += pair.tau_g == pair.tau_0;
            tau_g.push_back(pair.tau_g);
            tau_0.push_back(pair.tau_0);
        }
        const auto n = static_cast<double>(sim.pairs.size());
        out.push_back(check("pathwise_dominance/" + name, dominated == sim.pairs.size(),
                            static_cast<double>(dominated) / n, 1.0));
        out.push_back(check("terminal_beliefs_match/" + name, matched == sim.pairs.size(),
                            static_cast<double>(matched) / n, 1.0));
        if (name == "constant_half" || name == "identity") {
            out.push_back(check("exact_time_scaling/" + name, exact == sim.pairs.size(),
                                static_cast<double>(exact) / n, 1.0));
        }
        for (const auto& cost : costs) {
            const double cg = sample_cost(cost, tau_g).value;
            const double c0 = sample_cost(cost, tau_0).value;
            out.push_back(check("cost_order/" + name + "/" +
                                    std::string(variant_name(cost.terms().front())),
                                cg >= c0, cg, c0, "mean c(tau_g) >= mean c(tau_0)"));
        }
    }
    return out;
}

std::vector<CheckResult> two_atom_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    const ModelParams& params = kBenchmark;
    const double p_max = params.p0 / params.p_bar;

    std::size_t valid = 0;
    bool decreasing = true;
    double prev_lower = 2.0;
    constexpr int kGrid = 50;
    for (int i = 0; i < kGrid; ++i) {
        const double p = p_max * i / (kGrid - 1);
        const auto law = make_two_atom_law(params, p);
        valid += validate_law(law, params).ok;
        const double lower = law.atoms.front().belief;
        if (i > 0 && !(lower < prev_lower)) decreasing = false;
        prev_lower = lower;
    }
    out.push_back(check("two_atom_laws_valid", valid == kGrid, valid, kGrid));
    out.push_back(check("lower_atom_strictly_decreasing", decreasing, decreasing, 1.0));

    const auto base = make_two_atom_law(params, 0.5);
    const double base_time = embedding_time_via_potential(base, params);
    PathRng rng(seed, 0, StreamDomain::test);
    for (int i = 0; i < 10; ++i) {
        const double a = 0.02 + 0.22 * rng.uniform();
        const double b = 0.26 + 0.48 * rng.uniform();
        const double m_a = 0.5 * (b - kLower) / (b - a);
        const TerminalLaw split{{{a, m_a}, {b, 0.5 - m_a}, {kUpper, 0.5}}};
        const double t = embedding_time_via_potential(split, params);
        out.push_back(check("mean_preserving_split_costlier/" + std::to_string(i),
                            validate_law(split, params).ok && t - base_time > 1e-6, t, base_time,
                            "split atoms " + fmt(a) + ", " + fmt(b)));
    }

    double worst = 0.0;
    for (double p0 : {0.3, 0.5, 0.7}) {
        for (double k : {0.5, 1.0, 2.0}) {
            const ModelParams m{k, 0.0, 1.0, p0, std::min(0.95, p0 + 0.2)};
            const double lo = p0 / 2.0;
            const auto law = two_atom_law_from_lower(m, lo);
            worst = std::max(worst, std::abs(embedding_time_via_potential(law, m) -
                                             expected_exit_time(p0, lo, m.p_bar, m)));
        }
    }
    out.push_back(check("potential_matches_closed_form", worst <= 1e-6, worst, 0.0,
                        "max abs difference over grid"));
    return out;
}

std::vector<CheckResult> closed_forms_suite(std::uint64_t seed, unsigned workers) {
    std::vector<CheckResult> out;
    const ModelParams& params = kBenchmark;
    const SimConfig cfg{20000, 1e-5, 10.0, seed, true};
    const auto sim = simulate_exit(params, kLower, kUpper, GarblingPolicy::none(), cfg, workers);
    const auto stats = sim.stats(kUpper);

    const double exact_mean = expected_exit_time(params.p0, kLower, kUpper, params);
    out.push_back(check("mean_exit_time_vs_closed_form",
                        std::abs(stats.mean - exact_mean) <= 3.0 * stats.std_err, stats.mean,
                        exact_mean, "tolerance 3 SE = " + fmt(3.0 * stats.std_err)));

    for (double s : {0.5, 1.0, 2.0}) {
        std::vector<double> disc;
        for (double t : stats.samples) disc.push_back(std::exp(-s * t));
        const auto d = HittingStats::from_samples(std::move(disc));
        const double exact = laplace_exit_transform(s, params.p0, kLower, kUpper, params);
        out.push_back(check("laplace_transform_vs_mc/s=" + fmt(s),
                            std::abs(d.mean - exact) <= 3.0 * d.std_err, d.mean, exact,
                            "tolerance 3 SE = " + fmt(3.0 * d.std_err)));
    }

    const double q = (params.p0 - kLower) / (kUpper - kLower);
    const double hit = stats.success_fraction();
    const double hit_se = std::sqrt(q * (1.0 - q) / static_cast<double>(stats.n));
    out.push_back(check("upper_hit_fraction", std::abs(hit - q) <= 3.0 * hit_se, hit, q));

    const double by_integration =
        expected_exit_time_by_integration(params.p0, kLower, kUpper, params);
    out.push_back(check("psi_integral_cross_check", std::abs(by_integration - exact_mean) <= 1e-6,
                        by_integration, exact_mean));

    const auto slope = [&](double s) {
        return (1.0 - laplace_exit_transform(s, params.p0, kLower, kUpper, params)) / s;
    };
    const double r1 = (10.0 * slope(1e-3) - slope(1e-2)) / 9.0;
    const double r2 = (10.0 * slope(1e-4) - slope(1e-3)) / 9.0;
    const double limit = (100.0 * r2 - r1) / 99.0;
    out.push_back(check("laplace_small_s_limit", std::abs(limit - exact_mean) <= 1e-3 * exact_mean,
                        limit, exact_mean));

    bool decreasing = true;
    double prev = 1.0;
    for (double s = 0.25; s <= 64.0; s *= 2.0) {
        const double v = laplace_exit_transform(s, params.p0, kLower, kUpper, params);
        if (!(v < prev)) decreasing = false;
        prev = v;
    }
    out.push_back(check("laplace_decreasing_in_s", decreasing, decreasing, 1.0));
    return out;
}

std::vector<CheckResult> comparative_statics_suite(unsigned workers) {
    std::vector<CheckResult> out;
    const ModelParams& params = kBenchmark;
    SolverOptions options;
    options.workers = workers;
    const auto base = CostModel::linear(0.1);

    const std::vector<double> weights{0.0, 0.1, 1.0, 10.0};
    const auto conv = sweep_convexity(base, weights, params, options);
    for (std::size_t i = 1; i < conv.size(); ++i) {
        const double prev = conv[i - 1].result.p_star;
        const double cur = conv[i].result.p_star;
        out.push_back(check("convexity_weakly_decreasing/w=" + fmt(conv[i].param),
                            cur <= prev + 1e-6, cur, prev));
    }

    const std::vector<double> kappas{0.5, 1.0, 2.0, 4.0};
    const auto snr = sweep_snr(base, kappas, params, options);
    for (std::size_t i = 1; i < snr.size(); ++i) {
        const double prev = snr[i - 1].result.p_star;
        const double cur = snr[i].result.p_star;
        out.push_back(check("snr_weakly_increasing/kappa=" + fmt(snr[i].param),
                            cur >= prev - 1e-6, cur, prev));
    }

    const double t1 = expected_exit_time(0.5, 0.25, 0.75, params.with_kappa(1.0));
    for (double k : kappas) {
        const double tk = expected_exit_time(0.5, 0.25, 0.75, params.with_kappa(k));
        const double predicted = t1 / (k * k);
        out.push_back(check("time_change_scaling/kappa=" + fmt(k),
                            std::abs(tk - predicted) <= 1e-12 * predicted, tk, predicted));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"no_garbling", "two_atom", "closed_forms",
                                                "comparative_statics"};
    return names;
}

std::vector<CheckResult> run_suite(std::string_view name, std::uint64_t seed, unsigned workers) {
    workers = resolve_workers(workers);
    if (name == "no_garbling") return no_garbling_suite(seed, workers);
    if (name == "two_atom") return two_atom_suite(seed);
    if (name == "closed_forms") return closed_forms_suite(seed, workers);
    if (name == "comparative_statics") return comparative_statics_suite(workers);
    throw InvalidArgument("unknown verification suite '" + std::string(name) + "'");
}

}  // namespace persuasion

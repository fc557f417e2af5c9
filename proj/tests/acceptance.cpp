// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "persuasion/cli.hpp"
#include "persuasion/closed_forms.hpp"
#include "persuasion/costs.hpp"
#include "persuasion/dynamics.hpp"
#include "persuasion/rng.hpp"
#include "persuasion/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace persuasion;
namespace fs = std::filesystem;

namespace {

const ModelParams kSym{1.0, 0.0, 1.0, 0.5, 0.75};
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::printf("%s criterion %d: %s [%s] (%.2f s)\n", o.passed ? "PASS" : "FAIL", id,
                title.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimConfig benchmark_sim(std::size_t n, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n_paths = n;
    cfg.du = 1e-5;
    cfg.max_u = 10.0;
    cfg.seed = seed;
    return cfg;
}

HittingStats benchmark_samples;

double phi_term(double x) { return (2.0 * x - 1.0) * std::log(x / (1.0 - x)); }

double scan_objective(double lower, double rate, const ModelParams& m) {
    const double q = (m.p0 - lower) / (m.p_bar - lower);
    const double k = (m.mu_h - m.mu_l) / m.sigma;
    const double mean =
        2.0 / (k * k) * (q * phi_term(m.p_bar) + (1.0 - q) * phi_term(lower) - phi_term(m.p0));
    return q - rate * mean;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome mean_exit_time() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sim = simulate_exit(kSym, 0.25, 0.75, GarblingPolicy::none(),
                                   benchmark_sim(100000, kSeed), 1);
    const double secs = seconds_since(t0);
    benchmark_samples = sim.stats(0.75);
    const double target = std::log(3.0);
    const double gap = std::abs(benchmark_samples.mean - target);
    const bool ok = gap <= 3.0 * benchmark_samples.std_err && secs < 60.0 &&
                    benchmark_samples.n == 100000;
    return {ok, "mean=" + num(benchmark_samples.mean) + " target=" + num(target) +
                    " |diff|/se=" + num(gap / benchmark_samples.std_err) +
                    " sim_time=" + num(secs) + "s"};
}

Outcome laplace_transform() {
    if (benchmark_samples.n == 0) return {false, "criterion 1 samples unavailable"};
    bool ok = true;
    std::string detail;
    for (double s : {0.5, 1.0, 2.0}) {
        std::vector<double> disc;
        disc.reserve(benchmark_samples.n);
        for (double t : benchmark_samples.samples) disc.push_back(std::exp(-s * t));
        const auto d = HittingStats::from_samples(std::move(disc));
        const double exact = laplace_exit_transform(s, 0.5, 0.25, 0.75, kSym);
        const double z = std::abs(d.mean - exact) / d.std_err;
        ok = ok && z <= 3.0;
        detail += "s=" + num(s) + ": mc=" + num(d.mean) + " exact=" + num(exact) +
                  " z=" + num(z) + "; ";
    }
    return {ok, detail};
}

Outcome exit_probability() {
    struct Cfg {
        ModelParams m;
        double lo;
        double hi;
    };
    const std::vector<Cfg> cfgs{
        {{1.0, 0.0, 1.0, 0.3, 0.75}, 0.1, 0.75},
        {{1.0, 0.0, 1.0, 0.6, 0.9}, 0.2, 0.9},
        {{2.0, 0.0, 1.0, 0.4, 0.5}, 0.05, 0.5},
        {{1.0, 0.0, 0.5, 0.15, 0.6}, 0.1, 0.6},
        {{3.0, 1.0, 1.5, 0.7, 0.8}, 0.3, 0.8},
    };
    bool ok = true;
    std::string detail;
    std::uint64_t seed = kSeed + 100;
    for (const auto& c : cfgs) {
        const auto stats =
            simulate_exit(c.m, c.lo, c.hi, GarblingPolicy::none(), benchmark_sim(20000, seed++))
                .stats(c.hi);
        const double q = (c.m.p0 - c.lo) / (c.hi - c.lo);
        const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(stats.n));
        const double z = std::abs(stats.success_fraction() - q) / se;
        ok = ok && z <= 3.0;
        detail += "[" + num(c.lo) + "," + num(c.hi) + "] p0=" + num(c.m.p0) +
                  " hit=" + num(stats.success_fraction()) + " q=" + num(q) + " z=" + num(z) +
                  "; ";
    }
    return {ok, detail};
}

Outcome no_garbling() {
    const auto phi = GarblingPolicy::piecewise({0.5}, {0.5, 1.0});
    const auto sim =
        coupled_no_garbling_comparison(kSym, 0.25, 0.75, phi, benchmark_sim(100000, kSeed + 1));
    std::size_t dominated = 0;
    std::size_t matched = 0;
    std::vector<double> tau_g;
    std::vector<double> tau_0;
    for (const auto& pair : sim.pairs) {
        dominated += pair.tau_g >= pair.tau_0;
        matched += pair.terminal_belief_g == pair.terminal_belief_0;
        tau_g.push_back(pair.tau_g);
        tau_0.push_back(pair.tau_0);
    }
    const std::size_t n = sim.pairs.size();
    bool ok = n == 100000 && dominated == n && matched == n;
    std::string detail = "paths=" + std::to_string(n) + " dominated=" + std::to_string(dominated) +
                         " matched=" + std::to_string(matched) + "; ";
    const std::vector<std::pair<std::string, CostModel>> costs{
        {"linear", CostModel::linear(1.0)},
        {"power2", CostModel::power(1.0, 2.0)},
        {"laplace", CostModel::laplace_mixture(1.0, {{1.0, -1.0}})},
    };
    for (const auto& [name, c] : costs) {
        const double g = sample_cost(c, tau_g).value;
        const double z = sample_cost(c, tau_0).value;
        ok = ok && g >= z;
        detail += name + ": " + num(g) + " >= " + num(z) + "; ";
    }
    return {ok, detail};
}

Outcome two_atom_dominance() {
    const auto base = two_atom_law_from_lower(kSym, 0.25);
    const double base_time = embedding_time_via_potential(base, kSym);
    PathRng rng(kSeed, 0, StreamDomain::test);
    bool ok = true;
    double min_margin = 1e300;
    for (int i = 0; i < 10; ++i) {
        // lower atom 0.25 (mass 1/2) split into a < 0.25 < b < p_bar
        const double a = 0.01 + 0.23 * rng.uniform();
        const double b = 0.26 + 0.48 * rng.uniform();
        const double m_a = 0.5 * (b - 0.25) / (b - a);
        const TerminalLaw split{{{a, m_a}, {b, 0.5 - m_a}, {0.75, 0.5}}};
        const bool valid = validate_law(split, kSym).ok;
        const double margin = embedding_time_via_potential(split, kSym) - base_time;
        ok = ok && valid && margin > 1e-6;
        min_margin = std::min(min_margin, margin);
    }
    return {ok, "base=" + num(base_time) + " min_margin=" + num(min_margin)};
}

Outcome potential_consistency() {
    const std::vector<double> priors{0.2, 0.35, 0.5, 0.65, 0.8};
    const std::vector<std::pair<double, double>> shapes{
        {0.1, 0.1}, {0.5, 0.5}, {0.9, 0.2}, {0.3, 0.8}, {0.7, 0.95}};
    const std::vector<double> kappas{0.5, 1.0, 3.0};
    double worst = 0.0;
    int count = 0;
    for (double p0 : priors) {
        for (const auto& [f_lo, f_hi] : shapes) {
            const double lo = p0 * (1.0 - f_lo);
            const double hi = p0 + (1.0 - p0) * f_hi;
            for (double k : kappas) {
                const ModelParams m{k, 0.0, 1.0, p0, hi};
                const auto law = two_atom_law_from_lower(m, lo);
                const double diff = std::abs(embedding_time_via_potential(law, m) -
                                             expected_exit_time(p0, lo, hi, m));
                worst = std::max(worst, diff);
                ++count;
            }
        }
    }
    return {worst <= 1e-6 && count == 75,
            "grid=" + std::to_string(count) + " max_abs_diff=" + num(worst)};
}

Outcome convexity_sweep() {
    const std::vector<double> weights{0.0, 0.1, 1.0, 10.0};
    const auto sweep = sweep_convexity(CostModel::linear(0.1), weights, kSym);
    bool ok = sweep.size() == weights.size();
    std::string detail;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (i > 0) ok = ok && sweep[i].result.p_star <= sweep[i - 1].result.p_star + 1e-6;
        detail += "w=" + num(sweep[i].param) + ":" + num(sweep[i].result.p_star) + " ";
    }
    return {ok, detail};
}

Outcome snr_sweep() {
    const std::vector<double> kappas{0.5, 1.0, 2.0, 4.0};
    const auto sweep = sweep_snr(CostModel::linear(0.1), kappas, kSym);
    bool ok = sweep.size() == kappas.size();
    std::string detail;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (i > 0) ok = ok && sweep[i].result.p_star >= sweep[i - 1].result.p_star - 1e-6;
        detail += "k=" + num(sweep[i].param) + ":" + num(sweep[i].result.p_star) + " ";
    }
    double worst = 0.0;
    for (double k1 : kappas) {
        for (double k2 : kappas) {
            const double t1 = expected_exit_time(0.5, 0.25, 0.75, kSym.with_kappa(k1));
            const double t2 = expected_exit_time(0.5, 0.25, 0.75, kSym.with_kappa(k2));
            const double predicted = t1 * (k1 / k2) * (k1 / k2);
            worst = std::max(worst, std::abs(t2 - predicted) / predicted);
        }
    }
    ok = ok && worst <= 1e-12;
    return {ok, detail + "scaling_rel_err=" + num(worst)};
}

Outcome residual_dominance() {
    const auto narrow = simulate_exit(kSym, 0.25, 0.75, GarblingPolicy::none(),
                                      benchmark_sim(100000, kSeed + 2))
                            .stats(0.75);
    const auto wide = simulate_exit(kSym, 0.2, 0.75, GarblingPolicy::none(),
                                    benchmark_sim(100000, kSeed + 3))
                          .stats(0.75);
    double t_max = 0.0;
    for (double t : narrow.samples) t_max = std::max(t_max, t);
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(t_max * i / 49.0);
    const auto rw = residual_curve_with_se(wide, grid);
    const auto rn = residual_curve_with_se(narrow, grid);
    double worst = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double se = std::hypot(rw[i].std_err, rn[i].std_err);
        const double slack = rw[i].value - rn[i].value + 2.0 * se;
        worst = std::min(worst, slack);
    }
    const bool icx = icx_dominates(wide, narrow, grid);
    return {worst >= 0.0 && icx, "min(R_wide - R_narrow + 2se)=" + num(worst) +
                                     " icx_dominates=" + (icx ? "true" : "false") +
                                     " mean_wide=" + num(wide.mean) +
                                     " mean_narrow=" + num(narrow.mean)};
}

Outcome solver_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = solve_sender(CostModel::linear(0.1), kSym);
    const double secs = seconds_since(t0);
    double best = 0.0;
    double best_lower = kSym.p0;
    constexpr int kScan = 100000;
    for (int i = 1; i < kScan; ++i) {
        const double lower = kSym.p0 * i / kScan;
        const double v = scan_objective(lower, 0.1, kSym);
        if (v > best) {
            best = v;
            best_lower = lower;
        }
    }
    const double diff = std::abs(r.objective - best);
    return {diff <= 1e-4 && secs < 10.0,
            "solver=" + num(r.objective) + " at " + num(r.lower_star) + " scan=" + num(best) +
                " at " + num(best_lower) + " |diff|=" + num(diff) + " solve_time=" +
                num(secs) + "s"};
}

Outcome determinism() {
    const char* env = std::getenv("PERSUADE_TEST_TMP");
    const fs::path root =
        (env ? fs::path(env) : fs::temp_directory_path() / "persuade_acceptance") / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto write_cfg = [&](const std::string& name, int workers) {
        const auto path = root / name;
        std::ofstream(path) << R"({"model": {"mu_h": 1.0, "mu_l": 0.0, "sigma": 1.0, "p0": 0.5, "p_bar": 0.75},
 "sim": {"n_paths": 2000, "du": 1e-5, "max_u": 10.0, "seed": 7, "bridge_correction": true},
 "garbling": {"type": "piecewise", "breaks": [0.5], "values": [0.5, 1.0]},
 "interval": {"lower": 0.25, "upper": 0.75},
 "workers": )" << workers << "}\n";
        return path.string();
    };
    const auto one = write_cfg("one.json", 1);
    const auto four = write_cfg("four.json", 4);
    std::ostringstream sink;
    int codes = 0;
    codes |= run_cli({"simulate", "--config", one, "--out-dir", (root / "a").string()}, sink, sink);
    codes |= run_cli({"simulate", "--config", one, "--out-dir", (root / "b").string()}, sink, sink);
    codes |= run_cli({"simulate", "--config", four, "--out-dir", (root / "c").string()}, sink, sink);
    if (codes != 0) return {false, "simulate failed: " + sink.str()};
    bool ok = true;
    std::string detail;
    for (const char* f : {"paths.csv", "summary.json"}) {
        const auto a = slurp(root / "a" / f);
        const bool rerun = !a.empty() && a == slurp(root / "b" / f);
        const bool workers = a == slurp(root / "c" / f);
        ok = ok && rerun && workers;
        detail += std::string(f) + ": rerun=" + (rerun ? "identical" : "DIFFERENT") +
                  " workers=" + (workers ? "identical" : "DIFFERENT") + "; ";
    }
    return {ok, detail};
}

}  // namespace

int main() {
    report(1, "mean exit time matches ln 3", mean_exit_time);
    report(2, "Laplace transform matches sampled discount factors", laplace_transform);
    report(3, "upper-hit fraction matches the martingale probability", exit_probability);
    report(4, "garbling delays every path and raises every cost", no_garbling);
    report(5, "mean-preserving splits strictly raise embedding time", two_atom_dominance);
    report(6, "potential integral equals closed-form exit time", potential_consistency);
    report(7, "convexity sweep: success probability weakly decreasing", convexity_sweep);
    report(8, "signal-to-noise sweep and time scaling", snr_sweep);
    report(9, "wider interval dominates in residual expected time", residual_dominance);
    report(10, "solver matches a dense brute-force scan", solver_oracle);
    report(11, "simulate artifacts are deterministic", determinism);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/dynamics.hpp"

#include "parallel.hpp"
#include "persuasion/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace persuasion {

namespace {

// Bridge crossing probabilities below exp(-kBridgeCutoff) are treated as zero.
constexpr double kBridgeCutoff = 40.0;

void check_interval(const ModelParams& params, double lower, double upper) {
    validate_params(params);
    if (!(lower < params.p0 && params.p0 < upper)) {
        throw InvalidArgument("interval must satisfy lower < p0 < upper");
    }
    if (!(lower > 0.0) || !(upper < 1.0)) {
        throw InvalidArgument(
            "interval touches an absorbing endpoint (lower = 0 or upper = 1): exit time is "
            "infinite, not simulated");
    }
}

void check_censoring(std::size_t censored, std::size_t n_paths) {
    if (censored * 100 > n_paths) {
        std::ostringstream msg;
        msg << censored << " of " << n_paths << " paths censored by max_u (more than 1%)";
        throw SimulationError(msg.str());
    }
}

struct WalkResult {
    double terminal_belief = 0.0;
    double u_exit = 0.0;
    double tau_0 = 0.0;
    double tau_g = 0.0;
    bool censored = false;
};

// Natural-scale walk p = p0 + B_u until exit from (lower, upper). Calendar
// time is accumulated by the trapezoidal rule for both the ungarbled
// integrand 1/sigma0^2 and the garbled one 1/(phi sigma0^2).
class NaturalScaleWalker {
public:
    NaturalScaleWalker(const ModelParams& params, double lower, double upper,
                       const GarblingPolicy& garbling, const SimConfig& cfg)
        : p0_(params.p0),
          lower_(lower),
          upper_(upper),
          inv_k2_(1.0 / (params.kappa() * params.kappa())),
          du_(cfg.du),
          sqrt_du_(std::sqrt(cfg.du)),
          max_steps_(static_cast<std::uint64_t>(std::floor(cfg.max_u / cfg.du))),
          bridge_(cfg.bridge_correction),
          garbling_(garbling),
          garbled_(!garbling.is_identity()) {}

    WalkResult run(std::size_t path_index, std::uint64_t seed) const {
        PathRng rng(seed, static_cast<std::uint32_t>(path_index));
        WalkResult out;
        double p = p0_;
        double f0 = base_integrand(p);
        double fg = garbled_integrand(p, f0);
        double sum0 = 0.0;
        double sumg = 0.0;
        for (std::uint64_t step = 0;; ++step) {
            if (step >= max_steps_) {
                out.censored = true;
                return out;
            }
            const double next = p + sqrt_du_ * rng.normal();
            double boundary = 0.0;
            double fraction = 0.0;
            if (next <= lower_ || next >= upper_) {
                boundary = next <= lower_ ? lower_ : upper_;
                fraction = (boundary - p) / (next - p);
            } else if (bridge_) {
                const double arg_lo = 2.0 * (p - lower_) * (next - lower_) / du_;
                const double arg_hi = 2.0 * (upper_ - p) * (upper_ - next) / du_;
                if (arg_lo < kBridgeCutoff || arg_hi < kBridgeCutoff) {
                    const double prob_lo = std::exp(-arg_lo);
                    const double prob_hi = std::exp(-arg_hi);
                    const double v = rng.uniform();
                    if (v < prob_lo) {
                        boundary = lower_;
                        fraction = 0.5;
                    } else if (v < prob_lo + prob_hi) {
                        boundary = upper_;
                        fraction = 0.5;
                    }
                }
            }
            if (fraction > 0.0) {
                const double fb0 = base_integrand(boundary);
                const double fbg = garbled_integrand(boundary, fb0);
                const double w = 0.5 * fraction * du_;
                out.terminal_belief = boundary;
                out.u_exit = (static_cast<double>(step) + fraction) * du_;
                out.tau_0 = 0.5 * du_ * sum0 + w * (f0 + fb0);
                out.tau_g = 0.5 * du_ * sumg + w * (fg + fbg);
                return out;
            }
            const double f0_next = base_integrand(next);
            const double fg_next = garbled_integrand(next, f0_next);
            sum0 += f0 + f0_next;
            sumg += fg + fg_next;
            p = next;
            f0 = f0_next;
            fg = fg_next;
        }
    }

private:
    double base_integrand(double p) const {
        const double v = p * (1.0 - p);
        return inv_k2_ / (v * v);
    }

    double garbled_integrand(double p, double f0) const {
        if (!garbled_) return f0;
        const double phi = garbling_(p);
        return phi > 0.0 ? f0 / phi : std::numeric_limits<double>::infinity();
    }

    double p0_;
    double lower_;
    double upper_;
    double inv_k2_;
    double du_;
    double sqrt_du_;
    std::uint64_t max_steps_;
    bool bridge_;
    const GarblingPolicy& garbling_;
    bool garbled_;
};

struct EulerResult {
    double tau = 0.0;
    bool upper_hit = false;
    bool censored = false;
};

// Calendar-time Euler-Maruyama walk of dp = sqrt(phi(p)) sigma0(p) dW.
class EulerWalker {
public:
    EulerWalker(const ModelParams& params, double lower, double upper,
                const GarblingPolicy& garbling, const SimConfig& cfg)
        : params_(params),
          lower_(lower),
          upper_(upper),
          dt_(cfg.du),
          sqrt_dt_(std::sqrt(cfg.du)),
          max_steps_(static_cast<std::uint64_t>(std::floor(cfg.max_u / cfg.du))),
          bridge_(cfg.bridge_correction),
          garbling_(garbling) {}

    // Runs until exit or max_steps. observer(step, p, absorbed) sees the
    // belief after every step; returning false stops an interior path early.
    template <class Observer>
    EulerResult run(std::size_t path_index, std::uint64_t seed, std::uint64_t max_steps,
                    Observer&& observer) const {
        PathRng rng(seed, static_cast<std::uint32_t>(path_index), StreamDomain::calendar_euler);
        EulerResult out;
        double p = params_.p0;
        for (std::uint64_t step = 0;; ++step) {
            if (step >= max_steps) {
                out.censored = true;
                return out;
            }
            const double vol = std::sqrt(garbling_(p)) * sigma0(p, params_);
            const double next = p + vol * sqrt_dt_ * rng.normal();
            if (next <= lower_ || next >= upper_) {
                const double boundary = next <= lower_ ? lower_ : upper_;
                out.tau = (static_cast<double>(step) + (boundary - p) / (next - p)) * dt_;
                out.upper_hit = boundary == upper_;
                observer(step + 1, boundary, true);
                return out;
            }
            if (bridge_ && vol > 0.0) {
                const double var = vol * vol * dt_;
                const double arg_lo = 2.0 * (p - lower_) * (next - lower_) / var;
                const double arg_hi = 2.0 * (upper_ - p) * (upper_ - next) / var;
                if (arg_lo < kBridgeCutoff || arg_hi < kBridgeCutoff) {
                    const double prob_lo = std::exp(-arg_lo);
                    const double prob_hi = std::exp(-arg_hi);
                    const double v = rng.uniform();
                    if (v < prob_lo + prob_hi) {
                        out.upper_hit = v >= prob_lo;
                        out.tau = (static_cast<double>(step) + 0.5) * dt_;
                        observer(step + 1, out.upper_hit ? upper_ : lower_, true);
                        return out;
                    }
                }
            }
            p = next;
            if (!observer(step + 1, p, false)) {
                out.censored = true;
                return out;
            }
        }
    }

    [[nodiscard]] std::uint64_t max_steps() const { return max_steps_; }
    [[nodiscard]] double dt() const { return dt_; }

private:
    const ModelParams& params_;
    double lower_;
    double upper_;
    double dt_;
    double sqrt_dt_;
    std::uint64_t max_steps_;
    bool bridge_;
    const GarblingPolicy& garbling_;
};

}  // namespace

void validate_sim_config(const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw InvalidArgument("n_paths >= 1 violated");
    if (!(cfg.du > 0.0) || !std::isfinite(cfg.du)) throw InvalidArgument("du > 0 violated");
    if (!(cfg.max_u > 0.0) || !std::isfinite(cfg.max_u)) {
        throw InvalidArgument("max_u must be positive and finite");
    }
    if (cfg.n_paths > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument("n_paths exceeds the 2^32 stream limit");
    }
}

double sigma0(double p, const ModelParams& params) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return params.kappa() * p * (1.0 - p);
}

unsigned resolve_workers(unsigned workers) {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

HittingStats ExitSimulation::stats(double upper) const {
    std::vector<double> taus;
    std::vector<bool> hits;
    taus.reserve(paths.size());
    hits.reserve(paths.size());
    for (const auto& p : paths) {
        taus.push_back(p.tau);
        hits.push_back(p.terminal_belief == upper);
    }
    return HittingStats::from_samples(std::move(taus), std::move(hits));
}

ExitSimulation simulate_exit(const ModelParams& params, double lower, double upper,
                             const GarblingPolicy& garbling, const SimConfig& cfg,
                             unsigned workers) {
    check_interval(params, lower, upper);
    validate_sim_config(cfg);
    const NaturalScaleWalker walker(params, lower, upper, garbling, cfg);
    std::vector<WalkResult> raw(cfg.n_paths);
    detail::parallel_for(cfg.n_paths, resolve_workers(workers),
                         [&](std::size_t i) { raw[i] = walker.run(i, cfg.seed); });

    ExitSimulation out;
    out.paths.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].censored || !std::isfinite(raw[i].tau_g)) {
            ++out.censored;
            continue;
        }
        out.paths.push_back({i, raw[i].terminal_belief, raw[i].tau_g, raw[i].u_exit});
    }
    check_censoring(out.censored, cfg.n_paths);
    return out;
}

CoupledSimulation coupled_no_garbling_comparison(const ModelParams& params, double lower,
                                                 double upper, const GarblingPolicy& garbling,
                                                 const SimConfig& cfg, unsigned workers) {
    check_interval(params, lower, upper);
    validate_sim_config(cfg);
    const NaturalScaleWalker walker(params, lower, upper, garbling, cfg);
    std::vector<WalkResult> raw(cfg.n_paths);
    detail::parallel_for(cfg.n_paths, resolve_workers(workers),
                         [&](std::size_t i) { raw[i] = walker.run(i, cfg.seed); });

    CoupledSimulation out;
    out.pairs.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].censored || !std::isfinite(raw[i].tau_g)) {
            ++out.censored;
            continue;
        }
        // One driving path serves both clocks, so the exited boundary is shared.
        out.pairs.push_back({i, raw[i].terminal_belief, raw[i].terminal_belief, raw[i].tau_g,
                             raw[i].tau_0, raw[i].u_exit});
    }
    check_censoring(out.censored, cfg.n_paths);
    return out;
}

std::vector<ResidualPoint> residual_curve_with_se(const HittingStats& stats,
                                                  std::span<const double> t_grid) {
    if (stats.samples.empty()) throw InvalidArgument("residual curve of an empty sample set");
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        if (!(t_grid[j] >= 0.0) || (j > 0 && t_grid[j] < t_grid[j - 1])) {
            throw InvalidArgument("t_grid must be nonnegative and increasing");
        }
    }
    const auto n = static_cast<double>(stats.samples.size());
    std::vector<ResidualPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (double tau : stats.samples) {
            const double r = std::max(tau - t, 0.0);
            sum += r;
            sum_sq += r * r;
        }
        const double mean = sum / n;
        double se = 0.0;
        if (n > 1) {
            const double var = std::max(sum_sq - n * mean * mean, 0.0) / (n - 1.0);
            se = std::sqrt(var / n);
        }
        out.push_back({mean, se});
    }
    return out;
}

std::vector<double> residual_curve(const HittingStats& stats, std::span<const double> t_grid) {
    const auto points = residual_curve_with_se(stats, t_grid);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& pt : points) out.push_back(pt.value);
    return out;
}

HittingStats direct_euler_check(const ModelParams& params, double lower, double upper,
                                const GarblingPolicy& garbling, const SimConfig& cfg,
                                unsigned workers) {
    check_interval(params, lower, upper);
    validate_sim_config(cfg);
    const EulerWalker walker(params, lower, upper, garbling, cfg);
    std::vector<EulerResult> raw(cfg.n_paths);
    detail::parallel_for(cfg.n_paths, resolve_workers(workers), [&](std::size_t i) {
        raw[i] = walker.run(i, cfg.seed, walker.max_steps(),
                            [](std::uint64_t, double, bool) { return true; });
    });

    std::vector<double> taus;
    std::vector<bool> hits;
    std::size_t censored = 0;
    for (const auto& r : raw) {
        if (r.censored) {
            ++censored;
            continue;
        }
        taus.push_back(r.tau);
        hits.push_back(r.upper_hit);
    }
    check_censoring(censored, cfg.n_paths);
    return HittingStats::from_samples(std::move(taus), std::move(hits));
}

std::vector<MeanEstimate> euler_belief_profile(const ModelParams& params, double lower,
                                               double upper, const GarblingPolicy& garbling,
                                               const SimConfig& cfg,
                                               std::span<const double> horizons,
                                               unsigned workers) {
    check_interval(params, lower, upper);
    validate_sim_config(cfg);
    if (horizons.empty()) return {};
    std::vector<std::uint64_t> marks;
    for (std::size_t j = 0; j < horizons.size(); ++j) {
        if (!(horizons[j] >= 0.0) || (j > 0 && horizons[j] < horizons[j - 1])) {
            throw InvalidArgument("horizons must be nonnegative and increasing");
        }
        marks.push_back(static_cast<std::uint64_t>(std::llround(horizons[j] / cfg.du)));
    }
    const EulerWalker walker(params, lower, upper, garbling, cfg);
    const std::size_t m = marks.size();
    std::vector<double> beliefs(cfg.n_paths * m, params.p0);
    detail::parallel_for(cfg.n_paths, resolve_workers(workers), [&](std::size_t i) {
        double* row = beliefs.data() + i * m;
        std::size_t next_mark = 0;
        while (next_mark < m && marks[next_mark] == 0) ++next_mark;
        // Stops one step past the last horizon; the result flag is irrelevant.
        (void)walker.run(i, cfg.seed, marks.back() + 1,
                         [&](std::uint64_t step, double p, bool absorbed) {
                             while (next_mark < m && marks[next_mark] <= step) {
                                 row[next_mark++] = p;
                             }
                             if (absorbed) {
                                 while (next_mark < m) row[next_mark++] = p;
                             }
                             return next_mark < m;
                         });
    });

    std::vector<MeanEstimate> out;
    const auto n = static_cast<double>(cfg.n_paths);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < cfg.n_paths; ++i) {
            const double p = beliefs[i * m + j];
            sum += p;
            sum_sq += p * p;
        }
        const double mean = sum / n;
        const double var = n > 1 ? std::max(sum_sq - n * mean * mean, 0.0) / (n - 1.0) : 0.0;
        out.push_back({mean, std::sqrt(var / n)});
    }
    return out;
}

}  // namespace persuasion

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace persuasion {

ModelParams ModelParams::with_kappa(double k) const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InvalidArgument("kappa must be positive and finite");
    }
    ModelParams out = *this;
    out.mu_h = mu_l + k * sigma;
    return out;
}

ModelParams ModelParams::with_prior(double p) const {
    ModelParams out = *this;
    out.p0 = p;
    return out;
}

void validate_params(const ModelParams& params) {
    const auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(params.mu_h) || !finite(params.mu_l) || !finite(params.sigma) ||
        !finite(params.p0) || !finite(params.p_bar)) {
        throw InvalidArgument("model parameters must be finite");
    }
    if (!(params.mu_h > params.mu_l)) {
        throw InvalidArgument("mu_h > mu_l violated");
    }
    if (!(params.sigma > 0.0)) {
        throw InvalidArgument("sigma > 0 violated");
    }
    if (!(params.p0 > 0.0 && params.p0 < 1.0)) {
        throw InvalidArgument("0 < p0 < 1 violated");
    }
    if (!(params.p_bar > 0.0 && params.p_bar < 1.0)) {
        throw InvalidArgument("0 < p_bar < 1 violated");
    }
    if (!(params.p0 < params.p_bar)) {
        throw InvalidArgument("p0 < p_bar violated (p0 >= p_bar is degenerate)");
    }
}

double TerminalLaw::total_mass() const {
    return std::accumulate(atoms.begin(), atoms.end(), 0.0,
                           [](double acc, const Atom& a) { return acc + a.mass; });
}

double TerminalLaw::mean() const {
    return std::accumulate(atoms.begin(), atoms.end(), 0.0,
                           [](double acc, const Atom& a) { return acc + a.belief * a.mass; });
}

double TerminalLaw::min_belief() const {
    if (atoms.empty()) throw InvalidArgument("empty terminal law");
    return std::min_element(atoms.begin(), atoms.end(),
                            [](const Atom& a, const Atom& b) { return a.belief < b.belief; })
        ->belief;
}

double TerminalLaw::max_belief() const {
    if (atoms.empty()) throw InvalidArgument("empty terminal law");
    return std::max_element(atoms.begin(), atoms.end(),
                            [](const Atom& a, const Atom& b) { return a.belief < b.belief; })
        ->belief;
}

TerminalLaw make_law(std::vector<Atom> atoms) {
    TerminalLaw law{std::move(atoms)};
    const double total = law.total_mass();
    if (total > 0.0 && total != 1.0 && std::abs(total - 1.0) < kLawTolerance) {
        for (auto& a : law.atoms) a.mass /= total;
    }
    return law;
}

TerminalLaw make_two_atom_law(const ModelParams& params, double p_success) {
    validate_params(params);
    const double p_max = params.p0 / params.p_bar;
    if (!(p_success >= 0.0) || p_success > p_max * (1.0 + 1e-12) || !(p_success < 1.0)) {
        std::ostringstream msg;
        msg << "p_success must lie in [0, p0/p_bar] = [0, " << p_max << "], got " << p_success;
        throw InvalidArgument(msg.str());
    }
    if (p_success == 0.0) {
        return TerminalLaw{{{params.p0, 1.0}}};
    }
    double lower = (params.p0 - p_success * params.p_bar) / (1.0 - p_success);
    if (lower < 0.0) {
        // only reachable through rounding at p_success == p0/p_bar
        lower = 0.0;
    }
    return TerminalLaw{{{lower, 1.0 - p_success}, {params.p_bar, p_success}}};
}

double success_probability(const ModelParams& params, double lower) {
    return (params.p0 - lower) / (params.p_bar - lower);
}

TerminalLaw two_atom_law_from_lower(const ModelParams& params, double lower) {
    validate_params(params);
    if (!(lower >= 0.0 && lower <= params.p0)) {
        throw InvalidArgument("lower atom must lie in [0, p0]");
    }
    if (lower == params.p0) {
        return TerminalLaw{{{params.p0, 1.0}}};
    }
    const double p = success_probability(params, lower);
    return TerminalLaw{{{lower, 1.0 - p}, {params.p_bar, p}}};
}

LawReport validate_law(const TerminalLaw& law, const ModelParams& params) {
    LawReport report;
    const auto fail = [&report](std::string what) {
        report.ok = false;
        report.violations.push_back(std::move(what));
    };
    if (law.atoms.empty()) {
        fail("law has no atoms");
        return report;
    }
    for (std::size_t i = 0; i < law.atoms.size(); ++i) {
        const Atom& a = law.atoms[i];
        if (!(a.belief >= 0.0 && a.belief <= 1.0)) {
            std::ostringstream msg;
            msg << "atom " << i << " belief " << a.belief << " outside [0,1]";
            fail(msg.str());
        }
        if (!(a.mass > 0.0 && a.mass <= 1.0)) {
            std::ostringstream msg;
            msg << "atom " << i << " mass " << a.mass << " outside (0,1]";
            fail(msg.str());
        }
        if (i > 0 && !(law.atoms[i - 1].belief < a.belief)) {
            std::ostringstream msg;
            msg << "support not strictly increasing at atom " << i;
            fail(msg.str());
        }
    }
    report.mass_error = law.total_mass() - 1.0;
    report.mean_error = law.mean() - params.p0;
    if (std::abs(report.mass_error) > kLawTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "masses sum to 1 + " << report.mass_error;
        fail(msg.str());
    }
    if (std::abs(report.mean_error) > kLawTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "mean " << law.mean() << " differs from p0 " << params.p0 << " by "
            << report.mean_error;
        fail(msg.str());
    }
    return report;
}

GarblingPolicy::GarblingPolicy() : GarblingPolicy(Kind::constant, {}, {1.0}) {}

GarblingPolicy::GarblingPolicy(Kind kind, std::vector<double> knots, std::vector<double> values)
    : kind_(kind), knots_(std::move(knots)), values_(std::move(values)) {
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidArgument("garbling attenuation must lie in [0,1]");
        }
    }
    if (!std::is_sorted(knots_.begin(), knots_.end()) ||
        std::adjacent_find(knots_.begin(), knots_.end()) != knots_.end()) {
        throw InvalidArgument("garbling knots must be strictly increasing");
    }
}

GarblingPolicy GarblingPolicy::none() { return GarblingPolicy(); }

GarblingPolicy GarblingPolicy::constant(double value) {
    return GarblingPolicy(Kind::constant, {}, {value});
}

GarblingPolicy GarblingPolicy::piecewise(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1) {
        throw InvalidArgument("piecewise garbling needs one more value than breaks");
    }
    return GarblingPolicy(Kind::piecewise, std::move(breaks), std::move(values));
}

GarblingPolicy GarblingPolicy::tabulated(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size() || grid.empty()) {
        throw InvalidArgument("tabulated garbling needs matching, nonempty grid and values");
    }
    return GarblingPolicy(Kind::tabulated, std::move(grid), std::move(values));
}

double GarblingPolicy::operator()(double p) const {
    switch (kind_) {
    case Kind::constant:
        return values_.front();
    case Kind::piecewise: {
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), p);
        return values_[static_cast<std::size_t>(it - knots_.begin())];
    }
    case Kind::tabulated: {
        if (p <= knots_.front()) return values_.front();
        if (p >= knots_.back()) return values_.back();
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), p);
        const auto hi = static_cast<std::size_t>(it - knots_.begin());
        const auto lo = hi - 1;
        const double w = (p - knots_[lo]) / (knots_[hi] - knots_[lo]);
        return values_[lo] + w * (values_[hi] - values_[lo]);
    }
    }
    return 1.0;
}

bool GarblingPolicy::is_identity() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; });
}

HittingStats HittingStats::from_samples(std::vector<double> samples, std::vector<bool> success) {
    HittingStats s;
    s.n = samples.size();
    if (s.n > 0) {
        double sum = 0.0;
        for (double x : samples) sum += x;
        s.mean = sum / static_cast<double>(s.n);
        if (s.n > 1) {
            double ss = 0.0;
            for (double x : samples) ss += (x - s.mean) * (x - s.mean);
            s.std_err = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
        }
    }
    s.samples = std::move(samples);
    s.success_indicator = std::move(success);
    return s;
}

double HittingStats::success_fraction() const {
    if (success_indicator.empty()) return 0.0;
    const auto hits = std::count(success_indicator.begin(), success_indicator.end(), true);
    return static_cast<double>(hits) / static_cast<double>(success_indicator.size());
}

}  // namespace persuasion

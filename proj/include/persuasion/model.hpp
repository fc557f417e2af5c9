// SPDX-License-Identifier: Apache-2.0
//
// Domain types for continuous-time persuasion with costly delay: model
// parameters of the belief diffusion, finitely supported terminal laws,
// state-dependent garbling (quadratic-variation attenuation) and Monte Carlo
// hitting-time summaries.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace persuasion {

/// Raised for parameter or configuration values that violate a model
/// invariant. The message names the violated invariant.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Belief-diffusion parameters. The drift of the observed signal is mu_h in
/// the high state and mu_l in the low state, with common volatility sigma.
struct ModelParams {
    double mu_h = 1.0;
    double mu_l = 0.0;
    double sigma = 1.0;
    double p0 = 0.5;
    double p_bar = 0.75;

    /// Signal-to-noise ratio (mu_h - mu_l) / sigma.
    [[nodiscard]] double kappa() const { return (mu_h - mu_l) / sigma; }

    /// Copy with the drift gap rescaled so that kappa() == k (sigma and mu_l kept).
    [[nodiscard]] ModelParams with_kappa(double k) const;

    /// Copy with a different prior.
    [[nodiscard]] ModelParams with_prior(double p) const;

    bool operator==(const ModelParams&) const = default;
};

/// Throws InvalidArgument naming the first violated invariant.
void validate_params(const ModelParams& params);

struct Atom {
    double belief = 0.0;
    double mass = 0.0;

    bool operator==(const Atom&) const = default;
};

/// Finitely supported distribution of terminal posteriors.
struct TerminalLaw {
    std::vector<Atom> atoms;

    [[nodiscard]] double total_mass() const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double min_belief() const;
    [[nodiscard]] double max_belief() const;
    [[nodiscard]] bool is_point_mass() const { return atoms.size() == 1; }

    bool operator==(const TerminalLaw&) const = default;
};

inline constexpr double kLawTolerance = 1e-12;

/// Builds a law from raw atoms, rescaling the masses when their sum differs
/// from one by less than kLawTolerance. Larger drift is left for
/// validate_law() to report.
[[nodiscard]] TerminalLaw make_law(std::vector<Atom> atoms);

/// Two-point law (1-p) delta_{lower} + p delta_{p_bar} whose lower atom is
/// pinned down by the martingale constraint. p_success == 0 gives the point
/// mass at the prior.
[[nodiscard]] TerminalLaw make_two_atom_law(const ModelParams& params, double p_success);

/// Success probability (p0 - lower) / (p_bar - lower) of the two-point law
/// with lower atom `lower`.
[[nodiscard]] double success_probability(const ModelParams& params, double lower);

/// Two-point law from its lower atom; lower == p0 gives the point mass.
[[nodiscard]] TerminalLaw two_atom_law_from_lower(const ModelParams& params, double lower);

struct LawReport {
    bool ok = true;
    double mass_error = 0.0;   ///< sum of masses - 1
    double mean_error = 0.0;   ///< sum belief*mass - p0
    std::vector<std::string> violations;
};

/// Checks mass normalization, Bayes plausibility and support ordering.
[[nodiscard]] LawReport validate_law(const TerminalLaw& law, const ModelParams& params);

/// State-dependent attenuation phi(p) in [0, 1] of the posterior's
/// quadratic variation. phi == 1 is no garbling.
class GarblingPolicy {
public:
    enum class Kind { constant, piecewise, tabulated };

    /// phi == 1.
    GarblingPolicy();

    [[nodiscard]] static GarblingPolicy none();
    [[nodiscard]] static GarblingPolicy constant(double value);
    /// values[i] applies on [breaks[i-1], breaks[i]); values.size() == breaks.size() + 1.
    [[nodiscard]] static GarblingPolicy piecewise(std::vector<double> breaks, std::vector<double> values);
    /// Linear interpolation on an increasing grid, held constant outside it.
    [[nodiscard]] static GarblingPolicy tabulated(std::vector<double> grid, std::vector<double> values);

    [[nodiscard]] double operator()(double p) const;

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_identity() const;
    [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

private:
    GarblingPolicy(Kind kind, std::vector<double> knots, std::vector<double> values);

    Kind kind_;
    std::vector<double> knots_;
    std::vector<double> values_;
};

/// Summary of Monte Carlo stopping-time draws.
struct HittingStats {
    std::vector<double> samples;
    std::vector<bool> success_indicator;  ///< true when the upper boundary was hit
    std::size_t n = 0;
    double mean = 0.0;
    double std_err = 0.0;

    [[nodiscard]] static HittingStats from_samples(std::vector<double> samples,
                                                   std::vector<bool> success = {});
    [[nodiscard]] double success_fraction() const;
};

}  // namespace persuasion

// SPDX-License-Identifier: Apache-2.0
#include "persuasion/io.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <string_view>

namespace persuasion {

namespace {

void expect_keys(const Json& j, std::string_view where,
                 std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional = {}) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
    for (auto key : required) {
        if (!j.contains(key)) {
            throw ConfigError(std::string(where) + ": missing key '" + std::string(key) + "'");
        }
    }
    for (const auto& [key, value] : j.items()) {
        const auto known = [&key](std::string_view k) { return k == key; };
        if (std::none_of(required.begin(), required.end(), known) &&
            std::none_of(optional.begin(), optional.end(), known)) {
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

double number(const Json& j, std::string_view where, std::string_view key) {
    const auto& v = j.at(std::string(key));
    if (!v.is_number()) {
        throw ConfigError(std::string(where) + "." + std::string(key) + ": expected a number");
    }
    return v.get<double>();
}

std::vector<double> number_array(const Json& j, std::string_view where, std::string_view key) {
    const auto& v = j.at(std::string(key));
    if (!v.is_array()) {
        throw ConfigError(std::string(where) + "." + std::string(key) + ": expected an array");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw ConfigError(std::string(where) + "." + std::string(key) +
                              ": expected numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::pair<double, double>> pair_array(const Json& j, std::string_view where,
                                                  std::string_view key) {
    const auto& v = j.at(std::string(key));
    const auto bad = [&] {
        return ConfigError(std::string(where) + "." + std::string(key) +
                           ": expected an array of [x, y] pairs");
    };
    if (!v.is_array()) throw bad();
    std::vector<std::pair<double, double>> out;
    for (const auto& x : v) {
        if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number()) throw bad();
        out.emplace_back(x[0].get<double>(), x[1].get<double>());
    }
    return out;
}

Json cost_term_json(const CostTerm& term) {
    Json j;
    j["variant"] = std::string(variant_name(term));
    if (const auto* c = std::get_if<LinearCost>(&term)) {
        j["rate"] = c->rate;
    } else if (const auto* c = std::get_if<PowerCost>(&term)) {
        j["coef"] = c->coef;
        j["exponent"] = c->exponent;
    } else if (const auto* c = std::get_if<LaplaceMixtureCost>(&term)) {
        j["affine_rate"] = c->affine_rate;
        j["atoms"] = Json::array();
        for (const auto& a : c->atoms) j["atoms"].push_back({a.s, a.weight});
    } else if (const auto* c = std::get_if<TabulatedCost>(&term)) {
        j["knots"] = Json::array();
        for (const auto& k : c->knots) j["knots"].push_back({k.t, k.c});
    }
    return j;
}

}  // namespace

Json to_json(const ModelParams& params) {
    return Json{{"mu_h", params.mu_h},
                {"mu_l", params.mu_l},
                {"sigma", params.sigma},
                {"p0", params.p0},
                {"p_bar", params.p_bar}};
}

Json to_json(const TerminalLaw& law) {
    Json atoms = Json::array();
    for (const auto& a : law.atoms) atoms.push_back({a.belief, a.mass});
    return Json{{"atoms", atoms}};
}

Json to_json(const SimConfig& cfg) {
    return Json{{"n_paths", cfg.n_paths},
                {"du", cfg.du},
                {"max_u", cfg.max_u},
                {"seed", cfg.seed},
                {"bridge_correction", cfg.bridge_correction}};
}

Json to_json(const CostModel& cost) {
    if (cost.terms().size() == 1) return cost_term_json(cost.terms().front());
    Json terms = Json::array();
    for (const auto& t : cost.terms()) terms.push_back(cost_term_json(t));
    return Json{{"variant", "sum"}, {"terms", terms}};
}

Json to_json(const GarblingPolicy& garbling) {
    switch (garbling.kind()) {
    case GarblingPolicy::Kind::constant:
        if (garbling.is_identity()) return Json{{"type", "none"}};
        return Json{{"type", "constant"}, {"value", garbling.values().front()}};
    case GarblingPolicy::Kind::piecewise:
        return Json{{"type", "piecewise"},
                    {"breaks", garbling.knots()},
                    {"values", garbling.values()}};
    case GarblingPolicy::Kind::tabulated:
        return Json{{"type", "tabulated"},
                    {"grid", garbling.knots()},
                    {"values", garbling.values()}};
    }
    return Json{{"type", "none"}};
}

Json to_json(const SolveResult& result) {
    Json trace = Json::array();
    for (const auto& t : result.trace) trace.push_back({t.lower, t.objective});
    return Json{{"p_star", result.p_star},
                {"lower_star", result.lower_star},
                {"objective", result.objective},
                {"cost_at_opt", result.cost_at_opt},
                {"trace", trace}};
}

ModelParams model_params_from_json(const Json& j) {
    constexpr std::string_view where = "model";
    expect_keys(j, where, {"mu_h", "mu_l", "sigma", "p0", "p_bar"});
    return ModelParams{number(j, where, "mu_h"), number(j, where, "mu_l"),
                       number(j, where, "sigma"), number(j, where, "p0"),
                       number(j, where, "p_bar")};
}

TerminalLaw terminal_law_from_json(const Json& j) {
    expect_keys(j, "law", {"atoms"});
    std::vector<Atom> atoms;
    for (const auto& [b, m] : pair_array(j, "law", "atoms")) atoms.push_back({b, m});
    return make_law(std::move(atoms));
}

SimConfig sim_config_from_json(const Json& j) {
    constexpr std::string_view where = "sim";
    expect_keys(j, where, {"n_paths", "du", "max_u", "seed", "bridge_correction"});
    SimConfig cfg;
    const auto& n = j.at("n_paths");
    if (!n.is_number_integer() || n.get<long long>() < 0) {
        throw ConfigError("sim.n_paths: expected a nonnegative integer");
    }
    cfg.n_paths = n.get<std::size_t>();
    cfg.du = number(j, where, "du");
    cfg.max_u = number(j, where, "max_u");
    const auto& seed = j.at("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("sim.seed: expected an unsigned integer");
    cfg.seed = seed.get<std::uint64_t>();
    const auto& bridge = j.at("bridge_correction");
    if (!bridge.is_boolean()) throw ConfigError("sim.bridge_correction: expected a boolean");
    cfg.bridge_correction = bridge.get<bool>();
    return cfg;
}

CostModel cost_model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string()) {
        throw ConfigError("cost: expected an object with a string 'variant'");
    }
    const auto variant = j.at("variant").get<std::string>();
    constexpr std::string_view where = "cost";
    if (variant == "linear") {
        expect_keys(j, where, {"variant", "rate"});
        return CostModel::linear(number(j, where, "rate"));
    }
    if (variant == "power") {
        expect_keys(j, where, {"variant", "coef", "exponent"});
        return CostModel::power(number(j, where, "coef"), number(j, where, "exponent"));
    }
    if (variant == "laplace_mixture") {
        expect_keys(j, where, {"variant", "affine_rate", "atoms"});
        std::vector<LaplaceAtom> atoms;
        for (const auto& [s, w] : pair_array(j, where, "atoms")) atoms.push_back({s, w});
        return CostModel::laplace_mixture(number(j, where, "affine_rate"), std::move(atoms));
    }
    if (variant == "tabulated") {
        expect_keys(j, where, {"variant", "knots"});
        std::vector<CostKnot> knots;
        for (const auto& [t, c] : pair_array(j, where, "knots")) knots.push_back({t, c});
        return CostModel::tabulated(std::move(knots));
    }
    if (variant == "sum") {
        expect_keys(j, where, {"variant", "terms"});
        const auto& terms = j.at("terms");
        if (!terms.is_array() || terms.empty()) {
            throw ConfigError("cost.terms: expected a nonempty array");
        }
        CostModel total = cost_model_from_json(terms.front());
        for (std::size_t i = 1; i < terms.size(); ++i) total = total + cost_model_from_json(terms[i]);
        return total;
    }
    throw ConfigError("cost: unknown variant '" + variant + "'");
}

GarblingPolicy garbling_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ConfigError("garbling: expected an object with a string 'type'");
    }
    const auto type = j.at("type").get<std::string>();
    constexpr std::string_view where = "garbling";
    try {
        if (type == "none") {
            expect_keys(j, where, {"type"});
            return GarblingPolicy::none();
        }
        if (type == "constant") {
            expect_keys(j, where, {"type", "value"});
            return GarblingPolicy::constant(number(j, where, "value"));
        }
        if (type == "piecewise") {
            expect_keys(j, where, {"type", "breaks", "values"});
            return GarblingPolicy::piecewise(number_array(j, where, "breaks"),
                                             number_array(j, where, "values"));
        }
        if (type == "tabulated") {
            expect_keys(j, where, {"type", "grid", "values"});
            return GarblingPolicy::tabulated(number_array(j, where, "grid"),
                                             number_array(j, where, "values"));
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("garbling: ") + e.what());
    }
    throw ConfigError("garbling: unknown type '" + type + "'");
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_paths_csv(std::ostream& out, std::span<const PathOutcome> paths) {
    out << "path_index,terminal_belief,tau,u_exit\n";
    for (const auto& p : paths) {
        out << p.path_index << ',' << format_double(p.terminal_belief) << ','
            << format_double(p.tau) << ',' << format_double(p.u_exit) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> sweep) {
    out << "sweep_param,p_star,lower_star,objective,cost_at_opt\n";
    for (const auto& s : sweep) {
        out << format_double(s.param) << ',' << format_double(s.result.p_star) << ','
            << format_double(s.result.lower_star) << ',' << format_double(s.result.objective)
            << ',' << format_double(s.result.cost_at_opt) << '\n';
    }
}

}  // namespace persuasion

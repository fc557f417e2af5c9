// SPDX-License-Identifier: Apache-2.0
#include "persuasion/io.hpp"
#include "persuasion/rng.hpp"

#include <doctest.h>

#include <sstream>
#include <vector>

using namespace persuasion;

TEST_SUITE("io") {

TEST_CASE("model params use exactly the documented keys") {
    const ModelParams m{1.5, -0.5, 2.0, 0.4, 0.8};
    const Json j = to_json(m);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"mu_h", "mu_l", "sigma", "p0", "p_bar"});
    CHECK(model_params_from_json(j) == m);
}

TEST_CASE("sim config keys and round trip") {
    SimConfig cfg{123, 2e-5, 7.5, 18446744073709551615ull, false};
    const Json j = to_json(cfg);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys ==
          std::vector<std::string>{"n_paths", "du", "max_u", "seed", "bridge_correction"});
    CHECK(sim_config_from_json(Json::parse(j.dump())) == cfg);
}

TEST_CASE("missing and unknown keys are rejected") {
    Json j = to_json(ModelParams{1.0, 0.0, 1.0, 0.5, 0.75});
    Json extra = j;
    extra["kappa"] = 1.0;
    CHECK_THROWS_WITH_AS((void)model_params_from_json(extra), doctest::Contains("kappa"),
                         ConfigError);
    Json missing = j;
    missing.erase("p_bar");
    CHECK_THROWS_WITH_AS((void)model_params_from_json(missing), doctest::Contains("p_bar"),
                         ConfigError);
    Json wrong = j;
    wrong["sigma"] = "one";
    CHECK_THROWS_AS((void)model_params_from_json(wrong), ConfigError);
    CHECK_THROWS_AS((void)cost_model_from_json(Json{{"variant", "linear"}, {"rate", 1.0},
                                                    {"extra", 2}}),
                    ConfigError);
    CHECK_THROWS_AS((void)cost_model_from_json(Json{{"variant", "quartic"}}), ConfigError);
    CHECK_THROWS_AS((void)garbling_from_json(Json{{"type", "constant"}}), ConfigError);
    CHECK_THROWS_AS((void)garbling_from_json(Json{{"type", "constant"}, {"value", 2.0}}),
                    ConfigError);
    CHECK_THROWS_AS((void)sim_config_from_json(Json{{"n_paths", -1}, {"du", 1e-5},
                                                    {"max_u", 10.0}, {"seed", 1},
                                                    {"bridge_correction", true}}),
                    ConfigError);
}

TEST_CASE("cost models round trip through JSON") {
    const std::vector<CostModel> models{
        CostModel::linear(0.1),
        CostModel::power(2.0, 1.5),
        CostModel::laplace_mixture(1.25, {{1.0, -1.0}, {2.5, -0.1}}),
        CostModel::tabulated({{0.0, 0.0}, {1.0, 0.5}, {3.0, 2.5}}),
        CostModel::linear(0.1) + CostModel::power(3.0, 2.0),
    };
    for (const auto& c : models) {
        const Json j = to_json(c);
        const auto back = cost_model_from_json(Json::parse(j.dump()));
        CHECK(to_json(back) == j);
        for (double t : {0.0, 0.3, 1.7, 5.0}) CHECK(back(t) == c(t));
    }
}

TEST_CASE("random garbling policies round trip") {
    PathRng rng(42, 0, StreamDomain::test);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 6);
        std::vector<double> knots;
        double x = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x += 0.01 + rng.uniform() * 0.1;
            knots.push_back(x);
        }
        std::vector<double> values;
        for (std::size_t i = 0; i <= n; ++i) values.push_back(rng.uniform());
        const auto pw = GarblingPolicy::piecewise(knots, values);
        values.pop_back();
        const auto tab = GarblingPolicy::tabulated(knots, values);
        for (const auto& g : {pw, tab, GarblingPolicy::constant(values[0])}) {
            const auto back = garbling_from_json(Json::parse(to_json(g).dump()));
            for (int i = 0; i <= 20; ++i) CHECK(back(i / 20.0) == g(i / 20.0));
        }
    }
    CHECK(garbling_from_json(Json{{"type", "none"}}).is_identity());
}

TEST_CASE("terminal law round trip") {
    const TerminalLaw law{{{0.1, 0.25}, {0.6, 0.75}}};
    CHECK(terminal_law_from_json(Json::parse(to_json(law).dump())) == law);
}

TEST_CASE("CSV output") {
    std::ostringstream paths;
    const std::vector<PathOutcome> rows{{0, 0.25, 1.5, 0.1}, {3, 0.75, 0.1, 0.2}};
    write_paths_csv(paths, rows);
    CHECK(paths.str() ==
          "path_index,terminal_belief,tau,u_exit\n"
          "0,0.25,1.5,0.10000000000000001\n"
          "3,0.75,0.10000000000000001,0.20000000000000001\n");
    std::ostringstream sweep;
    const std::vector<SweepPoint> pts{{0.5, SolveResult{0.5, 0.25, 0.1, 0.4, {}}}};
    write_sweep_csv(sweep, pts);
    CHECK(sweep.str() ==
          "sweep_param,p_star,lower_star,objective,cost_at_opt\n"
          "0.5,0.5,0.25,0.10000000000000001,0.40000000000000002\n");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

}  // TEST_SUITE

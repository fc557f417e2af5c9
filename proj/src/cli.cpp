// SPDX-License-Identifier: Apache-2.0
#include "persuasion/cli.hpp"

#include "persuasion/closed_forms.hpp"
#include "persuasion/io.hpp"
#include "persuasion/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace persuasion {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kResidualGridPoints = 50;

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::string suite;
};

// Config sections. Only the ones a command needs are required.
struct Config {
    Json raw;
    unsigned workers = 1;

    bool has(const char* key) const { return raw.contains(key); }
    const Json& section(const char* key) const {
        if (!raw.contains(key)) {
            throw ConfigError(std::string("config: missing section '") + key + "'");
        }
        return raw.at(key);
    }
};

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    Config cfg;
    try {
        cfg.raw = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!cfg.raw.is_object()) throw ConfigError("config: top level must be an object");
    static const std::set<std::string> known{"model", "sim",   "garbling", "interval", "law",
                                             "cost",  "solve", "sweep",    "workers"};
    for (const auto& [key, value] : cfg.raw.items()) {
        if (!known.count(key)) throw ConfigError("config: unknown section '" + key + "'");
    }
    if (cfg.raw.contains("workers")) {
        const auto& w = cfg.raw.at("workers");
        if (!w.is_number_unsigned()) throw ConfigError("config: workers must be an unsigned integer");
        cfg.workers = w.get<unsigned>();
    }
    return cfg;
}

ModelParams load_model(const Config& cfg) {
    const auto params = model_params_from_json(cfg.section("model"));
    try {
        validate_params(params);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    return params;
}

SimConfig load_sim(const Config& cfg, const Options& opts) {
    auto sim = sim_config_from_json(cfg.section("sim"));
    if (opts.seed_override) sim.seed = *opts.seed_override;
    try {
        validate_sim_config(sim);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("sim: ") + e.what());
    }
    return sim;
}

std::pair<double, double> load_interval(const Config& cfg, const ModelParams& params) {
    if (cfg.has("interval")) {
        const auto& j = cfg.raw.at("interval");
        if (!j.is_object() || !j.contains("lower") || !j.at("lower").is_number()) {
            throw ConfigError("interval: expected {\"lower\": number, \"upper\": number}");
        }
        for (const auto& [key, value] : j.items()) {
            if (key != "lower" && key != "upper") {
                throw ConfigError("interval: unknown key '" + key + "'");
            }
        }
        double upper = params.p_bar;
        if (j.contains("upper")) {
            if (!j.at("upper").is_number()) throw ConfigError("interval.upper: expected a number");
            upper = j.at("upper").get<double>();
        }
        return {j.at("lower").get<double>(), upper};
    }
    if (cfg.has("law")) {
        const auto law = terminal_law_from_json(cfg.raw.at("law"));
        const auto report = validate_law(law, params);
        if (!report.ok) throw ConfigError("law: " + report.violations.front());
        if (law.atoms.size() != 2) throw ConfigError("law: simulate needs a two-point law");
        return {law.atoms[0].belief, law.atoms[1].belief};
    }
    throw ConfigError("config: simulate needs an 'interval' or 'law' section");
}

SolverOptions load_solver_options(const Config& cfg, const Options& opts) {
    SolverOptions options;
    options.workers = cfg.workers;
    if (cfg.has("solve")) {
        const auto& j = cfg.raw.at("solve");
        if (!j.is_object()) throw ConfigError("solve: expected an object");
        for (const auto& [key, value] : j.items()) {
            if (key == "grid_n") {
                if (!value.is_number_unsigned()) throw ConfigError("solve.grid_n: expected a count");
                options.grid_n = value.get<std::size_t>();
            } else if (key == "eps_low") {
                if (!value.is_number()) throw ConfigError("solve.eps_low: expected a number");
                options.eps_low = value.get<double>();
            } else {
                throw ConfigError("solve: unknown key '" + key + "'");
            }
        }
        if (options.grid_n < 16) throw ConfigError("solve.grid_n >= 16 violated");
    }
    if (cfg.has("sim")) options.mc = MonteCarloSpec{load_sim(cfg, opts), cfg.workers};
    return options;
}

std::vector<double> load_sweep_values(const Config& cfg, const char* key) {
    const auto& j = cfg.section("sweep");
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw ConfigError(std::string("sweep: expected an array '") + key + "'");
    }
    std::vector<double> values;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError(std::string("sweep.") + key + ": expected numbers");
        values.push_back(v.get<double>());
    }
    if (values.empty()) throw ConfigError(std::string("sweep.") + key + ": empty");
    return values;
}

void write_file(const fs::path& path, const std::string& contents) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << contents;
}

int cmd_simulate(const Options& opts, std::ostream& out) {
    const auto cfg = load_config(opts.config_path);
    const auto params = load_model(cfg);
    const auto sim_cfg = load_sim(cfg, opts);
    const auto garbling = garbling_from_json(cfg.section("garbling"));
    const auto [lower, upper] = load_interval(cfg, params);
    if (!(lower > 0.0 && lower < params.p0 && params.p0 < upper && upper < 1.0)) {
        throw ConfigError("interval: 0 < lower < p0 < upper < 1 violated");
    }

    const auto sim = simulate_exit(params, lower, upper, garbling, sim_cfg, cfg.workers);
    const auto stats = sim.stats(upper);
    if (stats.n == 0) throw SimulationError("no uncensored paths");

    std::ostringstream csv;
    write_paths_csv(csv, sim.paths);

    const double t_max = *std::max_element(stats.samples.begin(), stats.samples.end());
    std::vector<double> grid(kResidualGridPoints);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = t_max * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    Json summary{{"n_paths", sim_cfg.n_paths},
                 {"n_uncensored", stats.n},
                 {"censored", sim.censored},
                 {"lower", lower},
                 {"upper", upper},
                 {"mean_tau", stats.mean},
                 {"std_err", stats.std_err},
                 {"upper_hit_fraction", stats.success_fraction()},
                 {"upper_hit_fraction_exact", (params.p0 - lower) / (upper - lower)}};
    if (garbling.is_identity()) {
        summary["mean_tau_closed_form"] = expected_exit_time(params.p0, lower, upper, params);
    }
    summary["residual_curve"] = Json{{"t", grid}, {"r", residual_curve(stats, grid)}};

    const fs::path dir(opts.out_dir);
    write_file(dir / "paths.csv", csv.str());
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    out << "mean_tau=" << format_double(stats.mean) << " std_err=" << format_double(stats.std_err)
        << " upper_hit_fraction=" << format_double(stats.success_fraction())
        << " censored=" << sim.censored << "\n";
    return kExitOk;
}

int cmd_solve(const Options& opts, std::ostream& out) {
    const auto cfg = load_config(opts.config_path);
    const auto params = load_model(cfg);
    const auto cost = cost_model_from_json(cfg.section("cost"));
    const auto options = load_solver_options(cfg, opts);
    const auto result = solve_sender(cost, params, options);
    write_file(fs::path(opts.out_dir) / "solve.json", to_json(result).dump(2) + "\n");
    out << "p_star=" << format_double(result.p_star)
        << " lower_star=" << format_double(result.lower_star)
        << " objective=" << format_double(result.objective) << "\n";
    return kExitOk;
}

int cmd_sweep(const Options& opts, std::ostream& out, bool convexity) {
    const auto cfg = load_config(opts.config_path);
    const auto params = load_model(cfg);
    const auto cost = cost_model_from_json(cfg.section("cost"));
    const auto options = load_solver_options(cfg, opts);
    const auto values = load_sweep_values(cfg, convexity ? "weights" : "kappas");
    std::vector<SweepPoint> sweep;
    try {
        sweep = convexity ? sweep_convexity(cost, values, params, options)
                          : sweep_snr(cost, values, params, options);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    const auto name = convexity ? "sweep_convexity.csv" : "sweep_snr.csv";
    write_file(fs::path(opts.out_dir) / name, csv.str());
    out << csv.str();
    return kExitOk;
}

int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), opts.suite) == names.end()) {
        throw ConfigError("verify: unknown suite '" + opts.suite + "'");
    }
    std::uint64_t seed = 20240601;
    unsigned workers = 0;
    if (!opts.config_path.empty()) {
        const auto cfg = load_config(opts.config_path);
        workers = cfg.workers;
        if (cfg.has("sim")) seed = load_sim(cfg, opts).seed;
    }
    if (opts.seed_override) seed = *opts.seed_override;

    const auto checks = run_suite(opts.suite, seed, workers);
    std::vector<std::string> failed;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " observed=" << format_double(c.observed)
            << " expected=" << format_double(c.expected);
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
        if (!c.passed) failed.push_back(c.name);
    }
    if (!failed.empty()) {
        err << "ERR: verification failed:";
        for (const auto& f : failed) err << ' ' << f;
        err << "\n";
        return kExitVerification;
    }
    out << opts.suite << ": " << checks.size() << " checks passed\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opts;
    CLI::App app{"Continuous-time persuasion: simulation, closed forms and sender solver",
                 "persuade"};
    app.require_subcommand(1);

    const auto add_common = [&opts](CLI::App* cmd, bool config_required) {
        auto* config = cmd->add_option("--config", opts.config_path, "JSON config file");
        if (config_required) config->required();
        cmd->add_option("--out-dir", opts.out_dir, "output directory");
        cmd->add_option("--seed-override", opts.seed_override, "replace sim.seed");
    };
    auto* simulate = app.add_subcommand("simulate", "simulate exit times");
    auto* solve = app.add_subcommand("solve", "solve the sender problem");
    auto* sweep_conv = app.add_subcommand("sweep-convexity", "sweep quadratic cost weights");
    auto* sweep_snr_cmd = app.add_subcommand("sweep-snr", "sweep signal-to-noise ratios");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    for (auto* cmd : {simulate, solve, sweep_conv, sweep_snr_cmd}) add_common(cmd, true);
    add_common(verify, false);
    verify->add_option("suite", opts.suite, "no_garbling | two_atom | closed_forms | comparative_statics")
        ->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "ERR: usage: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opts, out);
        if (solve->parsed()) return cmd_solve(opts, out);
        if (sweep_conv->parsed()) return cmd_sweep(opts, out, true);
        if (sweep_snr_cmd->parsed()) return cmd_sweep(opts, out, false);
        return cmd_verify(opts, out, err);
    } catch (const ConfigError& e) {
        err << "ERR: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CostModelError& e) {
        err << "ERR: cost model: " << e.what() << "\n";
        return kExitCostModel;
    } catch (const SimulationError& e) {
        err << "ERR: simulation: " << e.what() << "\n";
        return kExitSimulation;
    } catch (const InvalidArgument& e) {
        err << "ERR: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "ERR: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace persuasion

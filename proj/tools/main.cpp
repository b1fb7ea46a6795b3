// Command-line front end: simulate / optimize / landscape / robustness /
// gradcheck over a JSON run configuration.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "ingrape/config.hpp"
#include "ingrape/io.hpp"

namespace fs = std::filesystem;
using namespace ingrape;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error(ErrorCode::IoFailure, "cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir;  // overrides config output.directory when set
    std::optional<std::uint64_t> seed_override;
};

RunConfiguration load(const CommonArgs& args) {
    RunConfiguration config = parse_config(slurp(args.config_path));
    if (args.seed_override) {
        config.master_seed = *args.seed_override;
        config.normalized["master_seed"] = *args.seed_override;
    }
    if (!args.out_dir.empty()) {
        config.output_dir = args.out_dir;
        config.normalized["output"]["directory"] = args.out_dir;
    }
    return config;
}

fs::path prepare_out_dir(const RunConfiguration& config) {
    fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoFailure, "cannot create output directory '" + dir.string() + "'");
    }
    return dir;
}

PWCControls zero_controls(const RunConfiguration& config) {
    PWCControls controls;
    controls.grid = config.grid;
    controls.u.setZero(config.grid.intervals, config.system.n_coherent());
    controls.w.setZero(config.grid.intervals, config.system.n_incoherent());
    return controls;
}

DensityMatrix simulate_initial_state(const RunConfiguration& config) {
    if (config.initial_state) {
        return *config.initial_state;
    }
    if (const auto* st = std::get_if<StateTransfer>(&config.objective.variant())) {
        return st->initial;
    }
    if (const auto* om = std::get_if<ObservableMean>(&config.objective.variant())) {
        if (om->initial) return *om->initial;
    }
    return DensityMatrix::ground_state(config.system.dim());
}

PWCControls starting_controls(const RunConfiguration& config) {
    if (config.controls) {
        return *config.controls;
    }
    InitSpec init = config.init;
    init.seed = derive_run_seed(config.master_seed, 0);
    return init_random_controls(config.system, config.grid, init);
}

void write_stream_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ostringstream ss;
    body(ss);
    write_text_file(path.string(), ss.str());
}

RunResult optimize_once(const RunConfiguration& config) {
    PWCControls controls0 = starting_controls(config);
    RunResult run = optimize(config.objective, config.system, controls0, config.optimizer);
    run.seed = config.controls ? 0 : derive_run_seed(config.master_seed, 0);
    return run;
}

void write_run_outputs(const fs::path& dir, const RunResult& run) {
    write_stream_file(dir / "history.csv", [&](std::ostream& os) { write_history_csv(os, run); });
    write_text_file((dir / "controls.json").string(),
                    controls_to_json(run.final_controls).dump(2) + "\n");
    nlohmann::json summary{{"final_value", run.final_value},
                           {"iterations", run.iterations_used},
                           {"flag", stop_reason_name(run.converged)},
                           {"seed", run.seed}};
    write_text_file((dir / "result.json").string(), summary.dump(2) + "\n");
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfiguration config = load(args);
    const fs::path dir = prepare_out_dir(config);
    const PWCControls controls = config.controls ? *config.controls : zero_controls(config);
    const Trajectory traj = propagate(config.system, controls, simulate_initial_state(config));
    write_stream_file(dir / "trajectory.csv",
                      [&](std::ostream& os) { write_trajectory_csv(os, traj, config.grid); });
    std::cout << "simulate: wrote " << (dir / "trajectory.csv").string() << " ("
              << traj.states.size() << " rows)\n";
    return kExitOk;
}

int cmd_optimize(const CommonArgs& args) {
    const RunConfiguration config = load(args);
    const fs::path dir = prepare_out_dir(config);
    const RunResult run = optimize_once(config);
    if (run.aborted()) {
        write_run_outputs(dir, run);
        std::cerr << "optimize: aborted on non-finite values\n";
        return kExitRuntimeError;
    }
    write_run_outputs(dir, run);
    std::cout << "optimize: final value " << format_double(run.final_value) << " after "
              << run.iterations_used << " iterations (" << stop_reason_name(run.converged)
              << ")\n";
    return kExitOk;
}

int cmd_landscape(const CommonArgs& args, int workers) {
    const RunConfiguration config = load(args);
    const fs::path dir = prepare_out_dir(config);
    LandscapeConfig lc;
    lc.launches = config.landscape.launches;
    lc.bins = config.landscape.bins;
    lc.master_seed = config.master_seed;
    lc.init = config.init;
    lc.optimizer = config.optimizer;
    const LandscapeResult result = run_landscape(config.objective, config.system, config.grid, lc,
                                                 workers);
    write_stream_file(dir / "values.csv", [&](std::ostream& os) { write_values_csv(os, result); });
    write_stream_file(dir / "histogram.csv",
                      [&](std::ostream& os) { write_histogram_csv(os, result); });
    write_text_file((dir / "clusters.json").string(), clusters_to_json(result).dump(2) + "\n");
    std::cout << "landscape: " << lc.launches << " launches, " << result.clusters.size()
              << " cluster(s)";
    for (const auto& c : result.clusters) {
        std::cout << " [mean " << format_double(c.mean) << ", n=" << c.count << "]";
    }
    std::cout << "\n";
    return kExitOk;
}

int cmd_robustness(const CommonArgs& args) {
    const RunConfiguration config = load(args);
    const fs::path dir = prepare_out_dir(config);
    PWCControls controls = [&] {
        if (!config.robustness.controls_file.empty()) {
            const auto doc = nlohmann::json::parse(slurp(config.robustness.controls_file));
            return controls_from_json(doc);
        }
        if (config.controls) {
            return *config.controls;
        }
        return optimize_once(config).final_controls;
    }();
    check_shapes(config.system, controls);
    const RobustnessReport report =
        robustness_scan(config.objective, config.system, controls, config.robustness.levels,
                        config.robustness.samples, derive_run_seed(config.master_seed, 1));
    write_stream_file(dir / "robustness.csv",
                      [&](std::ostream& os) { write_robustness_csv(os, report); });
    std::cout << "robustness: unperturbed value " << format_double(report.unperturbed_value)
              << ", " << report.levels.size() << " level(s)\n";
    return kExitOk;
}

int cmd_gradcheck(const CommonArgs& args, double tol) {
    const RunConfiguration config = load(args);
    const PWCControls controls = starting_controls(config);
    const GradientVector analytic = gradient(config.objective, config.system, controls);
    const GradientVector fd = finite_difference_gradient(config.objective, config.system, controls);
    const double err = gradient_relative_error(analytic, fd);
    std::cout << "gradcheck: max relative error " << format_double(err) << " (tolerance "
              << format_double(tol) << ")\n";
    if (!(err <= tol)) {
        std::cerr << "gradcheck: FAILED\n";
        return kExitVerificationFailed;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-system control: GKSL simulation and coherent+incoherent pulse optimization"};
    app.require_subcommand(1);

    CommonArgs args;
    int workers = 0;
    double gradcheck_tol = 1e-5;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "run configuration (JSON)")->required();
        cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", args.seed_override, "override master_seed");
    };

    auto* simulate = app.add_subcommand("simulate", "propagate and dump the trajectory");
    add_common(simulate);
    auto* optimize_cmd = app.add_subcommand("optimize", "single seeded optimization run");
    add_common(optimize_cmd);
    auto* landscape = app.add_subcommand("landscape", "multi-start landscape statistics");
    add_common(landscape);
    landscape->add_option("--workers", workers, "parallel launches (default: hardware)");
    auto* robustness = app.add_subcommand("robustness", "perturbation scan of controls");
    add_common(robustness);
    auto* gradcheck = app.add_subcommand("gradcheck", "analytic vs finite-difference gradient");
    add_common(gradcheck);
    gradcheck->add_option("--tol", gradcheck_tol, "max allowed relative error");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (optimize_cmd->parsed()) return cmd_optimize(args);
        if (landscape->parsed()) return cmd_landscape(args, workers);
        if (robustness->parsed()) return cmd_robustness(args);
        if (gradcheck->parsed()) return cmd_gradcheck(args, gradcheck_tol);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::SyntaxInvalid:
            case ErrorCode::SchemaInvalid:
            case ErrorCode::PhysicsInvalid:
            case ErrorCode::DomainInvalid:
                return kExitConfigError;
            default:
                return kExitRuntimeError;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

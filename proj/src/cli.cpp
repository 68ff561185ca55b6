#include "covest/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "covest/estimator_glm.hpp"
#include "covest/estimator_ml.hpp"
#include "covest/harness.hpp"
#include "covest/io.hpp"
#include "covest/plot.hpp"
#include "covest/rng.hpp"
#include "covest/run_config.hpp"

namespace covest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SweepArgs {
    std::string config;
    std::string out;
    int workers = -1;
    std::optional<std::uint64_t> seed;
};

struct EstimateArgs {
    std::string input;
    std::string estimator = "exact";
    double mu = 0.0;
    std::string out = ".";
};

struct SimulateArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
}

void print_diagnostics(std::ostream& err, const ConfigError& e) {
    err << "error: invalid config\n";
    for (const auto& d : e.diagnostics())
        err << "  " << d << '\n';
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    try {
        cfg = load_sweep_config(args.config);
    } catch (const ConfigError& e) {
        print_diagnostics(err, e);
        return exit_code::usage;
    }
    if (args.seed)
        cfg.plan.seed = *args.seed;
    const int workers = args.workers >= 0 ? args.workers : cfg.workers.value_or(0);
    const fs::path dir = !args.out.empty() ? fs::path(args.out) : fs::path(cfg.out_dir.value_or("."));

    const SweepResult result = run_sweep(cfg.plan, workers);

    std::ostringstream csv;
    write_sweep_csv(csv, result.rows);
    std::ostringstream svg;
    write_loss_plot_svg(svg, result.rows, "Beamforming loss: " + fs::path(args.config).stem().string());

    fs::create_directories(dir);
    write_file(dir / "sweep.csv", csv.str());
    write_file(dir / "sweep.svg", svg.str());
    if (cfg.dump_trials) {
        std::ostringstream jl;
        write_trials_jsonl(jl, result.reports);
        write_file(dir / "trials.jsonl", jl.str());
    }
    out << csv.str();

    int failed = 0;
    for (const auto& r : result.rows)
        failed += r.failed;
    if (failed > 0) {
        for (const auto& r : result.reports)
            if (r.failed) {
                err << "error: " << failed << " trial(s) failed; first: " << r.error << '\n';
                break;
            }
        return exit_code::numeric;
    }
    return exit_code::ok;
}

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
    const auto kind = parse_estimator(args.estimator);
    if (!kind) {
        err << "error: unknown estimator '" << args.estimator << "'\n";
        return exit_code::usage;
    }
    if (!(args.mu >= 0.0)) {
        err << "error: --mu must be nonnegative\n";
        return exit_code::usage;
    }
    MeasurementSet m;
    try {
        m = read_measurements_file(args.input);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }

    EstimatorConfig cfg;
    cfg.mu = args.mu;
    json doc;
    doc["estimator"] = to_string(*kind);
    doc["mu"] = args.mu;
    doc["n"] = m.dim();
    doc["warning"] = nullptr;
    SolveTrace trace;

    try {
        std::optional<HermitianMatrix> q_hat;
        if (*kind == EstimatorKind::exact_ml) {
            auto [q, t] = solve_exact_ml(m, cfg);
            q_hat = std::move(q);
            trace = std::move(t);
        } else if (*kind == EstimatorKind::approx_ml) {
            auto [c, t] = solve_approx_ml(m, cfg);
            q_hat = reconstruct_q(c, m.directions, m.dim());
            doc["coefficients"] = to_json(c);
            trace = std::move(t);
        }

        if (q_hat) {
            const DominantEigenpair top = max_eigenvector(*q_hat);
            RealVector lambda(m.count());
            kernels::probe_powers(*q_hat, m.directions, m.gamma, lambda);
            doc["q"] = to_json(*q_hat);
            doc["beam"] = to_json(top.vector);
            doc["lambda_max"] = top.value;
            doc["objective"] = objective_j_mu(*q_hat, m, args.mu);
            doc["fitted_lambda"] = std::vector<double>(lambda.data(), lambda.data() + lambda.size());
            doc["trace"] = to_json(trace);
            if (trace.terminated_by == Termination::step_underflow)
                doc["warning"] = "step-underflow";
        } else {
            Index best = 0;
            for (Index l = 1; l < m.count(); ++l)
                if (m.powers(l) > m.powers(best))
                    best = l;
            doc["beam"] = to_json(max_power_beam(m));
            doc["selected_index"] = best;
        }
    } catch (const NumericError& e) {
        err << "error: numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return exit_code::numeric;
    } catch (const DomainError& e) {
        err << "error: numeric failure: " << e.what() << '\n';
        return exit_code::numeric;
    }

    const fs::path dir(args.out);
    fs::create_directories(dir);
    write_file(dir / "estimate.json", doc.dump(2) + "\n");
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_file(dir / "trace.csv", csv.str());
    if (!doc["warning"].is_null())
        err << "warning: " << doc["warning"].get<std::string>() << '\n';
    out << "wrote " << (dir / "estimate.json").string() << '\n';
    return exit_code::ok;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    SimulateConfig cfg;
    try {
        cfg = load_simulate_config(args.config);
    } catch (const ConfigError& e) {
        print_diagnostics(err, e);
        return exit_code::usage;
    }
    if (args.seed)
        cfg.seed = *args.seed;
    const fs::path dir = !args.out.empty() ? fs::path(args.out) : fs::path(cfg.out_dir.value_or("."));

    const std::uint64_t seed = trial_seed(cfg.seed, 0);
    const ChannelScene scene = sample_scene(stream_seed(seed, Stream::scene), cfg.scene);
    const HermitianMatrix q = scene_covariance(scene);
    DirectionMatrix u = sample_directions(cfg.scene.geometry, cfg.measurements,
                                          stream_seed(seed, Stream::directions));
    const MeasurementSet m = sample_powers(q, std::move(u), cfg.gamma, cfg.diversity,
                                           stream_seed(seed, Stream::powers));

    fs::create_directories(dir);
    write_file(dir / "scene.json", to_json(scene).dump(2) + "\n");
    write_file(dir / "measurements.json", to_json(m).dump(2) + "\n");
    out << "wrote " << (dir / "measurements.json").string() << " and " << (dir / "scene.json").string()
        << '\n';
    return exit_code::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spatial covariance estimation from analog beamformed power measurements", "covest"};
    app.require_subcommand(1);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo beamforming-loss sweep");
    sweep_cmd->add_option("--config", sweep.config, "Sweep config file")->required();
    sweep_cmd->add_option("--out", sweep.out, "Output directory");
    sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (0: all cores)")
        ->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--seed", sweep.seed, "Override the master seed");

    EstimateArgs estimate;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate Q from a measurement file");
    estimate_cmd->add_option("measurements,--input", estimate.input, "MeasurementSet JSON file")
        ->required();
    estimate_cmd->add_option("--estimator", estimate.estimator, "exact | approx | maxpower")
        ->capture_default_str();
    estimate_cmd->add_option("--mu", estimate.mu, "Trace regularization weight")->capture_default_str();
    estimate_cmd->add_option("--out", estimate.out, "Output directory")->capture_default_str();

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "Synthesize a scene and its measurements");
    simulate_cmd->add_option("--config", simulate.config, "Simulation config file")->required();
    simulate_cmd->add_option("--out", simulate.out, "Output directory");
    simulate_cmd->add_option("--seed", simulate.seed, "Override the seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return exit_code::usage;
    }

    try {
        if (*sweep_cmd)
            return cmd_sweep(sweep, out, err);
        if (*estimate_cmd)
            return cmd_estimate(estimate, out, err);
        return cmd_simulate(simulate, out, err);
    } catch (const NumericError& e) {
        err << "error: numeric failure: " << e.what() << '\n';
        return exit_code::numeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }
}

}  // namespace covest

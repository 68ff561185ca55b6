#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "covest/channel.hpp"
#include "covest/io.hpp"
#include "covest/measurement.hpp"
#include "covest/run_config.hpp"
#include "oracles.hpp"

using namespace covest;
using nlohmann::json;

TEST_CASE("measurement sets round-trip through JSON exactly") {
    const SceneSamplerConfig cfg;
    const HermitianMatrix q = scene_covariance(sample_scene(1, cfg));
    const MeasurementSet m = sample_powers(q, sample_directions(cfg.geometry, 12, 2), 10.0, 4, 3);
    std::istringstream is(to_json(m).dump());
    const MeasurementSet back = read_measurements(is);
    CHECK(back.directions == m.directions);
    CHECK(back.powers == m.powers);
    CHECK(back.gamma == m.gamma);
    CHECK(back.diversity == m.diversity);
}

TEST_CASE("scenes round-trip through JSON") {
    SceneSamplerConfig cfg;
    for (auto kind : {SceneKind::single_path, SceneKind::multi_cluster}) {
        cfg.kind = kind;
        const ChannelScene s = sample_scene(17, cfg);
        CHECK(scene_from_json(json::parse(to_json(s).dump())) == s);
    }
    json bad = to_json(sample_scene(1, cfg));
    bad["kind"] = "two-ray";
    CHECK_THROWS_AS(scene_from_json(bad), SchemaError);
}

TEST_CASE("measurement schema violations") {
    const auto parse = [](const std::string& text) {
        std::istringstream is(text);
        return read_measurements(is);
    };
    CHECK_THROWS_AS(parse("{"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"gamma": 1, "d": 1, "measurements": []})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "gamma": 1, "d": 1, "measurements": []})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"n": 2, "gamma": 1, "d": 1, "measurements": [{"u": [[1,0]], "y": 1}]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "gamma": 1, "d": 1, "measurements": [{"u": [[1,0]], "y": -1}]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "gamma": 0, "d": 1, "measurements": [{"u": [[1,0]], "y": 1}]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "gamma": 1, "d": 1, "measurements": [{"u": [1], "y": 1}]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse(R"({"n": 1, "gamma": 1, "d": 0.5, "measurements": [{"u": [[1,0]], "y": 1}]})"),
                    SchemaError);
    CHECK_NOTHROW(parse(R"({"n": 1, "gamma": 1, "d": 1, "measurements": [{"u": [[1,0]], "y": 1}]})"));
    CHECK_THROWS_AS(read_measurements_file("/nonexistent/measurements.json"), SchemaError);
}

TEST_CASE("matrices and traces serialize in the documented shapes") {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, Complex(0.5, 0.25), Complex(0.5, -0.25), 2.0;
    const json j = to_json(HermitianMatrix(m));
    CHECK(j.size() == 2);
    CHECK(j[0][1][0] == 0.5);
    CHECK(j[0][1][1] == 0.25);
    CHECK(j[1][0][1] == -0.25);

    SolveTrace t;
    t.initial_objective = 3.0;
    t.objective_values = {2.5, 2.5, 2.0};
    t.step_sizes = {1.0, 2.0, 1.0};
    t.accepted = {true, false, true};
    t.iterations = 3;
    std::ostringstream csv;
    write_trace_csv(csv, t);
    CHECK(csv.str() == "iter,objective,alpha,accepted\n1,2.5,1,1\n2,2.5,2,0\n3,2,1,1\n");
    CHECK(to_json(t)["terminated_by"] == "max-iters");

    RealVector c(3);
    c << 0.5, 0.0, 1.5;
    const json cj = to_json(CoefficientVector{c});
    CHECK(cj["q0"] == 0.5);
    CHECK(cj["q"] == json::array({0.0, 1.5}));
}

TEST_CASE("sweep config parsing") {
    std::istringstream is(R"(# comment
scene = "multi"
rows = 2
cols = 4
azimuth_spread_deg = 10
L = [20, 60]
estimators = ["exact", "maxpower"]
mu = [0.0, 0.5]
trials = 7
snr_db = 20
diversity = 2
seed = 11
workers = 3
dump_trials = true
max_iters = 50
out = "out/x"
)");
    const SweepConfig c = parse_sweep_config(is);
    CHECK(c.plan.scene.kind == SceneKind::multi_cluster);
    CHECK(c.plan.scene.geometry.size() == 8);
    CHECK(c.plan.scene.azimuth_spread == doctest::Approx(10.0 * std::numbers::pi / 180.0));
    CHECK(c.plan.measurement_counts == std::vector<int>{20, 60});
    CHECK(c.plan.estimators.size() == 2);
    CHECK(c.plan.mu_values == std::vector<double>{0.0, 0.5});
    CHECK(c.plan.trials == 7);
    CHECK(c.plan.gamma == doctest::Approx(100.0));
    CHECK(c.plan.diversity == 2);
    CHECK(c.plan.seed == 11);
    CHECK(c.workers == 3);
    CHECK(c.dump_trials);
    CHECK(c.plan.solver.max_iters == 50);
    CHECK(c.out_dir == "out/x");
}

TEST_CASE("config errors are collected in one pass") {
    std::istringstream is(R"(L = [20, 20]
trials = "many"
colour = "blue"
estimators = ["exact", "fista"]
)");
    try {
        parse_sweep_config(is);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const auto& d = e.diagnostics();
        CHECK(d.size() >= 2);
        std::string all;
        for (const auto& s : d)
            all += s + "\n";
        CHECK(all.find("colour") != std::string::npos);
    }

    const auto fails = [](const std::string& text) {
        std::istringstream s(text);
        try {
            parse_sweep_config(s);
        } catch (const ConfigError&) {
            return true;
        }
        return false;
    };
    CHECK(fails("trials = 5\n"));                       // L missing
    CHECK(fails("L = [20]\nL = [30]\n"));               // duplicate
    CHECK(fails("L = [20]\n[extra]\nx = 1\n"));          // sections
    CHECK(fails("L = [20]\ntrials = \"many\"\n"));
    CHECK(fails("L = [20]\nestimators = [\"fista\"]\n"));
    CHECK(fails("L = [20, 20]\n"));
    CHECK(fails("L = [20]\nrho = 1.5\n"));
    CHECK(fails("L = [20]\nscene = \"ring\"\n"));
    CHECK(fails("L = [20]\nmu = [-1]\n"));
    CHECK(fails("L = [20]\nworkers = -2\n"));
    CHECK_FALSE(fails("L = [20]\n"));
    CHECK_THROWS_AS(load_sweep_config("/nonexistent.cfg"), ConfigError);
}

TEST_CASE("simulate config parsing") {
    std::istringstream is("L = 30\nseed = 4\nsnr_db = 0\n");
    const SimulateConfig c = parse_simulate_config(is);
    CHECK(c.measurements == 30);
    CHECK(c.seed == 4);
    CHECK(c.gamma == doctest::Approx(1.0));
    std::istringstream bad("L = 0\ntrials = 3\n");
    CHECK_THROWS_AS(parse_simulate_config(bad), ConfigError);
}

TEST_CASE("bundled configs parse") {
    for (const char* name : {"fig3", "fig4", "fig5", "fig3_smoke", "fig4_smoke", "fig5_smoke"}) {
        CAPTURE(name);
        const SweepConfig c = load_sweep_config(std::string(COVEST_SOURCE_DIR "/configs/") + name + ".cfg");
        CHECK(c.plan.scene.geometry.size() == 16);
        CHECK(c.plan.gamma == doctest::Approx(10.0));
        CHECK(c.plan.diversity == 4);
    }
    const SweepConfig f3 = load_sweep_config(COVEST_SOURCE_DIR "/configs/fig3.cfg");
    CHECK(f3.plan.measurement_counts == std::vector<int>{20, 60, 80, 100});
    CHECK(f3.plan.estimators.size() == 3);
    CHECK(f3.plan.trials == 1000);
    const SweepConfig f5 = load_sweep_config(COVEST_SOURCE_DIR "/configs/fig5.cfg");
    CHECK(f5.plan.measurement_counts == std::vector<int>{50});
    CHECK(f5.plan.mu_values == std::vector<double>{0.0, 0.5, 1.0});
    CHECK_NOTHROW(load_simulate_config(COVEST_SOURCE_DIR "/configs/simulate.cfg"));
}

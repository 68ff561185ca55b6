#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "covest/cli.hpp"
#include "covest/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "covest");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = covest::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("covest_cli_" + std::to_string(std::random_device{}()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

json simulate(const TempDir& dir, const std::string& body) {
    write(dir / "sim.cfg", body);
    const Result r = run({"simulate", "--config", dir / "sim.cfg", "--out", dir / "sim"});
    REQUIRE(r.code == 0);
    return json::parse(slurp(dir / "sim/measurements.json"));
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"sweep"}).code == 2);
    CHECK(run({"estimate"}).code == 2);
    CHECK(run({"estimate", "/nonexistent.json"}).code == 2);
    CHECK(run({"sweep", "--config", "/nonexistent.cfg"}).code == 2);
    const Result help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("sweep") != std::string::npos);
}

TEST_CASE("malformed sweep config writes nothing") {
    TempDir dir;
    write(dir / "bad.cfg", "L = [20]\ntrials = \"many\"\nunknown_key = 3\n");
    const Result r = run({"sweep", "--config", dir / "bad.cfg", "--out", dir / "out"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown_key") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("sweep writes csv, plot and trial dump") {
    TempDir dir;
    write(dir / "s.cfg",
          "L = [6, 10]\nestimators = [\"exact\", \"approx\", \"maxpower\"]\ntrials = 3\n"
          "max_iters = 20\ndump_trials = true\nseed = 3\n");
    const Result r = run({"sweep", "--config", dir / "s.cfg", "--out", dir / "out", "--workers", "2"});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "out/sweep.csv");
    CHECK(csv.rfind("L,estimator,mu,mean_loss_db,stderr_db,trials,mean_iters,excluded,failed\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
    CHECK(slurp(dir / "out/sweep.svg").find("<svg") != std::string::npos);
    const std::string jl = slurp(dir / "out/trials.jsonl");
    CHECK(std::count(jl.begin(), jl.end(), '\n') == 2 * 3 * 3);
    CHECK(r.out == csv);

    // --seed overrides the config and changes the numbers
    const Result other =
        run({"sweep", "--config", dir / "s.cfg", "--out", dir / "out2", "--seed", "4"});
    REQUIRE(other.code == 0);
    CHECK(slurp(dir / "out2/sweep.csv") != csv);
}

TEST_CASE("simulate is deterministic") {
    TempDir dir;
    const json a = simulate(dir, "L = 5\nseed = 9\n");
    const json scene = json::parse(slurp(dir / "sim/scene.json"));
    CHECK(scene["kind"] == "single-path");
    const json b = simulate(dir, "L = 5\nseed = 9\n");
    CHECK(a == b);
    CHECK(a["measurements"].size() == 5);
    CHECK(a["n"] == 16);
    CHECK(simulate(dir, "L = 5\nseed = 10\n") != a);
}

TEST_CASE("estimate writes the documented outputs") {
    TempDir dir;
    simulate(dir, "L = 40\nseed = 2\n");
    const std::string input = dir / "sim/measurements.json";

    const Result ex = run({"estimate", input, "--estimator", "exact", "--out", dir / "ex"});
    REQUIRE(ex.code == 0);
    const json e = json::parse(slurp(dir / "ex/estimate.json"));
    CHECK(e["estimator"] == "exact-ml");
    CHECK(e["n"] == 16);
    CHECK(e["q"].size() == 16);
    CHECK(e["beam"].size() == 16);
    CHECK(e["fitted_lambda"].size() == 40);
    CHECK(e["warning"].is_null());
    CHECK(e["trace"]["iterations"].get<int>() >= 1);
    CHECK(slurp(dir / "ex/trace.csv").rfind("iter,objective,alpha,accepted\n", 0) == 0);

    const Result ap = run({"estimate", input, "--estimator", "approx", "--out", dir / "ap"});
    REQUIRE(ap.code == 0);
    const json a = json::parse(slurp(dir / "ap/estimate.json"));
    CHECK(a["coefficients"]["q"].size() == 40);
    CHECK(a["coefficients"]["q0"].get<double>() >= 0.0);
    CHECK(a["objective"].get<double>() >= e["objective"].get<double>() - 1e-6);

    const Result mp = run({"estimate", input, "--estimator", "maxpower", "--out", dir / "mp"});
    REQUIRE(mp.code == 0);
    CHECK(json::parse(slurp(dir / "mp/estimate.json"))["beam"].size() == 16);

    CHECK(run({"estimate", input, "--estimator", "fista"}).code == 2);
    CHECK(run({"estimate", input, "--mu", "-1"}).code == 2);
}

TEST_CASE("single-measurement estimate matches the scalar fit") {
    TempDir dir;
    write(dir / "one.json",
          R"({"n": 2, "gamma": 1.0, "d": 1, "measurements": [{"u": [[1,0],[0,1]], "y": 7.0}]})");
    const Result r = run({"estimate", dir / "one.json", "--out", dir / "o"});
    REQUIRE(r.code == 0);
    const double fit = json::parse(slurp(dir / "o/estimate.json"))["fitted_lambda"][0];
    CHECK(std::abs(fit - 7.0) / 7.0 < 1e-3);
}

TEST_CASE("schema violations in the measurement file exit with 2") {
    TempDir dir;
    write(dir / "bad.json", R"({"n": 2, "gamma": 1.0, "d": 1, "measurements": [{"u": [[1,0]], "y": 1}]})");
    const Result r = run({"estimate", dir / "bad.json", "--out", dir / "o"});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "o"));
}

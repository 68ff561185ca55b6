#include "covest/run_config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>

namespace covest {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out = "invalid config";
    for (const auto& l : lines)
        out += "\n  " + l;
    return out;
}

// Typed access to a flat key = value document. Every problem is appended to
// `errors` instead of thrown so that one pass reports all of them.
class Reader {
  public:
    Reader(std::istream& is, std::set<std::string> allowed) : allowed_(std::move(allowed)) {
        std::stringstream text;
        text << is.rdbuf();
        find_duplicates(text.str());
        std::vector<CLI::ConfigItem> items;
        try {
            items = CLI::ConfigTOML().from_config(text);
        } catch (const CLI::Error& e) {
            errors.push_back(std::string("parse error: ") + e.what());
            malformed = true;
            return;
        }
        for (const auto& item : items) {
            const std::string key = item.fullname();
            if (!item.parents.empty()) {
                if (item.name == "++")
                    errors.push_back("sections are not supported: [" + item.parents.front() + "]");
                else if (item.name != "--")
                    errors.push_back("unknown key '" + key + "'");
                continue;
            }
            if (!allowed_.contains(key)) {
                errors.push_back("unknown key '" + key + "'");
                continue;
            }
            values_[key] = item.inputs;
        }
    }

    bool has(const std::string& key) const { return values_.contains(key); }

    template <class T>
    void scalar(const std::string& key, T& out, bool required = false) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (required)
                errors.push_back("missing required key '" + key + "'");
            return;
        }
        if (it->second.size() != 1) {
            errors.push_back("key '" + key + "' expects a single value");
            return;
        }
        if (!convert(it->second.front(), out))
            errors.push_back("key '" + key + "': cannot parse '" + it->second.front() + "'");
    }

    template <class T>
    void list(const std::string& key, std::vector<T>& out, bool required = false) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (required)
                errors.push_back("missing required key '" + key + "'");
            return;
        }
        std::vector<T> parsed;
        for (const auto& s : it->second) {
            T v{};
            if (!convert(s, v)) {
                errors.push_back("key '" + key + "': cannot parse '" + s + "'");
                return;
            }
            parsed.push_back(v);
        }
        if (parsed.empty()) {
            errors.push_back("key '" + key + "' must not be empty");
            return;
        }
        out = std::move(parsed);
    }

    std::vector<std::string> errors;
    bool malformed = false;  // unparseable document; typed reads are pointless

  private:
    // The TOML reader merges repeated keys into one item, so duplicates are
    // found on the raw text: top-level `key =` lines, section headers reset.
    void find_duplicates(const std::string& text) {
        static const std::regex assignment(R"(^\s*([A-Za-z0-9_.\-]+)\s*=)");
        static const std::regex section(R"(^\s*\[)");
        std::set<std::string> seen;
        std::istringstream lines(text);
        std::string line;
        bool top_level = true;
        while (std::getline(lines, line)) {
            std::smatch m;
            if (std::regex_search(line, section))
                top_level = false;
            else if (top_level && std::regex_search(line, m, assignment) && !seen.insert(m[1]).second)
                errors.push_back("duplicate key '" + m[1].str() + "'");
        }
    }

    template <class T>
    static bool convert(const std::string& s, T& out) {
        if constexpr (std::is_same_v<T, std::string>) {
            out = s;
            return true;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (s == "true") {
                out = true;
                return true;
            }
            if (s == "false") {
                out = false;
                return true;
            }
            return false;
        } else {
            const char* first = s.data();
            const char* last = s.data() + s.size();
            auto [ptr, ec] = std::from_chars(first, last, out);
            return ec == std::errc{} && ptr == last;
        }
    }

    std::set<std::string> allowed_;
    std::map<std::string, std::vector<std::string>> values_;
};

const std::set<std::string> scene_keys = {
    "scene", "rows", "cols", "spacing", "max_clusters", "azimuth_spread_deg",
    "elevation_spread_deg", "subpaths", "snr_db", "diversity", "seed", "out",
};

void read_scene(Reader& r, SceneSamplerConfig& scene) {
    std::string kind = "single";
    r.scalar("scene", kind);
    if (kind == "single" || kind == "single-path")
        scene.kind = SceneKind::single_path;
    else if (kind == "multi" || kind == "multi-cluster")
        scene.kind = SceneKind::multi_cluster;
    else
        r.errors.push_back("key 'scene' must be \"single\" or \"multi\", got '" + kind + "'");

    r.scalar("rows", scene.geometry.rows);
    r.scalar("cols", scene.geometry.cols);
    r.scalar("spacing", scene.geometry.spacing);
    r.scalar("max_clusters", scene.max_clusters);
    r.scalar("subpaths", scene.subpath_count);
    double az_deg = scene.azimuth_spread * 180.0 / std::numbers::pi;
    double el_deg = scene.elevation_spread * 180.0 / std::numbers::pi;
    r.scalar("azimuth_spread_deg", az_deg);
    r.scalar("elevation_spread_deg", el_deg);
    scene.azimuth_spread = az_deg * std::numbers::pi / 180.0;
    scene.elevation_spread = el_deg * std::numbers::pi / 180.0;
}

template <class F>
void check(Reader& r, F&& validate) {
    try {
        validate();
    } catch (const std::invalid_argument& e) {
        r.errors.push_back(e.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

SweepConfig parse_sweep_config(std::istream& is) {
    std::set<std::string> allowed = scene_keys;
    allowed.insert({"L", "trials", "estimators", "mu", "workers", "dump_trials", "max_iters",
                    "rel_obj_tol", "rho", "min_step", "initial_step"});
    Reader r(is, allowed);
    SweepConfig cfg;
    if (r.malformed)
        throw ConfigError(r.errors);

    ExperimentPlan& plan = cfg.plan;
    read_scene(r, plan.scene);
    r.list("L", plan.measurement_counts, true);
    r.scalar("trials", plan.trials);
    double snr_db = 10.0;
    r.scalar("snr_db", snr_db);
    plan.gamma = db_to_linear(snr_db);
    r.scalar("diversity", plan.diversity);
    r.scalar("seed", plan.seed);
    r.list("mu", plan.mu_values);

    std::vector<std::string> names{"exact"};
    r.list("estimators", names);
    plan.estimators.clear();
    for (const auto& n : names) {
        if (auto k = parse_estimator(n))
            plan.estimators.push_back(*k);
        else
            r.errors.push_back("unknown estimator '" + n + "' (expected exact, approx or maxpower)");
    }

    r.scalar("max_iters", plan.solver.max_iters);
    r.scalar("rel_obj_tol", plan.solver.rel_obj_tol);
    r.scalar("rho", plan.solver.rho);
    r.scalar("min_step", plan.solver.min_step);
    if (r.has("initial_step")) {
        double a = 0.0;
        r.scalar("initial_step", a);
        plan.solver.initial_step = a;
    }

    if (r.has("workers")) {
        int w = 0;
        r.scalar("workers", w);
        if (w < 0)
            r.errors.push_back("key 'workers' must be nonnegative");
        cfg.workers = w;
    }
    if (r.has("out")) {
        std::string out;
        r.scalar("out", out);
        cfg.out_dir = out;
    }
    r.scalar("dump_trials", cfg.dump_trials);

    if (r.errors.empty())
        check(r, [&] { plan.validate(); });
    if (!r.errors.empty())
        throw ConfigError(r.errors);
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file '" + path + "'"});
    return parse_sweep_config(in);
}

SimulateConfig parse_simulate_config(std::istream& is) {
    std::set<std::string> allowed = scene_keys;
    allowed.insert("L");
    Reader r(is, allowed);
    if (r.malformed)
        throw ConfigError(r.errors);

    SimulateConfig cfg;
    read_scene(r, cfg.scene);
    r.scalar("L", cfg.measurements, true);
    double snr_db = 10.0;
    r.scalar("snr_db", snr_db);
    cfg.gamma = db_to_linear(snr_db);
    r.scalar("diversity", cfg.diversity);
    r.scalar("seed", cfg.seed);
    if (r.has("out")) {
        std::string out;
        r.scalar("out", out);
        cfg.out_dir = out;
    }

    if (r.errors.empty()) {
        check(r, [&] { cfg.scene.validate(); });
        if (cfg.measurements < 1)
            r.errors.push_back("key 'L' must be positive");
        if (cfg.diversity < 1)
            r.errors.push_back("key 'diversity' must be at least 1");
    }
    if (!r.errors.empty())
        throw ConfigError(r.errors);
    return cfg;
}

SimulateConfig load_simulate_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file '" + path + "'"});
    return parse_simulate_config(in);
}

}  // namespace covest

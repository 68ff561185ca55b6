#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "covest/harness.hpp"

namespace covest {

/// A config document that failed schema validation. Carries one diagnostic
/// line per problem found.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

  private:
    std::vector<std::string> diagnostics_;
};

/// `covest sweep` configuration: flat TOML key = value document.
struct SweepConfig {
    ExperimentPlan plan;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    bool dump_trials = false;
};

/// `covest simulate` configuration.
struct SimulateConfig {
    SceneSamplerConfig scene;
    int measurements = 0;
    double gamma = 10.0;
    int diversity = 4;
    std::uint64_t seed = 1;
    std::optional<std::string> out_dir;
};

SweepConfig parse_sweep_config(std::istream& is);
SweepConfig load_sweep_config(const std::string& path);

SimulateConfig parse_simulate_config(std::istream& is);
SimulateConfig load_simulate_config(const std::string& path);

}  // namespace covest

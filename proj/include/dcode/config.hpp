#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "dcode/baselines.hpp"
#include "dcode/colony_config.hpp"
#include "dcode/efficiency.hpp"
#include "dcode/resource_sim.hpp"

namespace dcode {

using Json = nlohmann::json;

// Raised for malformed documents; the message carries the offending path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json load_json_file(const std::filesystem::path& path);

/// de_controller section. t0/k fall back to the exploration-for-a-third
/// defaults derived from the colony iteration budget when not given.
struct ControllerConfig {
    bool enabled = true;
    std::optional<double> t0;
    std::optional<double> k;
    CouplingPolicy policy;

    EfficiencySchedule schedule(int max_iterations) const;
};

struct ScenarioConfig {
    ScenarioParams params;
    std::int64_t review_period = 10;
};

/// Top-level config document: sections {colony, de_controller, baseline,
/// scenario, experiment}, each optional, unknown keys rejected by path.
struct CliConfig {
    ColonyConfig colony;
    ControllerConfig controller;
    ScenarioConfig scenario;
    std::optional<BaselineConfig> baseline;
    std::optional<Json> experiment; // parsed later by experiment_from_json
};

ColonyConfig colony_from_json(const Json& obj, const std::string& where = "colony");
ControllerConfig controller_from_json(const Json& obj, const std::string& where = "de_controller");
BaselineConfig baseline_from_json(const Json& obj, const std::string& where = "baseline");
ScenarioConfig scenario_from_json(const Json& obj, const std::string& where = "scenario");
CliConfig cli_config_from_json(const Json& doc);

// Effective-config serializers: every default materialized, for echoing into
// output directories.
Json effective_colony(const ColonyConfig& cfg);
Json effective_controller(const ControllerConfig& cfg, int max_iterations);
Json effective_scenario(const ScenarioConfig& cfg);
Json effective_baseline(const BaselineConfig& cfg);

} // namespace dcode

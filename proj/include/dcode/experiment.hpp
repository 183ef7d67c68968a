#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dcode/config.hpp"

namespace dcode {

/**
 * One reproducible multi-seed experiment. Three kinds:
 *   tsp_compare              controller-on vs controller-off colony runs per
 *                            TSP instance (quality-improvement table)
 *   continuous_convergence   iterations-to-converge per baseline algorithm on
 *                            one benchmark function (convergence table)
 *   tsp_scaling              clustered candidate lists vs full neighbor lists
 *                            on random instances of growing size (wall-time table)
 */
struct ExperimentSpec {
    std::string kind;
    std::string name = "experiment";
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out/experiment";
    std::int64_t cr_window = 25;
    double cr_eps = 1e-4;

    // tsp_compare
    std::vector<std::string> instances;
    std::string best_known; // csv path, optional when instances carry a value

    // continuous_convergence
    std::string problem = "sphere";
    int dim = 10;
    double target = 0.0;
    double tolerance = 1e-6;
    std::vector<BaselineConfig> algorithms;

    // tsp_scaling
    std::vector<int> sizes;
    double instance_side = 1000.0;

    // engine configuration shared by the arms
    ColonyConfig colony;
    ControllerConfig controller;
};

// Parses a full config document: experiment section plus optional colony and
// de_controller sections. Throws ConfigError, including on an empty seed list.
ExperimentSpec experiment_from_json(const Json& doc);

struct ExperimentResult {
    Json aggregate;
    std::filesystem::path per_seed_csv;
    std::filesystem::path table_csv;
    std::filesystem::path aggregate_json;
};

// Runs every seed, writes per_seed.csv / table.csv / aggregate.json /
// effective_config.json into output_dir. A failing seed aborts with the seed
// named in the error.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

} // namespace dcode

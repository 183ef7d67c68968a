#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dcode/clustering.hpp"
#include "dcode/config.hpp"
#include "dcode/experiment.hpp"
#include "dcode/metrics.hpp"
#include "dcode/parallel.hpp"
#include "dcode/prescription.hpp"
#include "dcode/resource_sim.hpp"

namespace {

namespace fs = std::filesystem;
using dcode::Json;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitInfeasible = 4;

// Stream id far above anything the solver derives for its ants.
constexpr std::uint64_t kClusterStream = 0x10000000000ULL;

unsigned resolve_threads(unsigned flag) {
    return flag > 0 ? flag : dcode::default_thread_count();
}

void write_json(const fs::path& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

struct SolveArgs {
    std::string instance;
    std::string config;
    std::string best_known;
    std::string out_dir = "out/solve";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool no_de = false;
    int clusters = 0;
};

int cmd_solve(const SolveArgs& args) {
    dcode::TspInstance inst;
    dcode::ColonyConfig colony;
    dcode::ControllerConfig controller;
    std::optional<std::vector<std::vector<int>>> lists;
    dcode::SeededRng master(args.seed);
    try {
        dcode::CliConfig config;
        if (!args.config.empty()) {
            config = dcode::cli_config_from_json(dcode::load_json_file(args.config));
        }
        colony = config.colony;
        controller = config.controller;
        inst = args.best_known.empty() ? dcode::load_tsplib(args.instance)
                                       : dcode::load_tsplib(args.instance, args.best_known);
        if (args.clusters > 0) {
            if (inst.xs.empty()) {
                throw dcode::ConfigError("--clusters needs planar coordinates, instance " +
                                         inst.name + " is matrix-form");
            }
            std::vector<double> pts(inst.n * 2);
            for (std::size_t i = 0; i < inst.n; ++i) {
                pts[i * 2] = inst.xs[i];
                pts[i * 2 + 1] = inst.ys[i];
            }
            dcode::SeededRng cluster_rng = dcode::derive_rng(master, kClusterStream);
            const auto model = dcode::build_clusters(pts, 2, static_cast<std::size_t>(args.clusters),
                                                     100, cluster_rng);
            lists = dcode::cluster_candidate_lists(inst, model);
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        dcode::DcoOptions options;
        options.threads = resolve_threads(args.threads);
        options.candidate_lists = lists;
        std::optional<dcode::DcoController> dco_controller;
        const bool use_de = !args.no_de && controller.enabled;
        if (use_de) {
            dco_controller = dcode::DcoController{controller.schedule(colony.max_iterations),
                                                  controller.policy};
        }
        const dcode::RunRecord record =
            dcode::run_dco(inst, colony, dco_controller, master, options);

        const fs::path dir(args.out_dir);
        fs::create_directories(dir);
        {
            std::ofstream run_csv(dir / "run.csv");
            run_csv << "iteration,best_cost\n";
            run_csv.precision(12);
            for (std::size_t i = 0; i < record.best_cost_per_iteration.size(); ++i) {
                run_csv << i + 1 << ',' << record.best_cost_per_iteration[i] << '\n';
            }
        }
        Json summary{{"instance", inst.name},
                     {"n", inst.n},
                     {"seed", args.seed},
                     {"de_controller", use_de},
                     {"clusters", args.clusters},
                     {"best_cost", record.best_cost()},
                     {"evaluations", record.evaluations},
                     {"iterations", record.iterations_run},
                     {"tour", record.best_tour.order},
                     {"wall_seconds", record.wall_seconds}};
        if (inst.best_known && *inst.best_known > 0.0) {
            summary["sq"] = dcode::solution_quality(record.best_cost(), *inst.best_known);
        }
        write_json(dir / "summary.json", summary);

        Json effective;
        effective["colony"] = dcode::effective_colony(colony);
        effective["de_controller"] = dcode::effective_controller(controller, colony.max_iterations);
        write_json(dir / "effective_config.json", effective);

        std::cout << "instance " << inst.name << " best_cost " << record.best_cost();
        if (inst.best_known && *inst.best_known > 0.0) {
            std::cout << " sq " << dcode::solution_quality(record.best_cost(), *inst.best_known);
        }
        std::cout << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

struct BenchArgs {
    std::string spec;
    unsigned threads = 0;
};

int cmd_bench(const BenchArgs& args) {
    dcode::ExperimentSpec spec;
    try {
        spec = dcode::experiment_from_json(dcode::load_json_file(args.spec));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const auto result = dcode::run_experiment(spec, resolve_threads(args.threads));
        std::cout << "experiment " << spec.name << " kind " << spec.kind << '\n'
                  << "per-seed: " << result.per_seed_csv.string() << '\n'
                  << "table: " << result.table_csv.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

struct SimulateArgs {
    std::string scenario;
    std::string config;
    std::string out_dir = "out/simulate";
    std::uint64_t seed = 1;
    std::int64_t horizon = 200;
    std::size_t tasks = 5;
    bool static_only = false;
    bool de_only = false;
};

int cmd_simulate(const SimulateArgs& args) {
    dcode::Scenario scenario;
    dcode::ScenarioConfig scenario_cfg;
    dcode::ControllerConfig controller;
    try {
        if (!args.config.empty()) {
            const auto config = dcode::cli_config_from_json(dcode::load_json_file(args.config));
            scenario_cfg = config.scenario;
            controller = config.controller;
        }
        dcode::SeededRng master(args.seed);
        scenario = dcode::generate_scenario(args.scenario, args.horizon, args.tasks, master,
                                            scenario_cfg.params);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const fs::path dir(args.out_dir);
        fs::create_directories(dir);
        Json summary{{"scenario", scenario.name},
                     {"horizon", scenario.horizon},
                     {"tasks", scenario.n_tasks},
                     {"seed", args.seed}};
        std::optional<double> before, after;
        if (!args.de_only) {
            const auto trace =
                dcode::simulate(scenario, dcode::equal_static_policy(scenario.n_tasks));
            before = trace.mean_percent;
            summary["utilization_static_percent"] = trace.mean_percent;
            dcode::write_trace_csv(dir / "trace_static.csv", scenario, trace);
        }
        if (!args.static_only) {
            const auto sched = controller.schedule(static_cast<int>(scenario.horizon));
            const auto trace = dcode::simulate(
                scenario, dcode::adaptive_policy(scenario.n_tasks, sched,
                                                 scenario_cfg.review_period));
            after = trace.mean_percent;
            summary["utilization_adaptive_percent"] = trace.mean_percent;
            dcode::write_trace_csv(dir / "trace_adaptive.csv", scenario, trace);
        }
        if (before && after) {
            summary["gain_percent"] = dcode::round1(dcode::optimization_gain(*before, *after));
        }
        write_json(dir / "summary.json", summary);

        Json effective;
        effective["scenario"] = dcode::effective_scenario(scenario_cfg);
        effective["de_controller"] =
            dcode::effective_controller(controller, static_cast<int>(scenario.horizon));
        write_json(dir / "effective_config.json", effective);

        std::cout << summary.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

struct PrescribeArgs {
    std::string data;
    std::vector<std::string> constraints;
};

int cmd_prescribe(const PrescribeArgs& args) {
    dcode::PrescriptionDataset ds;
    std::vector<dcode::Constraint> constraints;
    try {
        ds = dcode::load_prescription_csv(args.data);
        for (const auto& text : args.constraints) {
            constraints.push_back(dcode::parse_constraint(text));
        }
        // Unknown feature names surface here rather than mid-scan.
        if (!ds.objective.empty()) {
            for (const auto& c : constraints) dcode::satisfies(ds, 0, c);
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto result = dcode::olp_prescribe(ds, constraints);
        if (!result.feasible) {
            std::cout << "infeasible: no record satisfies all constraints\n";
            return kExitInfeasible;
        }
        Json record{{"index", result.index}, {"f", result.objective}};
        for (std::size_t c = 0; c < ds.features.size(); ++c) {
            record[ds.features[c]] = ds.cells[result.index][c];
        }
        std::cout << record.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcode: colony search for TSP with a sigmoid efficiency controller, "
                 "baselines, a resource-allocation simulator and a benchmark harness"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "run the colony solver on a TSPLIB instance");
    solve->add_option("--instance", solve_args.instance, "TSPLIB file")->required();
    solve->add_option("--config", solve_args.config, "JSON config file");
    solve->add_option("--best-known", solve_args.best_known, "best-known costs CSV");
    solve->add_option("--seed", solve_args.seed, "random seed");
    solve->add_option("--threads", solve_args.threads,
                      "worker threads (default: DCODE_THREADS or cores)");
    solve->add_option("--clusters", solve_args.clusters, "cluster count for candidate lists");
    solve->add_option("--out", solve_args.out_dir, "output directory");
    solve->add_flag("--no-de", solve_args.no_de, "disable the efficiency controller");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "run a multi-seed experiment spec");
    bench->add_option("--spec", bench_args.spec, "experiment JSON")->required();
    bench->add_option("--threads", bench_args.threads,
                      "worker threads (default: DCODE_THREADS or cores)");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "resource-allocation scenario comparison");
    simulate->add_option("--scenario", sim_args.scenario,
                         "high_demand, emergency or scalability")->required();
    simulate->add_option("--seed", sim_args.seed, "random seed");
    simulate->add_option("--horizon", sim_args.horizon, "timestep count");
    simulate->add_option("--tasks", sim_args.tasks, "task count");
    simulate->add_option("--config", sim_args.config, "JSON config file");
    simulate->add_option("--out", sim_args.out_dir, "output directory");
    simulate->add_flag("--static-only", sim_args.static_only, "run only the static policy");
    simulate->add_flag("--de-only", sim_args.de_only, "run only the adaptive policy");

    PrescribeArgs pres_args;
    auto* prescribe = app.add_subcommand("prescribe", "pick the best feasible dataset record");
    prescribe->add_option("--data", pres_args.data, "CSV with objective column f")->required();
    prescribe->add_option("--constraint", pres_args.constraints,
                          "feature<op>value, op in {<=,>=,==,<,>}; repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (solve->parsed()) return cmd_solve(solve_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (simulate->parsed()) return cmd_simulate(sim_args);
    if (prescribe->parsed()) return cmd_prescribe(pres_args);
    return kExitUsage;
}

#include "dcode/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dcode/clustering.hpp"
#include "dcode/metrics.hpp"

namespace dcode {

namespace {

std::string fmt(double v) {
    std::ostringstream o;
    o << std::setprecision(12) << v;
    return o.str();
}

std::string fmt_opt(const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : "";
}

struct SeedRow {
    std::uint64_t seed = 0;
    std::string algorithm;
    std::string instance;
    double best_cost = 0.0;
    std::optional<double> sq;
    std::optional<std::int64_t> cr;
    std::int64_t evals = 0;
    double wall_s = 0.0;
};

void write_per_seed(const std::filesystem::path& path, const std::vector<SeedRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "seed,algorithm,instance,best_cost,sq,cr,evals,wall_s\n";
    for (const auto& r : rows) {
        out << r.seed << ',' << r.algorithm << ',' << r.instance << ',' << fmt(r.best_cost) << ','
            << (r.sq ? fmt(*r.sq) : "") << ',' << fmt_opt(r.cr) << ',' << r.evals << ','
            << fmt(r.wall_s) << '\n';
    }
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

template <typename Fn>
auto named_seed(std::uint64_t seed, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error("seed " + std::to_string(seed) + ": " + e.what());
    }
}

std::vector<double> flat_coords(const TspInstance& inst) {
    std::vector<double> pts(inst.n * 2);
    for (std::size_t i = 0; i < inst.n; ++i) {
        pts[i * 2] = inst.xs[i];
        pts[i * 2 + 1] = inst.ys[i];
    }
    return pts;
}

ExperimentResult finish(const ExperimentSpec& spec, const std::vector<SeedRow>& rows,
                        const std::vector<std::string>& table_lines, Json aggregate) {
    const std::filesystem::path dir(spec.output_dir);
    std::filesystem::create_directories(dir);

    ExperimentResult result;
    result.per_seed_csv = dir / "per_seed.csv";
    write_per_seed(result.per_seed_csv, rows);

    result.table_csv = dir / "table.csv";
    {
        std::ofstream out(result.table_csv);
        if (!out) throw std::runtime_error("cannot write " + result.table_csv.string());
        for (const auto& line : table_lines) out << line << '\n';
    }

    aggregate["kind"] = spec.kind;
    aggregate["name"] = spec.name;
    aggregate["seeds"] = spec.seeds;
    aggregate["cr_window"] = spec.cr_window;
    aggregate["cr_eps"] = spec.cr_eps;
    result.aggregate = aggregate;
    result.aggregate_json = dir / "aggregate.json";
    {
        std::ofstream out(result.aggregate_json);
        out << aggregate.dump(2) << '\n';
    }

    Json effective;
    effective["experiment"] = Json{{"kind", spec.kind},
                                   {"name", spec.name},
                                   {"output_dir", spec.output_dir},
                                   {"cr_window", spec.cr_window},
                                   {"cr_eps", spec.cr_eps}};
    effective["colony"] = effective_colony(spec.colony);
    effective["de_controller"] = effective_controller(spec.controller, spec.colony.max_iterations);
    std::ofstream eff(dir / "effective_config.json");
    eff << effective.dump(2) << '\n';
    return result;
}

ExperimentResult run_tsp_compare(const ExperimentSpec& spec, unsigned threads) {
    if (spec.instances.empty()) throw ConfigError("experiment: tsp_compare needs instances");
    std::vector<SeedRow> rows;
    std::vector<std::string> table_lines = {
        "instance,sq_dcode,sq_aco,wall_s_dcode,wall_s_aco,improvement_percent"};
    Json per_instance = Json::array();
    std::vector<double> improvements;

    const DcoController controller{spec.controller.schedule(spec.colony.max_iterations),
                                   spec.controller.policy};
    for (const auto& path : spec.instances) {
        const TspInstance inst = spec.best_known.empty()
                                     ? load_tsplib(path)
                                     : load_tsplib(path, spec.best_known);
        if (!(inst.best_known > 0.0)) {
            throw ConfigError("experiment: no best-known cost for instance " + inst.name);
        }
        std::vector<double> sq_de, sq_plain, wall_de, wall_plain;
        for (const std::uint64_t seed : spec.seeds) {
            SeedRow de_row, plain_row;
            named_seed(seed, [&] {
                SeededRng master(seed);
                DcoOptions options;
                options.threads = threads;
                const RunRecord rec_de =
                    run_dco(inst, spec.colony, controller, master, options);
                const RunRecord rec_plain =
                    run_dco(inst, spec.colony, std::nullopt, master, options);

                de_row = {seed, "dcode", inst.name, rec_de.best_cost(),
                          solution_quality(rec_de.best_cost(), *inst.best_known),
                          convergence_rate(rec_de, spec.cr_window, spec.cr_eps),
                          rec_de.evaluations, rec_de.wall_seconds};
                plain_row = {seed, "aco", inst.name, rec_plain.best_cost(),
                             solution_quality(rec_plain.best_cost(), *inst.best_known),
                             convergence_rate(rec_plain, spec.cr_window, spec.cr_eps),
                             rec_plain.evaluations, rec_plain.wall_seconds};
                return 0;
            });
            rows.push_back(de_row);
            rows.push_back(plain_row);
            sq_de.push_back(*de_row.sq);
            sq_plain.push_back(*plain_row.sq);
            wall_de.push_back(de_row.wall_s);
            wall_plain.push_back(plain_row.wall_s);
        }
        const double mean_de = mean_of(sq_de);
        const double mean_plain = mean_of(sq_plain);
        const double improvement = round1(relative_improvement(mean_de, mean_plain));
        improvements.push_back(relative_improvement(mean_de, mean_plain));
        table_lines.push_back(inst.name + ',' + fmt(mean_de) + ',' + fmt(mean_plain) + ',' +
                              fmt(mean_of(wall_de)) + ',' + fmt(mean_of(wall_plain)) + ',' +
                              fmt(improvement));
        per_instance.push_back(Json{{"instance", inst.name},
                                    {"sq_dcode", mean_de},
                                    {"sq_aco", mean_plain},
                                    {"wall_s_dcode", mean_of(wall_de)},
                                    {"wall_s_aco", mean_of(wall_plain)},
                                    {"improvement_percent", improvement}});
    }
    Json aggregate;
    aggregate["instances"] = per_instance;
    aggregate["mean_improvement_percent"] = mean_of(improvements);
    return finish(spec, rows, table_lines, aggregate);
}

ExperimentResult run_continuous(const ExperimentSpec& spec) {
    if (spec.algorithms.empty()) {
        throw ConfigError("experiment: continuous_convergence needs algorithms");
    }
    const ContinuousProblem problem =
        make_benchmark(objective_from_name(spec.problem), static_cast<std::size_t>(spec.dim));

    std::vector<SeedRow> rows;
    std::vector<std::string> table_lines = {
        "algorithm,mean_iterations_to_converge,converged_seeds,total_seeds,mean_best_cost"};
    Json per_algo = Json::array();
    for (const auto& algo : spec.algorithms) {
        std::vector<double> iters, costs;
        std::int64_t converged = 0;
        for (const std::uint64_t seed : spec.seeds) {
            const RunRecord rec = named_seed(seed, [&] {
                SeededRng master(seed);
                return run_baseline(algo, problem, master);
            });
            const auto itc = iterations_to_converge(rec, spec.target, spec.tolerance);
            rows.push_back({seed, baseline_name(algo.algorithm), spec.problem, rec.best_cost(),
                            std::nullopt, itc, rec.evaluations, rec.wall_seconds});
            costs.push_back(rec.best_cost());
            if (itc) {
                ++converged;
                iters.push_back(static_cast<double>(*itc));
            }
        }
        const double mean_iters = iters.empty() ? 0.0 : mean_of(iters);
        table_lines.push_back(baseline_name(algo.algorithm) + ',' +
                              (iters.empty() ? "" : fmt(mean_iters)) + ',' +
                              std::to_string(converged) + ',' +
                              std::to_string(spec.seeds.size()) + ',' + fmt(mean_of(costs)));
        per_algo.push_back(Json{{"algorithm", baseline_name(algo.algorithm)},
                                {"mean_iterations_to_converge", mean_iters},
                                {"converged_seeds", converged},
                                {"total_seeds", spec.seeds.size()},
                                {"mean_best_cost", mean_of(costs)}});
    }
    Json aggregate;
    aggregate["problem"] = spec.problem;
    aggregate["dim"] = spec.dim;
    aggregate["target"] = spec.target;
    aggregate["tolerance"] = spec.tolerance;
    aggregate["algorithms"] = per_algo;
    return finish(spec, rows, table_lines, aggregate);
}

ExperimentResult run_tsp_scaling(const ExperimentSpec& spec, unsigned threads) {
    if (spec.sizes.empty()) throw ConfigError("experiment: tsp_scaling needs sizes");
    std::vector<SeedRow> rows;
    std::vector<std::string> table_lines = {
        "n,wall_s_clustered,wall_s_full,wall_ratio,sq_clustered,sq_full"};
    Json per_size = Json::array();

    for (const int n : spec.sizes) {
        // The instance and its clustering are fixed per size; only search seeds vary.
        SeededRng instance_rng(0xD0C0DEULL, static_cast<std::uint64_t>(n));
        SeededRng gen = derive_rng(instance_rng, 0);
        const TspInstance inst = make_random_euclidean_instance(
            "rand" + std::to_string(n), static_cast<std::size_t>(n), spec.instance_side, gen);
        const auto k = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n))));
        SeededRng cluster_rng = derive_rng(instance_rng, 1);
        const ClusterModel model =
            build_clusters(flat_coords(inst), 2, k, 100, cluster_rng);
        DcoOptions clustered;
        clustered.threads = threads;
        clustered.candidate_lists = cluster_candidate_lists(inst, model);
        DcoOptions full;
        full.threads = threads;

        struct Run {
            std::uint64_t seed;
            const char* label;
            RunRecord rec;
        };
        std::vector<Run> runs;
        for (const std::uint64_t seed : spec.seeds) {
            named_seed(seed, [&] {
                SeededRng master(seed);
                runs.push_back({seed, "dcode_clustered",
                                run_dco(inst, spec.colony, std::nullopt, master, clustered)});
                runs.push_back({seed, "dcode_full",
                                run_dco(inst, spec.colony, std::nullopt, master, full)});
                return 0;
            });
        }
        double reference = runs.front().rec.best_cost();
        for (const auto& r : runs) reference = std::min(reference, r.rec.best_cost());

        std::vector<double> wall_cl, wall_full, sq_cl, sq_full;
        for (const auto& r : runs) {
            const double sq = solution_quality(r.rec.best_cost(), reference);
            rows.push_back({r.seed, r.label, inst.name, r.rec.best_cost(), sq,
                            convergence_rate(r.rec, spec.cr_window, spec.cr_eps),
                            r.rec.evaluations, r.rec.wall_seconds});
            if (std::string(r.label) == "dcode_clustered") {
                wall_cl.push_back(r.rec.wall_seconds);
                sq_cl.push_back(sq);
            } else {
                wall_full.push_back(r.rec.wall_seconds);
                sq_full.push_back(sq);
            }
        }
        const double ratio = mean_of(wall_cl) / mean_of(wall_full);
        table_lines.push_back(std::to_string(n) + ',' + fmt(mean_of(wall_cl)) + ',' +
                              fmt(mean_of(wall_full)) + ',' + fmt(ratio) + ',' +
                              fmt(mean_of(sq_cl)) + ',' + fmt(mean_of(sq_full)));
        per_size.push_back(Json{{"n", n},
                                {"wall_s_clustered", mean_of(wall_cl)},
                                {"wall_s_full", mean_of(wall_full)},
                                {"wall_ratio", ratio},
                                {"sq_clustered", mean_of(sq_cl)},
                                {"sq_full", mean_of(sq_full)}});
    }
    Json aggregate;
    aggregate["sizes"] = per_size;
    return finish(spec, rows, table_lines, aggregate);
}

} // namespace

ExperimentSpec experiment_from_json(const Json& doc) {
    const CliConfig top = cli_config_from_json(doc);
    if (!top.experiment) throw ConfigError("config: missing experiment section");
    const Json& exp = *top.experiment;
    if (!exp.is_object()) throw ConfigError("config: experiment must be an object");
    for (const auto& [key, value] : exp.items()) {
        (void)value;
        static const char* allowed[] = {"kind",      "name",      "seeds",     "output_dir",
                                        "cr_window", "cr_eps",    "instances", "best_known",
                                        "problem",   "dim",       "target",    "tolerance",
                                        "algorithms", "sizes",    "instance_side"};
        if (std::find_if(std::begin(allowed), std::end(allowed),
                         [&](const char* a) { return key == a; }) == std::end(allowed)) {
            throw ConfigError("config: unknown key 'experiment." + key + "'");
        }
    }

    ExperimentSpec spec;
    spec.colony = top.colony;
    spec.controller = top.controller;
    if (!exp.contains("kind") || !exp["kind"].is_string()) {
        throw ConfigError("config: experiment.kind must be a string");
    }
    spec.kind = exp["kind"].get<std::string>();
    if (spec.kind != "tsp_compare" && spec.kind != "continuous_convergence" &&
        spec.kind != "tsp_scaling") {
        throw ConfigError("config: experiment.kind must be one of tsp_compare, "
                          "continuous_convergence, tsp_scaling");
    }
    if (exp.contains("name")) spec.name = exp["name"].get<std::string>();
    if (exp.contains("output_dir")) spec.output_dir = exp["output_dir"].get<std::string>();
    if (exp.contains("best_known")) spec.best_known = exp["best_known"].get<std::string>();
    if (exp.contains("problem")) spec.problem = exp["problem"].get<std::string>();
    if (exp.contains("dim")) spec.dim = exp["dim"].get<int>();
    if (exp.contains("target")) spec.target = exp["target"].get<double>();
    if (exp.contains("tolerance")) spec.tolerance = exp["tolerance"].get<double>();
    if (exp.contains("cr_window")) spec.cr_window = exp["cr_window"].get<std::int64_t>();
    if (exp.contains("cr_eps")) spec.cr_eps = exp["cr_eps"].get<double>();
    if (exp.contains("instance_side")) spec.instance_side = exp["instance_side"].get<double>();
    if (exp.contains("seeds")) {
        if (!exp["seeds"].is_array()) throw ConfigError("config: experiment.seeds must be an array");
        for (const auto& s : exp["seeds"]) spec.seeds.push_back(s.get<std::uint64_t>());
    }
    if (spec.seeds.empty()) throw ConfigError("config: experiment.seeds must not be empty");
    if (exp.contains("instances")) {
        for (const auto& s : exp["instances"]) spec.instances.push_back(s.get<std::string>());
    }
    if (exp.contains("sizes")) {
        for (const auto& s : exp["sizes"]) spec.sizes.push_back(s.get<int>());
    }
    if (exp.contains("algorithms")) {
        if (!exp["algorithms"].is_array()) {
            throw ConfigError("config: experiment.algorithms must be an array");
        }
        std::size_t i = 0;
        for (const auto& a : exp["algorithms"]) {
            spec.algorithms.push_back(
                baseline_from_json(a, "experiment.algorithms[" + std::to_string(i) + "]"));
            ++i;
        }
    }
    if (spec.cr_window < 1) throw ConfigError("config: experiment.cr_window must be >= 1");
    return spec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads) {
    if (spec.seeds.empty()) throw ConfigError("experiment: seed list is empty");
    if (spec.kind == "tsp_compare") return run_tsp_compare(spec, threads);
    if (spec.kind == "continuous_convergence") return run_continuous(spec);
    if (spec.kind == "tsp_scaling") return run_tsp_scaling(spec, threads);
    throw ConfigError("experiment: unknown kind '" + spec.kind + "'");
}

} // namespace dcode

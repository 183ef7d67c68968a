// Acceptance gate: twelve criteria, one PASS/FAIL line each, nonzero exit
// when any fail. Heavier criteria reuse the shipped experiment configs so the
// gate checks exactly what the CLI runs.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dcode/baselines.hpp"
#include "dcode/colony.hpp"
#include "dcode/config.hpp"
#include "dcode/continuous.hpp"
#include "dcode/efficiency.hpp"
#include "dcode/experiment.hpp"
#include "dcode/metrics.hpp"
#include "dcode/prescription.hpp"
#include "dcode/resource_sim.hpp"
#include "dcode/rng.hpp"
#include "dcode/tree_ensemble.hpp"
#include "dcode/tsp.hpp"

namespace fs = std::filesystem;
using namespace dcode;

namespace {

const std::string kFixtures = DCODE_FIXTURE_DIR;
const std::string kConfigs = DCODE_CONFIG_DIR;
const std::string kCliBin = DCODE_CLI_BIN;

const fs::path& work_root() {
    static const fs::path root = fs::temp_directory_path() / "dcode_acceptance";
    return root;
}

unsigned worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 4u);
}

// Shipped configs use repo-relative fixture paths; anchor them so the gate
// passes regardless of the working directory ctest picks.
std::string anchored(const std::string& path) {
    if (fs::path(path).is_absolute()) return path;
    return (fs::path(kFixtures).parent_path() / path).string();
}

std::string fmt(double v, int prec) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

int g_failures = 0;

template <typename Fn>
void criterion(int number, double budget_s, Fn&& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("unexpected exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= budget_s) {
        out.ok = false;
        out.detail += " [exceeded " + fmt(budget_s, 0) + "s budget]";
    }
    std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << out.detail
              << " (" << fmt(secs, 1) << "s)" << std::endl;
    if (!out.ok) ++g_failures;
}

// criterion 1: transition rule behaves like a probability distribution and
// respects tau/eta scaling on randomized configurations.
Outcome transition_rule_properties() {
    SeededRng rng(9101);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + rng.next_index(18);
        PheromoneField pher = make_pheromone_field(n, 1.0, 1e-6, 10.0, false);
        HeuristicField heur;
        heur.n = n;
        heur.eta.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double tau = rng.next_range(0.5, 2.0);
                const double eta = rng.next_range(0.1, 2.0);
                pher.tau[i * n + j] = pher.tau[j * n + i] = tau;
                heur.eta[i * n + j] = heur.eta[j * n + i] = eta;
            }
        }
        const double alpha = rng.next_range(0.1, 3.0);
        const double beta = rng.next_range(0.0, 3.0);
        const int current = static_cast<int>(rng.next_index(n));

        std::vector<int> others;
        for (std::size_t j = 0; j < n; ++j) {
            if (static_cast<int>(j) != current) others.push_back(static_cast<int>(j));
        }
        std::vector<int> allowed;
        for (int j : others) {
            if (rng.next_double() < 0.6) allowed.push_back(j);
        }
        for (int j : others) {
            if (allowed.size() >= 2) break;
            if (std::find(allowed.begin(), allowed.end(), j) == allowed.end()) allowed.push_back(j);
        }

        const auto p = transition_probabilities(current, allowed, pher, heur, alpha, beta);
        double sum = 0.0;
        for (double v : p) {
            if (!(v >= 0.0)) return {false, "trial " + std::to_string(trial) + ": negative probability"};
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            return {false, "trial " + std::to_string(trial) + ": probabilities sum to " + fmt(sum, 15)};
        }

        PheromoneField scaled_pher = pher;
        for (double& t : scaled_pher.tau) t *= 7.25;
        HeuristicField scaled_heur = heur;
        for (double& e : scaled_heur.eta) e *= 0.031;
        const auto q = transition_probabilities(current, allowed, scaled_pher, scaled_heur, alpha, beta);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (std::abs(p[i] - q[i]) > 1e-12) {
                return {false, "trial " + std::to_string(trial) + ": tau/eta scaling moved a probability"};
            }
        }

        const std::size_t pick = rng.next_index(allowed.size());
        const auto j = static_cast<std::size_t>(allowed[pick]);
        PheromoneField boosted = pher;
        const double factor = 1.5 + rng.next_double();
        boosted.tau[static_cast<std::size_t>(current) * n + j] *= factor;
        boosted.tau[j * n + static_cast<std::size_t>(current)] *= factor;
        const auto r = transition_probabilities(current, allowed, boosted, heur, alpha, beta);
        if (r[pick] < p[pick] || (p[pick] < 1.0 - 1e-9 && !(r[pick] > p[pick]))) {
            return {false, "trial " + std::to_string(trial) + ": raising tau on one edge did not raise its probability"};
        }
    }
    return {true, "transition rule on 1000 random configurations: normalization within 1e-12, "
                  "nonnegativity, tau/eta scale invariance, single-edge monotonicity"};
}

// criterion 2: sigmoid curve midpoint, monotonicity and point symmetry.
Outcome sigmoid_properties() {
    const EfficiencySchedule cases[] = {
        {0.037, 123.4}, {1.0, 0.0}, default_schedule(300), {10.0 / 500.0, 500.0 / 3.0}};
    for (const auto& sched : cases) {
        if (efficiency(sched, sched.t0) != 0.5) {
            return {false, "E(t0) != 0.5 exactly for k=" + fmt(sched.k, 4)};
        }
        // grid spans k (t - t0) in [-13, 13]: far from clamp, so strictly increasing
        const double step = 26.0 / (1000.0 * sched.k);
        double prev = -1.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = sched.t0 + (static_cast<double>(i) - 499.5) * step;
            const double e = efficiency(sched, t);
            if (!(e > prev)) return {false, "not strictly increasing at grid point " + std::to_string(i)};
            prev = e;
        }
        for (int i = 1; i <= 400; ++i) {
            const double d = static_cast<double>(i) * step;
            const double lo = efficiency(sched, sched.t0 - d);
            const double hi = efficiency(sched, sched.t0 + d);
            if (std::abs(hi + lo - 1.0) > 1e-12) {
                return {false, "point symmetry broken at offset " + fmt(d, 3)};
            }
        }
    }
    return {true, "sigmoid schedules: exact 0.5 midpoint, strictly monotone on 1000-point grids, "
                  "point symmetry within 1e-12"};
}

// criterion 3: controller-coupled colony vs the fixed-parameter colony on the
// three bundled instances, equal iteration budgets, ten seeds.
Outcome quality_improvement() {
    ExperimentSpec spec = experiment_from_json(load_json_file(kConfigs + "/table1.json"));
    for (auto& inst : spec.instances) inst = anchored(inst);
    if (!spec.best_known.empty()) spec.best_known = anchored(spec.best_known);
    spec.output_dir = (work_root() / "table1").string();
    const ExperimentResult res = run_experiment(spec, worker_threads());

    int wins = 0, total = 0;
    for (const auto& row : res.aggregate.at("instances")) {
        ++total;
        if (row.at("sq_dcode").get<double>() >= row.at("sq_aco").get<double>()) ++wins;
    }
    const double mean_impr = res.aggregate.at("mean_improvement_percent").get<double>();
    const bool ok = total == 3 && wins >= 2 && mean_impr >= 0.5;
    return {ok, "adaptive colony mean SQ wins " + std::to_string(wins) + "/" + std::to_string(total) +
                    " instances, mean improvement " + fmt(mean_impr, 2) +
                    "% (needs wins on 2/3 and >= +0.5%)"};
}

// criterion 4: the published improvement cells follow from the SQ columns.
Outcome improvement_cells() {
    const struct {
        double candidate, baseline, expected;
    } cells[] = {{98.5, 95.0, 3.7}, {96.8, 93.5, 3.5}, {99.2, 96.0, 3.3}, {97.5, 94.2, 3.5}};
    for (const auto& c : cells) {
        const double got = round1(relative_improvement(c.candidate, c.baseline));
        if (got != c.expected) {
            return {false, "relative_improvement(" + fmt(c.candidate, 1) + ", " + fmt(c.baseline, 1) +
                               ") rounded to " + fmt(got, 1) + ", expected " + fmt(c.expected, 1)};
        }
    }
    return {true, "relative improvement reproduces the +3.7/+3.5/+3.3/+3.5 reference cells at one decimal"};
}

// criterion 5: sigmoid-boosted descent converges at least 1.5x faster than the
// fixed-step baseline on the bundled convergence experiment.
Outcome convergence_ratio() {
    ExperimentSpec spec = experiment_from_json(load_json_file(kConfigs + "/table2.json"));
    spec.output_dir = (work_root() / "table2").string();
    const ExperimentResult res = run_experiment(spec, 1);

    double tgd_mean = -1.0, dgd_mean = -1.0;
    std::int64_t tgd_conv = 0, dgd_conv = 0, total = 0;
    for (const auto& row : res.aggregate.at("algorithms")) {
        const std::string name = row.at("algorithm").get<std::string>();
        if (name == "tgd") {
            tgd_mean = row.at("mean_iterations_to_converge").get<double>();
            tgd_conv = row.at("converged_seeds").get<std::int64_t>();
            total = row.at("total_seeds").get<std::int64_t>();
        } else if (name == "dgd") {
            dgd_mean = row.at("mean_iterations_to_converge").get<double>();
            dgd_conv = row.at("converged_seeds").get<std::int64_t>();
        }
    }
    if (tgd_mean <= 0.0 || dgd_mean <= 0.0) return {false, "tgd/dgd rows missing from the aggregate"};
    const bool ok = tgd_conv == total && dgd_conv == total && dgd_mean * 1.5 <= tgd_mean;
    return {ok, "sphere dim 10: boosted descent " + fmt(dgd_mean, 1) + " vs fixed-step " +
                    fmt(tgd_mean, 1) + " mean iterations to 1e-6 (ratio " + fmt(tgd_mean / dgd_mean, 2) +
                    "x, needs >= 1.5x with all seeds converged)"};
}

// criterion 6: cluster candidate lists cut wall time at n=1000 without giving
// up solution quality.
Outcome scaling_analog() {
    ExperimentSpec spec = experiment_from_json(load_json_file(kConfigs + "/table3.json"));
    spec.output_dir = (work_root() / "table3").string();
    const ExperimentResult res = run_experiment(spec, worker_threads());

    for (const auto& row : res.aggregate.at("sizes")) {
        if (row.at("n").get<int>() != 1000) continue;
        const double ratio = row.at("wall_ratio").get<double>();
        const double gap =
            std::abs(row.at("sq_clustered").get<double>() - row.at("sq_full").get<double>());
        const bool ok = ratio <= 0.8 && gap <= 2.0;
        return {ok, "n=1000 with sqrt(n) cluster lists: wall ratio " + fmt(ratio, 3) +
                        " (needs <= 0.800), SQ gap " + fmt(gap, 2) + " points (needs <= 2.00)"};
    }
    return {false, "no n=1000 row in the scaling aggregate"};
}

// criterion 7: the published utilization gains follow from the before/after columns.
Outcome gain_cells() {
    const struct {
        double before, after, expected;
    } rows[] = {{73.0, 89.0, 21.9}, {67.0, 84.0, 25.4}, {78.0, 94.0, 20.5}};
    for (const auto& r : rows) {
        const double got = round1(optimization_gain(r.before, r.after));
        if (got != r.expected) {
            return {false, "optimization_gain(" + fmt(r.before, 0) + ", " + fmt(r.after, 0) +
                               ") rounded to " + fmt(got, 1) + ", expected " + fmt(r.expected, 1)};
        }
    }
    return {true, "optimization gain reproduces the +21.9/+25.4/+20.5 reference rows at one decimal"};
}

// criterion 8: the adaptive allocation policy beats the equal static split by
// ten utilization points on the generated scenarios.
Outcome scenario_gaps() {
    const std::array<std::string, 3> kinds = {"high_demand", "emergency", "scalability"};
    int hits = 0;
    std::string gaps;
    for (const auto& kind : kinds) {
        double static_sum = 0.0, adaptive_sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SeededRng master(seed);
            const Scenario sc = generate_scenario(kind, 200, 5, master);
            static_sum += simulate(sc, equal_static_policy(5)).mean_percent;
            adaptive_sum += simulate(sc, adaptive_policy(5, default_schedule(200), 10)).mean_percent;
        }
        const double gap = (adaptive_sum - static_sum) / 10.0;
        if (gap >= 10.0) ++hits;
        if (!gaps.empty()) gaps += ", ";
        gaps += kind + " +" + fmt(gap, 1);
    }
    return {hits >= 2, "adaptive minus static utilization over 10 seeds: " + gaps +
                           " points (needs >= +10.0 on 2/3 scenarios)"};
}

// Random grid-threshold tree: every joint leaf region is then a union of
// stratification cells, so the pinned 50x budget must find the exact optimum.
DecisionTree random_grid_tree(std::size_t dim, const std::vector<double>& grid, SeededRng& rng) {
    DecisionTree tree;
    std::function<int(std::vector<double>, std::vector<double>, int)> build =
        [&](std::vector<double> lo, std::vector<double> hi, int depth) -> int {
        std::vector<std::pair<int, double>> cand;
        for (std::size_t f = 0; f < dim; ++f) {
            for (double thr : grid) {
                if (lo[f] < thr && thr < hi[f]) cand.emplace_back(static_cast<int>(f), thr);
            }
        }
        if (depth == 3 || cand.empty() || rng.next_double() < 0.35) {
            TreeNode leaf;
            leaf.feature = -1;
            leaf.leaf = (static_cast<double>(rng.next_index(41)) - 20.0) / 4.0;
            tree.nodes.push_back(leaf);
            return static_cast<int>(tree.nodes.size()) - 1;
        }
        const auto [f, thr] = cand[rng.next_index(cand.size())];
        const int self = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        std::vector<double> hi_left = hi;
        hi_left[static_cast<std::size_t>(f)] = thr;
        const int left = build(lo, hi_left, depth + 1);
        std::vector<double> lo_right = lo;
        lo_right[static_cast<std::size_t>(f)] = thr;
        const int right = build(lo_right, hi, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)] = TreeNode{f, thr, left, right, 0.0};
        return self;
    };
    build(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0), 0);
    return tree;
}

// criterion 9: scheduled random search equals brute-force leaf-box enumeration
// at 50x joint-box budget.
Outcome ensemble_oracle() {
    SeededRng gen(7071);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + gen.next_index(3);
        const std::vector<double> grid =
            dim <= 2 ? std::vector<double>{0.25, 0.5, 0.75} : std::vector<double>{0.5};
        TreeEnsemble ens;
        const std::size_t n_trees = 1 + gen.next_index(3);
        for (std::size_t t = 0; t < n_trees; ++t) {
            ens.trees.push_back(random_grid_tree(dim, grid, gen));
        }
        validate(ens);
        Box bounds{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
        const std::int64_t boxes = joint_box_count(ens, bounds);
        if (boxes < 1 || boxes > 64) {
            return {false, "trial " + std::to_string(trial) + ": generator gave " +
                               std::to_string(boxes) + " joint boxes"};
        }
        const TeooResult exact = teoo_brute_force(ens, bounds);
        SeededRng search = derive_rng(gen, 1000 + static_cast<std::uint64_t>(trial));
        const TeooResult found = teoo_minimize(ens, bounds, 50 * boxes, search);
        if (found.value != exact.value) {
            return {false, "trial " + std::to_string(trial) + ": minimize found " +
                               fmt(found.value, 6) + " but brute force gives " + fmt(exact.value, 6)};
        }
    }
    return {true, "100/100 random ensembles (<= 3 trees, depth <= 3) minimized exactly at "
                  "50x joint-box budget"};
}

// criterion 10: prescription lookup equals an independent scan over a parallel
// typed representation, infeasible sets included.
Outcome prescription_oracle() {
    SeededRng rng(2468);
    const std::array<std::string, 3> colors = {"red", "green", "blue"};
    int infeasible_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t rows = 1 + rng.next_index(40);
        const std::size_t n_num = 1 + rng.next_index(3);
        const bool with_cat = rng.next_double() < 0.4;

        PrescriptionDataset ds;
        for (std::size_t c = 0; c < n_num; ++c) ds.features.push_back("x" + std::to_string(c));
        if (with_cat) ds.features.push_back("cat");

        std::vector<std::vector<double>> nums(rows, std::vector<double>(n_num));
        std::vector<std::string> cats(rows);
        ds.cells.resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < n_num; ++c) {
                const int v = static_cast<int>(rng.next_index(10));
                nums[r][c] = v;
                ds.cells[r].push_back(std::to_string(v));
            }
            if (with_cat) {
                cats[r] = colors[rng.next_index(3)];
                ds.cells[r].push_back(cats[r]);
            }
            ds.objective.push_back(static_cast<double>(static_cast<int>(rng.next_index(19)) - 9));
        }

        // kind 0: numeric op on a numeric column, 1: text equality on the
        // categorical column, 2: numeric equality on the categorical column
        // (never true by the documented semantics)
        struct GenCon {
            int kind = 0;
            std::size_t col = 0;
            Constraint::Op op = Constraint::Op::eq;
            double num = 0.0;
            std::string text;
        };
        std::vector<Constraint> constraints;
        std::vector<GenCon> gens;
        const std::size_t n_cons = rng.next_index(4);
        for (std::size_t k = 0; k < n_cons; ++k) {
            GenCon g;
            Constraint c;
            const double pick = rng.next_double();
            if (with_cat && pick < 0.25) {
                g.kind = 1;
                g.text = rng.next_double() < 0.8 ? colors[rng.next_index(3)] : "violet";
                c.feature = "cat";
                c.op = Constraint::Op::eq;
                c.numeric = false;
                c.text = g.text;
            } else if (with_cat && pick < 0.32) {
                g.kind = 2;
                c.feature = "cat";
                c.op = Constraint::Op::eq;
                c.numeric = true;
                c.number = static_cast<double>(rng.next_index(10));
            } else {
                g.kind = 0;
                g.col = rng.next_index(n_num);
                const Constraint::Op ops[] = {Constraint::Op::le, Constraint::Op::ge,
                                              Constraint::Op::lt, Constraint::Op::gt,
                                              Constraint::Op::eq};
                g.op = ops[rng.next_index(5)];
                g.num = rng.next_double() < 0.05
                            ? 100.0
                            : static_cast<double>(rng.next_index(11)) +
                                  (rng.next_index(2) == 1 ? 0.5 : 0.0);
                c.feature = "x" + std::to_string(g.col);
                c.op = g.op;
                c.numeric = true;
                c.number = g.num;
            }
            constraints.push_back(c);
            gens.push_back(g);
        }

        const PrescribeResult got = olp_prescribe(ds, constraints);

        bool best_found = false;
        std::size_t best_idx = 0;
        double best_f = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            bool feasible = true;
            for (const auto& g : gens) {
                if (g.kind == 1) {
                    feasible = cats[r] == g.text;
                } else if (g.kind == 2) {
                    feasible = false;
                } else {
                    const double v = nums[r][g.col];
                    switch (g.op) {
                        case Constraint::Op::le: feasible = v <= g.num; break;
                        case Constraint::Op::ge: feasible = v >= g.num; break;
                        case Constraint::Op::lt: feasible = v < g.num; break;
                        case Constraint::Op::gt: feasible = v > g.num; break;
                        case Constraint::Op::eq: feasible = v == g.num; break;
                    }
                }
                if (!feasible) break;
            }
            if (feasible && (!best_found || ds.objective[r] < best_f)) {
                best_found = true;
                best_idx = r;
                best_f = ds.objective[r];
            }
        }

        if (got.feasible != best_found) {
            return {false, "trial " + std::to_string(trial) + ": feasibility mismatch"};
        }
        if (best_found && (got.index != best_idx || got.objective != best_f)) {
            return {false, "trial " + std::to_string(trial) + ": picked row " +
                               std::to_string(got.index) + ", scan says " + std::to_string(best_idx)};
        }
        if (!best_found) ++infeasible_seen;
    }
    if (infeasible_seen == 0) return {false, "generator never produced an infeasible case"};
    return {true, "1000/1000 random datasets match the independent scan (" +
                      std::to_string(infeasible_seen) + " infeasible cases included)"};
}

// criterion 11: analytic gradients against central finite differences.
Outcome gradient_checks() {
    const Objective objectives[] = {Objective::sphere, Objective::rosenbrock, Objective::rastrigin};
    for (const Objective obj : objectives) {
        const ContinuousProblem p = make_benchmark(obj, 10);
        SeededRng rng(4096);
        for (int i = 0; i < 100; ++i) {
            std::vector<double> x(p.dim);
            for (std::size_t d = 0; d < p.dim; ++d) x[d] = rng.next_range(p.lower[d], p.upper[d]);
            const auto analytic = p.gradient(x);

            const double h = 1e-6;
            double num = 0.0, den = 0.0;
            for (std::size_t d = 0; d < p.dim; ++d) {
                const double orig = x[d];
                x[d] = orig + h;
                const double fp = p.eval(x);
                x[d] = orig - h;
                const double fm = p.eval(x);
                x[d] = orig;
                const double fd = (fp - fm) / (2.0 * h);
                num += (analytic[d] - fd) * (analytic[d] - fd);
                den += fd * fd;
            }
            const double rel = std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
            if (!(rel < 1e-5)) {
                return {false, objective_name(obj) + " point " + std::to_string(i) +
                                   ": relative error " + fmt(rel, 8)};
            }
        }
    }
    return {true, "analytic gradients within 1e-5 of central differences on 100 points x 3 benchmarks"};
}

// ---- criterion 12 helpers ----

int run_command(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

// Drops wall-clock columns from CSVs and wall/output-path lines from JSON so
// only the timing fields may differ between the two runs.
std::string scrub(const std::string& text, const std::string& filename, const std::string& out_dir) {
    std::string body = text;
    for (std::size_t at = body.find(out_dir); at != std::string::npos; at = body.find(out_dir)) {
        body.replace(at, out_dir.size(), "@OUT@");
    }
    const auto lines = split_lines(body);
    std::ostringstream os;
    if (filename.size() >= 4 && filename.compare(filename.size() - 4, 4, ".csv") == 0) {
        if (lines.empty()) return "";
        const auto header = split_csv(lines.front());
        std::vector<bool> keep(header.size(), true);
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c].find("wall") != std::string::npos) keep[c] = false;
        }
        for (const auto& line : lines) {
            const auto fields = split_csv(line);
            bool first = true;
            for (std::size_t c = 0; c < fields.size(); ++c) {
                if (c < keep.size() && !keep[c]) continue;
                if (!first) os << ',';
                os << fields[c];
                first = false;
            }
            os << '\n';
        }
        return os.str();
    }
    if (filename.size() >= 5 && filename.compare(filename.size() - 5, 5, ".json") == 0) {
        for (const auto& line : lines) {
            if (line.find("wall") != std::string::npos) continue;
            if (line.find("output_dir") != std::string::npos) continue;
            os << line << '\n';
        }
        return os.str();
    }
    return body;
}

std::vector<std::string> list_files(const fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            out.push_back(fs::relative(entry.path(), dir).string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Runs the command twice (out_dir substituted for @OUT@) and byte-compares the
// scrubbed artifacts plus captured stdout/stderr.
std::optional<std::string> determinism_pair(const std::string& label, const std::string& arg_template) {
    std::array<fs::path, 2> dirs = {work_root() / "cli" / (label + "_a"),
                                    work_root() / "cli" / (label + "_b")};
    for (const auto& dir : dirs) {
        fs::create_directories(dir);
        std::string cmd = arg_template;
        for (std::size_t at = cmd.find("@OUT@"); at != std::string::npos; at = cmd.find("@OUT@")) {
            cmd.replace(at, 5, dir.string());
        }
        cmd += " > " + (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
        const int exit_code = run_command(cmd);
        if (exit_code != 0) {
            return label + " exited with " + std::to_string(exit_code) + ": " +
                   read_file(dir / "stderr.txt").substr(0, 120);
        }
    }
    const auto files_a = list_files(dirs[0]);
    const auto files_b = list_files(dirs[1]);
    if (files_a != files_b) return label + ": the two runs wrote different file sets";
    for (const auto& rel : files_a) {
        const std::string a = scrub(read_file(dirs[0] / rel), rel, dirs[0].string());
        const std::string b = scrub(read_file(dirs[1] / rel), rel, dirs[1].string());
        if (a != b) return label + ": " + rel + " differs after dropping wall fields";
    }
    return std::nullopt;
}

// criterion 12: every CLI command is reproducible for a fixed seed.
Outcome cli_determinism() {
    const fs::path root = work_root() / "cli";
    fs::create_directories(root);

    const fs::path solve_cfg = root / "solve_config.json";
    {
        Json doc;
        doc["colony"] = Json{{"m", 8}, {"max_iterations", 60}};
        std::ofstream out(solve_cfg);
        out << doc.dump(2) << '\n';
    }
    std::array<fs::path, 2> bench_specs = {root / "bench_spec_a.json", root / "bench_spec_b.json"};
    for (std::size_t i = 0; i < 2; ++i) {
        Json doc;
        doc["colony"] = Json{{"m", 6}, {"max_iterations", 15}};
        doc["experiment"] =
            Json{{"kind", "tsp_compare"},
                 {"name", "determinism"},
                 {"seeds", Json::array({1, 2})},
                 {"instances", Json::array({kFixtures + "/tsp/eil51.tsp"})},
                 {"best_known", kFixtures + "/best_known.csv"},
                 {"output_dir",
                  (root / (i == 0 ? "bench_a" : "bench_b") / "out").string()}};
        std::ofstream out(bench_specs[i]);
        out << doc.dump(2) << '\n';
    }

    const struct {
        std::string label;
        std::string args;
    } commands[] = {
        {"solve", kCliBin + " solve --instance " + kFixtures + "/tsp/berlin52.tsp --best-known " +
                      kFixtures + "/best_known.csv --config " + solve_cfg.string() +
                      " --seed 7 --threads 2 --out @OUT@"},
        {"bench", kCliBin + " bench --spec @SPEC@ --threads 2"},
        {"simulate", kCliBin +
                         " simulate --scenario emergency --seed 5 --horizon 80 --tasks 4 --out @OUT@"},
        {"prescribe", kCliBin + " prescribe --data " + kFixtures +
                          "/prescriptions/demo.csv --constraint 'x>=2'"},
    };
    for (const auto& cmd : commands) {
        std::string args = cmd.args;
        if (cmd.label == "bench") {
            // the spec file itself differs per run, so splice it in here
            const std::string with_a = [&] {
                std::string s = args;
                s.replace(s.find("@SPEC@"), 6, bench_specs[0].string());
                return s;
            }();
            const std::string with_b = [&] {
                std::string s = args;
                s.replace(s.find("@SPEC@"), 6, bench_specs[1].string());
                return s;
            }();
            std::array<fs::path, 2> dirs = {root / "bench_a", root / "bench_b"};
            const std::string runs[2] = {with_a, with_b};
            for (std::size_t i = 0; i < 2; ++i) {
                fs::create_directories(dirs[i]);
                const std::string full = runs[i] + " > " + (dirs[i] / "stdout.txt").string() +
                                         " 2> " + (dirs[i] / "stderr.txt").string();
                const int exit_code = run_command(full);
                if (exit_code != 0) {
                    return {false, "bench exited with " + std::to_string(exit_code)};
                }
            }
            const auto files_a = list_files(dirs[0]);
            const auto files_b = list_files(dirs[1]);
            if (files_a != files_b) return {false, "bench: the two runs wrote different file sets"};
            for (const auto& rel : files_a) {
                const std::string a = scrub(read_file(dirs[0] / rel), rel, dirs[0].string());
                const std::string b = scrub(read_file(dirs[1] / rel), rel, dirs[1].string());
                if (a != b) return {false, "bench: " + rel + " differs after dropping wall fields"};
            }
            continue;
        }
        if (const auto err = determinism_pair(cmd.label, args)) return {false, *err};
    }
    return {true, "solve/bench/simulate/prescribe each run twice with one seed: artifacts and "
                  "stdout byte-identical after dropping wall-time fields"};
}

} // namespace

int main() {
    std::error_code ec;
    fs::remove_all(work_root(), ec);
    fs::create_directories(work_root());

    criterion(1, 5.0, transition_rule_properties);
    criterion(2, 1.0, sigmoid_properties);
    criterion(3, 600.0, quality_improvement);
    criterion(4, 1.0, improvement_cells);
    criterion(5, 60.0, convergence_ratio);
    criterion(6, 900.0, scaling_analog);
    criterion(7, 1.0, gain_cells);
    criterion(8, 60.0, scenario_gaps);
    criterion(9, 60.0, ensemble_oracle);
    criterion(10, 10.0, prescription_oracle);
    criterion(11, 5.0, gradient_checks);
    criterion(12, 120.0, cli_determinism);

    if (g_failures > 0) {
        std::cout << g_failures << " of 12 criteria failed" << std::endl;
        return 1;
    }
    std::cout << "all 12 criteria passed" << std::endl;
    return 0;
}

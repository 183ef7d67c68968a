#include "dcode/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dcode {

namespace {

const std::map<std::string, BaselineAlgorithm> kNames = {
    {"aco_classic", BaselineAlgorithm::aco_classic},
    {"ga_tsp", BaselineAlgorithm::ga_tsp},
    {"tgd", BaselineAlgorithm::tgd},
    {"dgd", BaselineAlgorithm::dgd},
    {"es", BaselineAlgorithm::es},
    {"pso", BaselineAlgorithm::pso},
    {"de_rand1bin", BaselineAlgorithm::de_rand1bin},
};

double param_or(const BaselineConfig& cfg, const std::string& key, double fallback) {
    const auto it = cfg.params.find(key);
    return it == cfg.params.end() ? fallback : it->second;
}

std::optional<double> param_opt(const BaselineConfig& cfg, const std::string& key) {
    const auto it = cfg.params.find(key);
    if (it == cfg.params.end()) return std::nullopt;
    return it->second;
}

void check_finite_gradient(const std::vector<double>& g, int t) {
    for (double v : g) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("non-finite gradient at iteration " + std::to_string(t));
        }
    }
}

std::vector<double> start_point(const ContinuousProblem& problem, std::optional<double> x0,
                                SeededRng& rng) {
    std::vector<double> x(problem.dim);
    for (std::size_t d = 0; d < problem.dim; ++d) {
        x[d] = x0 ? std::clamp(*x0, problem.lower[d], problem.upper[d])
                  : rng.next_range(problem.lower[d], problem.upper[d]);
    }
    return x;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void finish(RunRecord& record, const Timer& timer) {
    record.iterations_run = static_cast<int>(record.best_cost_per_iteration.size());
    record.wall_seconds = timer.seconds();
}

// ---- continuous algorithms ----

RunRecord run_tgd(const ContinuousProblem& problem, double step, int max_iterations,
                  std::optional<double> x0, SeededRng& rng) {
    Timer timer;
    RunRecord record;
    std::vector<double> x = start_point(problem, x0, rng);
    double best = problem.eval(x);
    record.evaluations = 1;
    record.best_point = x;
    record.best_cost_per_iteration.push_back(best);
    for (int t = 2; t <= max_iterations; ++t) {
        const auto g = problem.gradient(x);
        check_finite_gradient(g, t);
        for (std::size_t d = 0; d < problem.dim; ++d) {
            x[d] = std::clamp(x[d] - step * g[d], problem.lower[d], problem.upper[d]);
        }
        const double cost = problem.eval(x);
        ++record.evaluations;
        if (cost < best) {
            best = cost;
            record.best_point = x;
        }
        record.best_cost_per_iteration.push_back(best);
    }
    finish(record, timer);
    return record;
}

struct Individual {
    std::vector<double> x;
    double sigma = 0.0;
    double cost = 0.0;
};

RunRecord run_es(const ContinuousProblem& problem, const BaselineConfig& cfg, SeededRng& rng) {
    Timer timer;
    const std::size_t dim = problem.dim;
    const int lambda = cfg.population;
    const int mu = static_cast<int>(param_or(cfg, "mu", 5.0));
    const double frac = param_or(cfg, "sigma0_frac", 0.3);
    double mean_range = 0.0;
    for (std::size_t d = 0; d < dim; ++d) mean_range += problem.upper[d] - problem.lower[d];
    mean_range /= static_cast<double>(dim);
    const double sigma0 = frac * mean_range;
    const double tau0 = 1.0 / std::sqrt(2.0 * static_cast<double>(dim));

    RunRecord record;
    std::vector<Individual> pop(static_cast<std::size_t>(lambda));
    double best = std::numeric_limits<double>::max();
    for (auto& ind : pop) {
        ind.x = start_point(problem, std::nullopt, rng);
        ind.sigma = sigma0;
        ind.cost = problem.eval(ind.x);
        ++record.evaluations;
        if (ind.cost < best) {
            best = ind.cost;
            record.best_point = ind.x;
        }
    }
    record.best_cost_per_iteration.push_back(best);

    std::vector<std::size_t> order(pop.size());
    std::vector<Individual> next(pop.size());
    for (int t = 2; t <= cfg.max_iterations; ++t) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return pop[a].cost < pop[b].cost; });
        for (auto& child : next) {
            const Individual& parent = pop[order[rng.next_index(static_cast<std::uint64_t>(mu))]];
            child.sigma = std::max(parent.sigma * std::exp(tau0 * rng.next_gaussian()), 1e-12);
            child.x.resize(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                child.x[d] = std::clamp(parent.x[d] + child.sigma * rng.next_gaussian(),
                                        problem.lower[d], problem.upper[d]);
            }
            child.cost = problem.eval(child.x);
            ++record.evaluations;
            if (child.cost < best) {
                best = child.cost;
                record.best_point = child.x;
            }
        }
        pop.swap(next);
        record.best_cost_per_iteration.push_back(best);
    }
    finish(record, timer);
    return record;
}

RunRecord run_pso(const ContinuousProblem& problem, const BaselineConfig& cfg, SeededRng& rng) {
    Timer timer;
    const std::size_t dim = problem.dim;
    const std::size_t swarm = static_cast<std::size_t>(cfg.population);
    const double w = param_or(cfg, "inertia", 0.729);
    const double c1 = param_or(cfg, "cognitive", 1.49445);
    const double c2 = param_or(cfg, "social", 1.49445);
    const double vfrac = param_or(cfg, "vmax_frac", 0.2);

    std::vector<double> vmax(dim);
    for (std::size_t d = 0; d < dim; ++d) vmax[d] = vfrac * (problem.upper[d] - problem.lower[d]);

    RunRecord record;
    std::vector<std::vector<double>> x(swarm), v(swarm), pbest(swarm);
    std::vector<double> pcost(swarm);
    double best = std::numeric_limits<double>::max();
    std::vector<double> gbest;
    for (std::size_t i = 0; i < swarm; ++i) {
        x[i] = start_point(problem, std::nullopt, rng);
        v[i].assign(dim, 0.0);
        pbest[i] = x[i];
        pcost[i] = problem.eval(x[i]);
        ++record.evaluations;
        if (pcost[i] < best) {
            best = pcost[i];
            gbest = x[i];
        }
    }
    record.best_cost_per_iteration.push_back(best);
    record.best_point = gbest;

    for (int t = 2; t <= cfg.max_iterations; ++t) {
        const std::vector<double> gref = gbest; // synchronous update within the iteration
        for (std::size_t i = 0; i < swarm; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double r1 = rng.next_double();
                const double r2 = rng.next_double();
                double vel = w * v[i][d] + c1 * r1 * (pbest[i][d] - x[i][d]) +
                             c2 * r2 * (gref[d] - x[i][d]);
                vel = std::clamp(vel, -vmax[d], vmax[d]);
                v[i][d] = vel;
                x[i][d] = std::clamp(x[i][d] + vel, problem.lower[d], problem.upper[d]);
            }
            const double cost = problem.eval(x[i]);
            ++record.evaluations;
            if (cost < pcost[i]) {
                pcost[i] = cost;
                pbest[i] = x[i];
            }
            if (cost < best) {
                best = cost;
                gbest = x[i];
            }
        }
        record.best_cost_per_iteration.push_back(best);
    }
    record.best_point = gbest;
    finish(record, timer);
    return record;
}

RunRecord run_de(const ContinuousProblem& problem, const BaselineConfig& cfg, SeededRng& rng) {
    Timer timer;
    const std::size_t dim = problem.dim;
    const std::size_t np = static_cast<std::size_t>(cfg.population);
    const double f_weight = param_or(cfg, "F", 0.5);
    const double cr = param_or(cfg, "CR", 0.9);

    RunRecord record;
    std::vector<std::vector<double>> pop(np);
    std::vector<double> cost(np);
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < np; ++i) {
        pop[i] = start_point(problem, std::nullopt, rng);
        cost[i] = problem.eval(pop[i]);
        ++record.evaluations;
        if (cost[i] < best) {
            best = cost[i];
            record.best_point = pop[i];
        }
    }
    record.best_cost_per_iteration.push_back(best);

    std::vector<std::vector<double>> next = pop;
    std::vector<double> next_cost = cost;
    std::vector<double> trial(dim);
    for (int t = 2; t <= cfg.max_iterations; ++t) {
        for (std::size_t i = 0; i < np; ++i) {
            std::uint64_t r1, r2, r3;
            do { r1 = rng.next_index(np); } while (r1 == i);
            do { r2 = rng.next_index(np); } while (r2 == i || r2 == r1);
            do { r3 = rng.next_index(np); } while (r3 == i || r3 == r1 || r3 == r2);
            const std::uint64_t jrand = rng.next_index(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                const bool cross = rng.next_double() < cr || d == jrand;
                double value = cross ? pop[r1][d] + f_weight * (pop[r2][d] - pop[r3][d])
                                     : pop[i][d];
                trial[d] = std::clamp(value, problem.lower[d], problem.upper[d]);
            }
            const double tc = problem.eval(trial);
            ++record.evaluations;
            if (tc <= cost[i]) {
                next[i] = trial;
                next_cost[i] = tc;
            } else {
                next[i] = pop[i];
                next_cost[i] = cost[i];
            }
            if (tc < best) {
                best = tc;
                record.best_point = trial;
            }
        }
        pop.swap(next);
        cost.swap(next_cost);
        record.best_cost_per_iteration.push_back(best);
    }
    finish(record, timer);
    return record;
}

// ---- TSP genetic algorithm ----

std::vector<int> order_crossover(const std::vector<int>& a, const std::vector<int>& b,
                                 SeededRng& rng) {
    const std::size_t n = a.size();
    std::size_t c1 = rng.next_index(n);
    std::size_t c2 = rng.next_index(n);
    if (c1 > c2) std::swap(c1, c2);
    std::vector<int> child(n, -1);
    std::vector<char> used(n, 0);
    for (std::size_t p = c1; p <= c2; ++p) {
        child[p] = a[p];
        used[static_cast<std::size_t>(a[p])] = 1;
    }
    std::size_t write = (c2 + 1) % n;
    for (std::size_t k = 0; k < n; ++k) {
        const int city = b[(c2 + 1 + k) % n];
        if (used[static_cast<std::size_t>(city)]) continue;
        child[write] = city;
        used[static_cast<std::size_t>(city)] = 1;
        write = (write + 1) % n;
    }
    return child;
}

RunRecord run_ga(const TspInstance& instance, const BaselineConfig& cfg, SeededRng& rng) {
    Timer timer;
    const std::size_t n = instance.n;
    const std::size_t pop_size = static_cast<std::size_t>(cfg.population);
    const double cx_rate = param_or(cfg, "crossover_rate", 0.9);
    const double mut_rate = param_or(cfg, "mutation_rate", 2.0 / static_cast<double>(n));
    const std::size_t tournament = static_cast<std::size_t>(param_or(cfg, "tournament", 3.0));
    const std::size_t elitism =
        std::min(pop_size, static_cast<std::size_t>(param_or(cfg, "elitism", 1.0)));

    RunRecord record;
    std::vector<Tour> pop(pop_size);
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 0);
    Tour best;
    best.cost = std::numeric_limits<double>::max();
    for (auto& ind : pop) {
        ind.order = base;
        rng.shuffle(ind.order);
        ind.cost = tour_cost(instance, ind.order);
        ++record.evaluations;
        if (ind.cost < best.cost) best = ind;
    }
    record.best_cost_per_iteration.push_back(best.cost);

    const auto pick = [&]() -> const Tour& {
        std::size_t winner = rng.next_index(pop_size);
        for (std::size_t k = 1; k < tournament; ++k) {
            const std::size_t cand = rng.next_index(pop_size);
            if (pop[cand].cost < pop[winner].cost) winner = cand;
        }
        return pop[winner];
    };

    std::vector<Tour> next;
    next.reserve(pop_size);
    for (int t = 2; t <= cfg.max_iterations; ++t) {
        next.clear();
        std::vector<std::size_t> order(pop_size);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pop[a].cost < pop[b].cost;
        });
        for (std::size_t e = 0; e < elitism; ++e) next.push_back(pop[order[e]]);
        while (next.size() < pop_size) {
            const Tour& pa = pick();
            const Tour& pb = pick();
            Tour child;
            child.order = rng.next_double() < cx_rate ? order_crossover(pa.order, pb.order, rng)
                                                      : pa.order;
            for (std::size_t pos = 0; pos < n; ++pos) {
                if (rng.next_double() < mut_rate) {
                    std::swap(child.order[pos], child.order[rng.next_index(n)]);
                }
            }
            child.cost = tour_cost(instance, child.order);
            ++record.evaluations;
            if (child.cost < best.cost) best = child;
            next.push_back(std::move(child));
        }
        pop.swap(next);
        record.best_cost_per_iteration.push_back(best.cost);
    }
    record.best_tour = best;
    finish(record, timer);
    return record;
}

ColonyConfig colony_from_baseline(const BaselineConfig& cfg) {
    ColonyConfig colony;
    colony.alpha = param_or(cfg, "alpha", colony.alpha);
    colony.beta = param_or(cfg, "beta", colony.beta);
    colony.rho = param_or(cfg, "rho", colony.rho);
    colony.q_deposit = param_or(cfg, "q_deposit", colony.q_deposit);
    colony.candidate_list_size =
        static_cast<int>(param_or(cfg, "candidate_list_size", 0.0));
    colony.tau_init = param_or(cfg, "tau_init", 0.0);
    colony.m = cfg.population;
    colony.max_iterations = cfg.max_iterations;
    return colony;
}

void check_params(const BaselineConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : cfg.params) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw std::invalid_argument("baseline " + baseline_name(cfg.algorithm) +
                                        ": unknown parameter '" + key + "'");
        }
    }
}

void check_unit(const BaselineConfig& cfg, const std::string& key, double fallback) {
    const double v = param_or(cfg, key, fallback);
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("baseline " + baseline_name(cfg.algorithm) + ": " + key +
                                    " must be in [0,1]");
    }
}

void check_positive(const BaselineConfig& cfg, const std::string& key, double fallback) {
    if (!(param_or(cfg, key, fallback) > 0.0)) {
        throw std::invalid_argument("baseline " + baseline_name(cfg.algorithm) + ": " + key +
                                    " must be positive");
    }
}

} // namespace

BaselineAlgorithm baseline_from_name(const std::string& name) {
    const auto it = kNames.find(name);
    if (it != kNames.end()) return it->second;
    std::string valid;
    for (const auto& [n, a] : kNames) {
        (void)a;
        valid += valid.empty() ? n : ", " + n;
    }
    throw std::invalid_argument("unknown algorithm '" + name + "', valid: " + valid);
}

std::string baseline_name(BaselineAlgorithm algorithm) {
    for (const auto& [n, a] : kNames) {
        if (a == algorithm) return n;
    }
    return "?";
}

void validate(const BaselineConfig& cfg) {
    if (cfg.population < 1) throw std::invalid_argument("baseline: population must be >= 1");
    if (cfg.max_iterations < 1) {
        throw std::invalid_argument("baseline: max_iterations must be >= 1");
    }
    switch (cfg.algorithm) {
        case BaselineAlgorithm::aco_classic:
            check_params(cfg, {"alpha", "beta", "rho", "q_deposit", "candidate_list_size",
                               "tau_init"});
            validate(colony_from_baseline(cfg));
            break;
        case BaselineAlgorithm::ga_tsp:
            check_params(cfg, {"crossover_rate", "mutation_rate", "tournament", "elitism"});
            check_unit(cfg, "crossover_rate", 0.9);
            if (param_or(cfg, "tournament", 3.0) < 1.0) {
                throw std::invalid_argument("baseline ga_tsp: tournament must be >= 1");
            }
            break;
        case BaselineAlgorithm::tgd:
            check_params(cfg, {"step", "x0"});
            check_positive(cfg, "step", 0.01);
            break;
        case BaselineAlgorithm::dgd:
            check_params(cfg, {"step", "x0", "boost", "t0", "k"});
            check_positive(cfg, "step", 0.01);
            if (param_or(cfg, "boost", 3.0) < 1.0) {
                throw std::invalid_argument("baseline dgd: boost must be >= 1");
            }
            break;
        case BaselineAlgorithm::es:
            check_params(cfg, {"mu", "sigma0_frac"});
            check_positive(cfg, "sigma0_frac", 0.3);
            if (param_or(cfg, "mu", 5.0) < 1.0 ||
                param_or(cfg, "mu", 5.0) > static_cast<double>(cfg.population)) {
                throw std::invalid_argument("baseline es: need 1 <= mu <= population");
            }
            break;
        case BaselineAlgorithm::pso:
            check_params(cfg, {"inertia", "cognitive", "social", "vmax_frac"});
            check_positive(cfg, "vmax_frac", 0.2);
            break;
        case BaselineAlgorithm::de_rand1bin:
            check_params(cfg, {"F", "CR"});
            check_positive(cfg, "F", 0.5);
            check_unit(cfg, "CR", 0.9);
            if (cfg.population < 4) {
                throw std::invalid_argument("baseline de_rand1bin: population must be >= 4");
            }
            break;
    }
}

RunRecord run_baseline(const BaselineConfig& cfg, const TspInstance& instance, SeededRng& rng,
                       unsigned threads) {
    validate(cfg);
    SeededRng local = derive_rng(rng, 0);
    switch (cfg.algorithm) {
        case BaselineAlgorithm::aco_classic: {
            DcoOptions options;
            options.threads = threads;
            return run_dco(instance, colony_from_baseline(cfg), std::nullopt, rng, options);
        }
        case BaselineAlgorithm::ga_tsp:
            return run_ga(instance, cfg, local);
        default:
            throw std::invalid_argument("baseline " + baseline_name(cfg.algorithm) +
                                        " runs on continuous problems, got a TSP instance");
    }
}

RunRecord run_baseline(const BaselineConfig& cfg, const ContinuousProblem& problem,
                       SeededRng& rng) {
    validate(cfg);
    SeededRng local = derive_rng(rng, 0);
    switch (cfg.algorithm) {
        case BaselineAlgorithm::tgd:
            return run_tgd(problem, param_or(cfg, "step", 0.01), cfg.max_iterations,
                           param_opt(cfg, "x0"), local);
        case BaselineAlgorithm::dgd: {
            EfficiencySchedule sched = default_schedule(cfg.max_iterations);
            if (const auto t0 = param_opt(cfg, "t0")) sched.t0 = *t0;
            if (const auto k = param_opt(cfg, "k")) sched.k = *k;
            return run_dgd(problem, sched, param_or(cfg, "step", 0.01), cfg.max_iterations, rng,
                           param_or(cfg, "boost", 3.0), param_opt(cfg, "x0"));
        }
        case BaselineAlgorithm::es:
            return run_es(problem, cfg, local);
        case BaselineAlgorithm::pso:
            return run_pso(problem, cfg, local);
        case BaselineAlgorithm::de_rand1bin:
            return run_de(problem, cfg, local);
        default:
            throw std::invalid_argument("baseline " + baseline_name(cfg.algorithm) +
                                        " runs on TSP instances, got a continuous problem");
    }
}

RunRecord run_dgd(const ContinuousProblem& problem, const EfficiencySchedule& sched,
                  double base_step, int max_iterations, SeededRng& rng, double boost,
                  std::optional<double> x0) {
    validate(sched);
    if (!(base_step > 0.0)) throw std::invalid_argument("run_dgd: base_step must be positive");
    if (boost < 1.0) throw std::invalid_argument("run_dgd: boost must be >= 1");
    if (max_iterations < 1) throw std::invalid_argument("run_dgd: max_iterations must be >= 1");

    Timer timer;
    SeededRng local = derive_rng(rng, 0);
    RunRecord record;
    std::vector<double> x = start_point(problem, x0, local);
    double cost = problem.eval(x);
    record.evaluations = 1;
    double best = cost;
    record.best_point = x;
    record.best_cost_per_iteration.push_back(best);

    const std::int64_t budget = max_iterations; // one nominal evaluation per iteration
    std::vector<double> trial(problem.dim);
    for (int t = 2; t <= max_iterations && record.evaluations < budget; ++t) {
        const auto g = problem.gradient(x);
        check_finite_gradient(g, t);
        double eta = base_step * (1.0 + efficiency(sched, static_cast<double>(t)) * (boost - 1.0));
        double trial_cost = 0.0;
        int halvings = 0;
        while (true) {
            for (std::size_t d = 0; d < problem.dim; ++d) {
                trial[d] = std::clamp(x[d] - eta * g[d], problem.lower[d], problem.upper[d]);
            }
            trial_cost = problem.eval(trial);
            ++record.evaluations;
            if (trial_cost <= cost || halvings >= 30 || record.evaluations >= budget) break;
            eta /= 2.0;
            ++halvings;
        }
        if (trial_cost <= cost) {
            x = trial;
            cost = trial_cost;
        }
        if (cost < best) {
            best = cost;
            record.best_point = x;
        }
        record.best_cost_per_iteration.push_back(best);
    }
    finish(record, timer);
    return record;
}

std::optional<std::int64_t> iterations_to_converge(const RunRecord& record, double target,
                                                   double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("iterations_to_converge: tolerance > 0");
    const double threshold = target == 0.0 ? 1e-6 : target + tolerance;
    for (std::size_t i = 0; i < record.best_cost_per_iteration.size(); ++i) {
        if (record.best_cost_per_iteration[i] <= threshold) {
            return static_cast<std::int64_t>(i + 1);
        }
    }
    return std::nullopt;
}

} // namespace dcode

#include "dcode/colony.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcode/parallel.hpp"

namespace dcode {

namespace {

constexpr double kDistanceFloor = 1e-6;
constexpr std::int64_t kGlobalBestPeriod = 5;

double checked_pow(double base, double exponent) {
    if (exponent == 0.0) return 1.0;
    if (exponent == 1.0) return base;
    return std::pow(base, exponent);
}

// Roulette over `count` weights fetched through `weight(idx)`; the last bucket
// absorbs floating-point residue. Zero total falls back to uniform.
template <typename WeightFn>
std::size_t roulette_pick(std::size_t count, WeightFn weight, SeededRng& rng) {
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) total += weight(i);
    if (!(total > 0.0)) {
        return static_cast<std::size_t>(rng.next_index(count));
    }
    const double r = rng.next_double() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
        cumulative += weight(i);
        if (r < cumulative) return i;
    }
    return count - 1;
}

struct TourBuilder {
    std::vector<char> visited;
    std::vector<int> unvisited;
    std::vector<int> pool; // candidate intersection scratch

    explicit TourBuilder(std::size_t n) : visited(n, 0) { unvisited.reserve(n); }

    void reset(std::size_t n) {
        std::fill(visited.begin(), visited.end(), 0);
        unvisited.clear();
        for (std::size_t c = 0; c < n; ++c) unvisited.push_back(static_cast<int>(c));
    }

    void visit(int city) {
        visited[static_cast<std::size_t>(city)] = 1;
        const auto it = std::find(unvisited.begin(), unvisited.end(), city);
        *it = unvisited.back();
        unvisited.pop_back();
    }
};

// Shared fast path: weights[i*n+j] = tau_ij^alpha * eta_ij^beta, precomputed
// by the caller. Candidate lists, when given, restrict each step's choices to
// unvisited members of the current city's list.
Tour construct_tour_weighted(const TspInstance& instance, std::span<const double> weights,
                             const std::vector<std::vector<int>>* candidates, SeededRng& rng,
                             TourBuilder& builder) {
    const std::size_t n = instance.n;
    builder.reset(n);

    Tour tour;
    tour.order.reserve(n);
    int current = static_cast<int>(rng.next_index(n));
    tour.order.push_back(current);
    builder.visit(current);

    while (tour.order.size() < n) {
        const double* row = weights.data() + static_cast<std::size_t>(current) * n;
        int next = -1;
        if (candidates) {
            builder.pool.clear();
            for (int c : (*candidates)[static_cast<std::size_t>(current)]) {
                if (!builder.visited[static_cast<std::size_t>(c)]) builder.pool.push_back(c);
            }
            if (!builder.pool.empty()) {
                const auto pick = roulette_pick(
                    builder.pool.size(),
                    [&](std::size_t i) { return row[static_cast<std::size_t>(builder.pool[i])]; },
                    rng);
                next = builder.pool[pick];
            }
        }
        if (next < 0) {
            const auto pick = roulette_pick(
                builder.unvisited.size(),
                [&](std::size_t i) { return row[static_cast<std::size_t>(builder.unvisited[i])]; },
                rng);
            next = builder.unvisited[pick];
        }
        tour.order.push_back(next);
        builder.visit(next);
        current = next;
    }
    tour.cost = tour_cost(instance, tour.order);
    return tour;
}

std::vector<double> build_weights(const PheromoneField& pher, std::span<const double> eta_pow,
                                  double alpha) {
    const std::size_t size = pher.tau.size();
    std::vector<double> weights(size);
    if (alpha == 1.0) {
        for (std::size_t i = 0; i < size; ++i) weights[i] = pher.tau[i] * eta_pow[i];
    } else {
        for (std::size_t i = 0; i < size; ++i) {
            weights[i] = checked_pow(pher.tau[i], alpha) * eta_pow[i];
        }
    }
    return weights;
}

std::vector<double> build_eta_pow(const HeuristicField& heur, double beta) {
    std::vector<double> eta_pow(heur.eta.size());
    for (std::size_t i = 0; i < eta_pow.size(); ++i) {
        eta_pow[i] = checked_pow(heur.eta[i], beta);
    }
    return eta_pow;
}

void deposit_on_edges(PheromoneField& pher, const Tour& tour, double amount) {
    const std::size_t n = pher.n;
    int prev = tour.order.back();
    for (int city : tour.order) {
        const std::size_t a = static_cast<std::size_t>(prev);
        const std::size_t b = static_cast<std::size_t>(city);
        double value = pher.tau[a * n + b] + amount;
        if (pher.bounded) value = std::clamp(value, pher.tau_min, pher.tau_max);
        pher.tau[a * n + b] = value;
        pher.tau[b * n + a] = value;
        prev = city;
    }
}

} // namespace

void validate(const ColonyConfig& cfg) {
    if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    if (!(cfg.beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (!(cfg.rho >= 0.0 && cfg.rho <= 1.0)) throw std::invalid_argument("rho must be in [0,1]");
    if (cfg.m < 1) throw std::invalid_argument("colony size m must be at least 1");
    if (cfg.max_iterations < 1) throw std::invalid_argument("iteration budget must be positive");
    if (!(cfg.q_deposit > 0.0)) throw std::invalid_argument("q_deposit must be positive");
    if (cfg.candidate_list_size < 0) {
        throw std::invalid_argument("candidate_list_size must be nonnegative");
    }
    if (cfg.tau_init < 0.0) throw std::invalid_argument("tau_init must be nonnegative");
}

PheromoneField make_pheromone_field(std::size_t n, double tau_init, double tau_min,
                                    double tau_max, bool bounded) {
    if (!(tau_min >= 0.0 && tau_min <= tau_max)) {
        throw std::invalid_argument("pheromone bounds require 0 <= tau_min <= tau_max");
    }
    PheromoneField field;
    field.n = n;
    field.tau.assign(n * n, bounded ? std::clamp(tau_init, tau_min, tau_max) : tau_init);
    field.tau_min = tau_min;
    field.tau_max = tau_max;
    field.bounded = bounded;
    return field;
}

HeuristicField inverse_distance_heuristic(const TspInstance& instance) {
    HeuristicField heur;
    heur.n = instance.n;
    heur.eta.resize(instance.n * instance.n);
    for (std::size_t i = 0; i < heur.eta.size(); ++i) {
        heur.eta[i] = 1.0 / std::max(instance.dist[i], kDistanceFloor);
    }
    return heur;
}

std::vector<double> transition_probabilities(int city, std::span<const int> allowed,
                                             const PheromoneField& pher,
                                             const HeuristicField& heur, double alpha,
                                             double beta) {
    if (allowed.empty()) {
        throw std::logic_error("transition_probabilities: empty allowed set");
    }
    const std::size_t i = static_cast<std::size_t>(city);
    std::vector<double> probs(allowed.size());
    double total = 0.0;
    for (std::size_t k = 0; k < allowed.size(); ++k) {
        const std::size_t j = static_cast<std::size_t>(allowed[k]);
        probs[k] = checked_pow(pher.get(i, j), alpha) * checked_pow(heur.get(i, j), beta);
        total += probs[k];
    }
    if (!(total > 0.0)) {
        std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(allowed.size()));
        return probs;
    }
    for (double& p : probs) p /= total;
    return probs;
}

Tour construct_tour(const TspInstance& instance, const PheromoneField& pher,
                    const HeuristicField& heur, const ColonyConfig& cfg, SeededRng& rng) {
    if (pher.n != instance.n || heur.n != instance.n) {
        throw std::invalid_argument("field dimensions do not match instance");
    }
    const auto eta_pow = build_eta_pow(heur, cfg.beta);
    const auto weights = build_weights(pher, eta_pow, cfg.alpha);
    std::optional<std::vector<std::vector<int>>> lists;
    if (cfg.candidate_list_size > 0) {
        lists = nearest_neighbor_lists(instance,
                                       static_cast<std::size_t>(cfg.candidate_list_size));
    }
    TourBuilder builder(instance.n);
    return construct_tour_weighted(instance, weights, lists ? &*lists : nullptr, rng, builder);
}

void evaporate(PheromoneField& pher, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must be in [0,1]");
    const double keep = 1.0 - rho;
    if (pher.bounded) {
        for (double& v : pher.tau) v = std::clamp(v * keep, pher.tau_min, pher.tau_max);
    } else {
        for (double& v : pher.tau) v *= keep;
    }
}

void deposit(PheromoneField& pher, const Tour& iteration_best, const Tour& global_best,
             double q_deposit, std::int64_t t) {
    deposit_on_edges(pher, iteration_best, q_deposit / iteration_best.cost);
    if (t % kGlobalBestPeriod == 0 && !global_best.order.empty()) {
        deposit_on_edges(pher, global_best, q_deposit / global_best.cost);
    }
}

RunRecord run_dco(const TspInstance& instance, const ColonyConfig& cfg,
                  const std::optional<DcoController>& controller, SeededRng& rng,
                  const DcoOptions& options) {
    validate(cfg);
    if (controller) {
        validate(controller->schedule);
        validate(controller->policy);
    }
    const auto start_time = std::chrono::steady_clock::now();
    const std::size_t n = instance.n;

    const HeuristicField heur = inverse_distance_heuristic(instance);
    const auto eta_pow = build_eta_pow(heur, cfg.beta);

    const Tour nn = nearest_neighbor_tour(instance, 0);
    const double rho_for_init = cfg.rho > 0.0 ? cfg.rho : 1.0;
    const double tau_init = cfg.tau_init > 0.0 ? cfg.tau_init : 1.0 / (rho_for_init * nn.cost);
    const double tau_max = tau_init;
    const double tau_min = tau_max / (2.0 * static_cast<double>(n));
    PheromoneField pher = make_pheromone_field(n, tau_init, tau_min, tau_max);

    std::optional<std::vector<std::vector<int>>> own_lists;
    const std::vector<std::vector<int>>* cand = nullptr;
    if (options.candidate_lists) {
        cand = &*options.candidate_lists;
    } else if (cfg.candidate_list_size > 0) {
        own_lists = nearest_neighbor_lists(instance,
                                           static_cast<std::size_t>(cfg.candidate_list_size));
        cand = &*own_lists;
    }

    // Substream stride: the largest colony any iteration can spawn.
    const std::int64_t stride =
        controller ? std::max(controller->policy.m_max, cfg.m) : cfg.m;

    const EfficiencySchedule original_schedule =
        controller ? controller->schedule : EfficiencySchedule{};
    EfficiencySchedule schedule = original_schedule;
    std::int64_t last_reset = 0;

    RunRecord record;
    record.best_cost_per_iteration.reserve(static_cast<std::size_t>(cfg.max_iterations));
    Tour global_best;
    global_best.cost = std::numeric_limits<double>::max();

    const unsigned threads = std::max(1u, options.threads);
    std::vector<Tour> tours;
    std::vector<TourBuilder> builders;
    for (unsigned w = 0; w < threads; ++w) builders.emplace_back(n);

    for (std::int64_t t = 1; t <= cfg.max_iterations; ++t) {
        ColonyConfig live = cfg;
        if (controller) {
            const double e = efficiency(schedule, static_cast<double>(t));
            live = recalibrate(cfg, controller->policy, e);
        }

        const auto weights = build_weights(pher, eta_pow, cfg.alpha);
        const std::size_t ants = static_cast<std::size_t>(live.m);
        tours.resize(ants);
        parallel_for(ants, threads, [&](std::size_t ant) {
            SeededRng ant_rng = derive_rng(
                rng, static_cast<std::uint64_t>((t - 1) * stride + static_cast<std::int64_t>(ant)));
            // One scratch builder per worker slot; workers process disjoint strides.
            TourBuilder& builder = builders[ant % threads];
            tours[ant] = construct_tour_weighted(instance, weights, cand, ant_rng, builder);
        });
        record.evaluations += static_cast<std::int64_t>(ants);

        const auto best_it = std::min_element(
            tours.begin(), tours.end(),
            [](const Tour& a, const Tour& b) { return a.cost < b.cost; });
        const Tour& iteration_best = *best_it;
        if (iteration_best.cost < global_best.cost) global_best = iteration_best;

        evaporate(pher, live.rho);
        deposit(pher, iteration_best, global_best, cfg.q_deposit, t);
        pher.t = t;

#ifndef NDEBUG
        for (double v : pher.tau) {
            assert(v >= pher.tau_min - 1e-15 && v <= pher.tau_max + 1e-15);
        }
#endif

        record.best_cost_per_iteration.push_back(global_best.cost);

        if (controller && controller->policy.reset_on_stagnation &&
            t - last_reset >= controller->policy.stagnation_window &&
            detect_stagnation(record.best_cost_per_iteration,
                              controller->policy.stagnation_window,
                              controller->policy.stagnation_epsilon)) {
            schedule = reset_inflection(original_schedule, static_cast<double>(t),
                                        controller->policy);
            last_reset = t;
        }
    }

    record.best_tour = std::move(global_best);
    record.iterations_run = cfg.max_iterations;
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return record;
}

} // namespace dcode

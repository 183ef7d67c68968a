#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dcode/colony_config.hpp"
#include "dcode/efficiency.hpp"
#include "dcode/rng.hpp"
#include "dcode/tsp.hpp"

namespace dcode {

/**
 * Edge pheromone matrix tau with clamp bounds and the iteration counter. Kept
 * symmetric for symmetric instances (all writes mirror).
 */
struct PheromoneField {
    std::size_t n = 0;
    std::vector<double> tau;  // n*n
    double tau_min = 0.0;
    double tau_max = 1.0;
    bool bounded = true;
    std::int64_t t = 0;

    double get(std::size_t i, std::size_t j) const { return tau[i * n + j]; }
};

PheromoneField make_pheromone_field(std::size_t n, double tau_init, double tau_min,
                                    double tau_max, bool bounded = true);

/// Static greedy signal eta. For TSP eta_ij = 1/d_ij, with distances floored
/// at 1e-6 so coincident cities stay finite.
struct HeuristicField {
    std::size_t n = 0;
    std::vector<double> eta;

    double get(std::size_t i, std::size_t j) const { return eta[i * n + j]; }
};

HeuristicField inverse_distance_heuristic(const TspInstance& instance);

/// One solver run: best-so-far trajectory (non-increasing), the best solution,
/// and exact evaluation counts. Feeds every metric downstream.
struct RunRecord {
    std::vector<double> best_cost_per_iteration;
    Tour best_tour;                  // TSP runs
    std::vector<double> best_point;  // continuous runs
    std::int64_t evaluations = 0;
    double wall_seconds = 0.0;
    int iterations_run = 0;

    double best_cost() const { return best_cost_per_iteration.back(); }
};

/**
 * Transition rule: P_ij = tau_ij^alpha eta_ij^beta / sum over allowed.
 * Returns one probability per entry of `allowed`, summing to 1. If every
 * numerator is zero the distribution falls back to uniform. Empty `allowed`
 * signals a construction bug and throws.
 */
std::vector<double> transition_probabilities(int city, std::span<const int> allowed,
                                             const PheromoneField& pher,
                                             const HeuristicField& heur, double alpha,
                                             double beta);

/**
 * Builds one tour: uniform random start, then repeated roulette sampling of
 * the transition rule over unvisited cities. When candidate lists are active
 * the unvisited set is intersected with the current city's list, falling back
 * to the full unvisited set when the intersection is empty.
 */
Tour construct_tour(const TspInstance& instance, const PheromoneField& pher,
                    const HeuristicField& heur, const ColonyConfig& cfg, SeededRng& rng);

// tau <- (1 - rho) tau, then clamp.
void evaporate(PheromoneField& pher, double rho);

// Adds q/cost along the iteration-best tour; every 5th iteration the global
// best is reinforced the same way. Clamps to [tau_min, tau_max].
void deposit(PheromoneField& pher, const Tour& iteration_best, const Tour& global_best,
             double q_deposit, std::int64_t t);

/// Optional dynamic-efficiency controller for run_dco.
struct DcoController {
    EfficiencySchedule schedule;
    CouplingPolicy policy;
};

struct DcoOptions {
    unsigned threads = 1;
    // Externally supplied per-city candidate sets (e.g. from clustering);
    // overrides cfg.candidate_list_size when set.
    std::optional<std::vector<std::vector<int>>> candidate_lists;
};

/**
 * The full colony loop: per iteration {recalibrate (controller only) -> m tour
 * constructions -> evaporate -> deposit}. Without a controller this is the
 * classic fixed-parameter colony. Ant i of iteration t draws from substream
 * t*stride + i, so the record is identical for any thread count.
 */
RunRecord run_dco(const TspInstance& instance, const ColonyConfig& cfg,
                  const std::optional<DcoController>& controller, SeededRng& rng,
                  const DcoOptions& options = {});

} // namespace dcode

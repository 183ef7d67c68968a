#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "dcode/colony.hpp"
#include "dcode/continuous.hpp"
#include "dcode/efficiency.hpp"
#include "dcode/rng.hpp"
#include "dcode/tsp.hpp"

namespace dcode {

enum class BaselineAlgorithm { aco_classic, ga_tsp, tgd, dgd, es, pso, de_rand1bin };

// Throws listing the valid names on an unknown one.
BaselineAlgorithm baseline_from_name(const std::string& name);
std::string baseline_name(BaselineAlgorithm algorithm);

/**
 * One comparison arm. `population` is ants for aco_classic, individuals for
 * ga_tsp/es/pso/de_rand1bin, and ignored (forced to 1) for tgd/dgd.
 * Algorithm-specific knobs live in `params`; unknown keys are rejected.
 *
 * Recognized params per algorithm:
 *   aco_classic  alpha, beta, rho, q_deposit, candidate_list_size, tau_init
 *   ga_tsp       crossover_rate, mutation_rate, tournament, elitism
 *   tgd          step, x0
 *   dgd          step, x0, boost, t0, k
 *   es           mu, sigma0_frac
 *   pso          inertia, cognitive, social, vmax_frac
 *   de_rand1bin  F, CR
 */
struct BaselineConfig {
    BaselineAlgorithm algorithm = BaselineAlgorithm::aco_classic;
    int population = 20;
    int max_iterations = 100;
    std::map<std::string, double> params;
};

void validate(const BaselineConfig& cfg);

// TSP algorithms: aco_classic, ga_tsp. Throws on a continuous-only algorithm.
RunRecord run_baseline(const BaselineConfig& cfg, const TspInstance& instance, SeededRng& rng,
                       unsigned threads = 1);

// Continuous algorithms: tgd, dgd, es, pso, de_rand1bin. Throws on a TSP-only one.
RunRecord run_baseline(const BaselineConfig& cfg, const ContinuousProblem& problem,
                       SeededRng& rng);

// Gradient descent with sigmoid-boosted step eta(t) = base_step (1 + E(t)(boost-1))
// and a halving guard on non-descent steps. Starts at x0 broadcast to every
// coordinate when given, else at a seeded uniform point in the box.
RunRecord run_dgd(const ContinuousProblem& problem, const EfficiencySchedule& sched,
                  double base_step, int max_iterations, SeededRng& rng, double boost = 3.0,
                  std::optional<double> x0 = std::nullopt);

// 1-based index of the first trajectory entry at or below the convergence
// threshold: target + tolerance, or 1e-6 absolute when target is 0.
// nullopt = did not converge.
std::optional<std::int64_t> iterations_to_converge(const RunRecord& record, double target,
                                                   double tolerance);

} // namespace dcode

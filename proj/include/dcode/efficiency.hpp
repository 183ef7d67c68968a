#pragma once

#include <span>

#include "dcode/colony_config.hpp"

namespace dcode {

/// Sigmoid efficiency curve E(t) = 1 / (1 + exp(-k (t - t0))). k is the rate
/// of change, t0 the inflection point; t is measured in solver iterations.
struct EfficiencySchedule {
    double k = 0.02;
    double t0 = 0.0;
};

// Throws if k <= 0.
void validate(const EfficiencySchedule& sched);

// E(t), clamped to [1e-12, 1 - 1e-12] at floating-point saturation.
double efficiency(const EfficiencySchedule& sched, double t);

// Exploration-for-a-third default: t0 = max_iterations/3, k = 10/max_iterations.
EfficiencySchedule default_schedule(int max_iterations);

/**
 * Maps E(t) onto live solver parameters. Early (E near 0) the colony runs hot:
 * maximum evaporation and the largest colony. As E saturates the run tapers
 * into low evaporation and a small colony.
 */
struct CouplingPolicy {
    double rho_min = 0.02;
    double rho_max = 0.25;
    int m_min = 10;
    int m_max = 50;
    int stagnation_window = 50;
    double stagnation_epsilon = 1e-4;
    bool reset_on_stagnation = true;
};

void validate(const CouplingPolicy& policy);

// rho_eff = rho_max - E (rho_max - rho_min); m_eff = round(m_max - E (m_max - m_min)).
// Everything else is copied through unchanged.
ColonyConfig recalibrate(const ColonyConfig& cfg, const CouplingPolicy& policy, double e);

// True iff the relative improvement of best cost across the last `window`
// trajectory entries is below eps. Shorter trajectories are never stagnant.
bool detect_stagnation(std::span<const double> best_costs, int window, double eps);

// Shifts the sigmoid so exploration reopens: t0' = t_now + original.t0.
// `original` must be the pristine schedule, which makes the reset idempotent.
EfficiencySchedule reset_inflection(const EfficiencySchedule& original, double t_now,
                                    const CouplingPolicy& policy);

} // namespace dcode

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dcode/efficiency.hpp"
#include "dcode/rng.hpp"

namespace dcode {

/// Discrete-time demand traces for n_tasks over a horizon, plus the total
/// capacity available per timestep.
struct Scenario {
    std::string name;
    std::int64_t horizon = 0;
    std::size_t n_tasks = 0;
    std::vector<double> demand;   // horizon x n_tasks, row-major
    std::vector<double> capacity; // per timestep

    double demand_at(std::int64_t t, std::size_t task) const {
        return demand[static_cast<std::size_t>(t) * n_tasks + task];
    }
};

/**
 * Generator constants. Per-task base demand is heterogeneous (spread factors
 * 0.2..1.8 around base_demand) so that a fixed equal split wastes capacity.
 *   high_demand  seasonal sinusoid from 1x up to peak_factor x base
 *   emergency    flat demand, each task spiking to spike_factor x base for
 *                ceil(0.1 horizon) steps at a seeded random onset
 *   scalability  linear ramp from 1x to ramp_factor x base
 * Capacity is flat: capacity_factor x mean total demand of the realized trace.
 */
struct ScenarioParams {
    double base_demand = 10.0;
    double peak_factor = 1.8;
    double spike_factor = 3.0;
    double ramp_factor = 2.5;
    double capacity_factor = 1.0;
    double noise = 0.05; // multiplicative uniform jitter, +-noise
};

Scenario generate_scenario(const std::string& kind, std::int64_t horizon, std::size_t n_tasks,
                           SeededRng& rng, const ScenarioParams& params = {});

enum class PolicyKind { fixed_static, de_adaptive };

/**
 * fixed_static allocates static_share of capacity to each task forever.
 * de_adaptive starts from static_share and, every review_period steps,
 * re-splits capacity proportionally to the forecast
 *   E(t) * recent_mean + (1 - E(t)) * long_run_mean
 * per task, so responsiveness itself follows the sigmoid schedule.
 */
struct AllocationPolicy {
    PolicyKind kind = PolicyKind::fixed_static;
    std::vector<double> static_share;
    EfficiencySchedule schedule;
    std::int64_t review_period = 10;
};

AllocationPolicy equal_static_policy(std::size_t n_tasks);
AllocationPolicy adaptive_policy(std::size_t n_tasks, const EfficiencySchedule& schedule,
                                 std::int64_t review_period = 10);

void validate(const AllocationPolicy& policy, std::size_t n_tasks);

struct UtilizationTrace {
    std::vector<double> utilization; // per timestep, in [0,1]
    std::vector<double> allocation;  // horizon x n_tasks, row-major
    double mean_percent = 0.0;
};

UtilizationTrace simulate(const Scenario& scenario, const AllocationPolicy& policy);

// 100 (after - before) / before; before must be positive.
double optimization_gain(double before, double after);

// CSV: timestep, demand per task, allocation per task, utilization.
void write_trace_csv(const std::filesystem::path& path, const Scenario& scenario,
                     const UtilizationTrace& trace);

} // namespace dcode

#pragma once

#include <cstdint>

namespace dcode {

/// Parameters of one colony run. alpha/beta weight pheromone vs heuristic in
/// the transition rule; rho is the evaporation fraction per iteration.
struct ColonyConfig {
    double alpha = 1.0;
    double beta = 2.0;
    double rho = 0.1;
    int m = 20;                   // ants per iteration
    double q_deposit = 1.0;
    int max_iterations = 500;
    int candidate_list_size = 0;  // 0 = full neighbor lists
    double tau_init = 0.0;        // 0 = auto: 1/(rho * nearest_neighbor_cost)
};

// Throws std::invalid_argument on out-of-range fields.
void validate(const ColonyConfig& cfg);

} // namespace dcode

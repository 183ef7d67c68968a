#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dcode {

/**
 * Symmetric TSP instance. The distance matrix is stored densely (row-major),
 * either read from an EXPLICIT section or derived from planar coordinates with
 * the TSPLIB EUC_2D convention (Euclidean rounded to nearest integer), so
 * costs are comparable with published best-known tour lengths.
 *
 * Immutable after construction.
 */
struct TspInstance {
    std::string name;
    std::size_t n = 0;
    std::vector<double> xs, ys;  // empty for explicit-matrix instances
    std::vector<double> dist;    // n*n, symmetric, zero diagonal
    std::optional<double> best_known;

    double distance(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
    bool has_coords() const { return !xs.empty(); }
};

struct Tour {
    std::vector<int> order;  // permutation of 0..n-1
    double cost = 0.0;
};

// Builds an instance from planar coordinates, EUC_2D rounding.
TspInstance make_euclidean_instance(std::string name, std::vector<double> xs,
                                    std::vector<double> ys);

// Builds an instance from an explicit distance matrix; validates symmetry,
// zero diagonal and nonnegativity.
TspInstance make_matrix_instance(std::string name, std::size_t n, std::vector<double> matrix);

// Uniform random points in [0, side)^2, EUC_2D rounding. Used for scaling runs.
TspInstance make_random_euclidean_instance(std::string name, std::size_t n, double side,
                                           class SeededRng& rng);

/**
 * Loads a TSPLIB-format file. Supported: TYPE TSP with EDGE_WEIGHT_TYPE EUC_2D,
 * or EXPLICIT with EDGE_WEIGHT_FORMAT FULL_MATRIX. Parse failures throw
 * TsplibParseError carrying the offending line number.
 */
TspInstance load_tsplib(const std::string& path);

// Same, then fills best_known when the instance name appears in the CSV
// (one "name,cost" row per instance).
TspInstance load_tsplib(const std::string& path, const std::string& best_known_csv);

std::unordered_map<std::string, double> load_best_known(const std::string& csv_path);

struct TsplibParseError : std::runtime_error {
    TsplibParseError(const std::string& msg, int line);
    int line_number;
};

// Cycle length including the closing edge. Throws if order is not a
// permutation of 0..n-1.
double tour_cost(const TspInstance& instance, std::span<const int> order);

// Greedy construction; deterministic given the start city.
Tour nearest_neighbor_tour(const TspInstance& instance, int start);

// Per-city lists of the k nearest other cities, ascending by distance.
std::vector<std::vector<int>> nearest_neighbor_lists(const TspInstance& instance, std::size_t k);

} // namespace dcode

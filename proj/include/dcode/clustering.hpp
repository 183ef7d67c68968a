#pragma once

#include <cstddef>
#include <vector>

#include "dcode/rng.hpp"
#include "dcode/tsp.hpp"

namespace dcode {

// Lloyd clustering over feature vectors plus the weighted per-point estimate
// used to focus search inside clusters.
struct ClusterModel {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<double> centroids;     // k * dim, row-major
    std::vector<int> assignment;       // point -> cluster
    std::vector<double> points;        // n * dim copy kept for estimates
    std::vector<double> weights;       // per-feature, nonnegative
    std::vector<double> inertia_trace; // inertia after each assignment pass
    double inertia = 0.0;

    std::size_t n_points() const { return assignment.size(); }
};

// Seeded Lloyd iteration; empty clusters are re-seeded at the point farthest
// from its own centroid. Terminates at max_iter or an assignment fixpoint.
ClusterModel build_clusters(const std::vector<double>& points, std::size_t dim, std::size_t k,
                            std::int64_t max_iter, SeededRng& rng);

// Weighted feature sum for point j, which must belong to cluster i.
double cme_estimate(const ClusterModel& model, std::size_t cluster_i, std::size_t point_j);

// Per-city allowed sets: all same-cluster cities plus the single nearest city
// in every other cluster, so the restriction graph stays connected.
std::vector<std::vector<int>> cluster_candidate_lists(const TspInstance& instance,
                                                      const ClusterModel& model);

} // namespace dcode

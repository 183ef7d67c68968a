#include "dcode/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dcode {

namespace {

double sq_dist(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

// Nearest centroid, ties to the lowest cluster index.
int nearest_centroid(const double* p, const std::vector<double>& centroids, std::size_t k,
                     std::size_t dim) {
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_dist(p, centroids.data() + c * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

double total_inertia(const std::vector<double>& points, const std::vector<int>& assignment,
                     const std::vector<double>& centroids, std::size_t dim) {
    double s = 0.0;
    for (std::size_t j = 0; j < assignment.size(); ++j) {
        s += sq_dist(points.data() + j * dim,
                     centroids.data() + static_cast<std::size_t>(assignment[j]) * dim, dim);
    }
    return s;
}

} // namespace

ClusterModel build_clusters(const std::vector<double>& points, std::size_t dim, std::size_t k,
                            std::int64_t max_iter, SeededRng& rng) {
    if (dim == 0) throw std::invalid_argument("build_clusters: dim must be positive");
    if (points.size() % dim != 0) {
        throw std::invalid_argument("build_clusters: point buffer not a multiple of dim");
    }
    const std::size_t n = points.size() / dim;
    if (k < 1 || k > n) throw std::invalid_argument("build_clusters: need 1 <= k <= n_points");
    if (max_iter < 1) throw std::invalid_argument("build_clusters: max_iter must be positive");

    ClusterModel model;
    model.k = k;
    model.dim = dim;
    model.points = points;
    model.weights.assign(dim, 1.0);
    model.assignment.assign(n, -1);
    model.centroids.resize(k * dim);

    // Seed centroids at k distinct points (partial Fisher-Yates).
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_index(n - i));
        std::swap(idx[i], idx[j]);
        std::copy_n(points.data() + idx[i] * dim, dim, model.centroids.data() + i * dim);
    }

    std::vector<std::int64_t> counts(k);
    for (std::int64_t it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (std::size_t j = 0; j < n; ++j) {
            const int c = nearest_centroid(points.data() + j * dim, model.centroids, k, dim);
            if (c != model.assignment[j]) {
                model.assignment[j] = c;
                changed = true;
            }
        }
        model.inertia_trace.push_back(total_inertia(points, model.assignment, model.centroids, dim));
        if (!changed) break;

        std::fill(model.centroids.begin(), model.centroids.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = static_cast<std::size_t>(model.assignment[j]);
            ++counts[c];
            for (std::size_t d = 0; d < dim; ++d) model.centroids[c * dim + d] += points[j * dim + d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t d = 0; d < dim; ++d) {
                    model.centroids[c * dim + d] /= static_cast<double>(counts[c]);
                }
            }
        }
        // Re-seed each empty cluster at the point farthest from its centroid.
        std::vector<char> taken(n, 0);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (taken[j]) continue;
                const auto a = static_cast<std::size_t>(model.assignment[j]);
                if (counts[a] <= 1) continue; // would empty the donor
                const double d = sq_dist(points.data() + j * dim,
                                         model.centroids.data() + a * dim, dim);
                if (d > far_d) {
                    far_d = d;
                    far = j;
                }
            }
            if (far_d < 0.0) continue;
            taken[far] = 1;
            --counts[static_cast<std::size_t>(model.assignment[far])];
            counts[c] = 1;
            model.assignment[far] = static_cast<int>(c);
            std::copy_n(points.data() + far * dim, dim, model.centroids.data() + c * dim);
        }
    }

    model.inertia = total_inertia(points, model.assignment, model.centroids, dim);
    return model;
}

double cme_estimate(const ClusterModel& model, std::size_t cluster_i, std::size_t point_j) {
    if (point_j >= model.n_points()) throw std::invalid_argument("cme_estimate: point out of range");
    if (cluster_i >= model.k) throw std::invalid_argument("cme_estimate: cluster out of range");
    if (model.assignment[point_j] != static_cast<int>(cluster_i)) {
        throw std::invalid_argument("cme_estimate: point not assigned to this cluster");
    }
    if (model.weights.size() != model.dim) {
        throw std::invalid_argument("cme_estimate: weight count must equal feature count");
    }
    double s = 0.0;
    for (std::size_t d = 0; d < model.dim; ++d) {
        const double w = model.weights[d];
        if (w < 0.0) throw std::invalid_argument("cme_estimate: weights must be nonnegative");
        s += w * model.points[point_j * model.dim + d];
    }
    return s;
}

std::vector<std::vector<int>> cluster_candidate_lists(const TspInstance& instance,
                                                      const ClusterModel& model) {
    const std::size_t n = instance.n;
    if (model.n_points() != n) {
        throw std::invalid_argument("cluster_candidate_lists: model size does not match instance");
    }
    std::vector<std::vector<int>> members(model.k);
    for (std::size_t j = 0; j < n; ++j) {
        members[static_cast<std::size_t>(model.assignment[j])].push_back(static_cast<int>(j));
    }

    std::vector<std::vector<int>> lists(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(model.assignment[i]);
        auto& list = lists[i];
        for (int j : members[own]) {
            if (static_cast<std::size_t>(j) != i) list.push_back(j);
        }
        for (std::size_t c = 0; c < model.k; ++c) {
            if (c == own || members[c].empty()) continue;
            int bridge = members[c].front();
            double best = instance.dist[i * n + static_cast<std::size_t>(bridge)];
            for (int j : members[c]) {
                const double d = instance.dist[i * n + static_cast<std::size_t>(j)];
                if (d < best) {
                    best = d;
                    bridge = j;
                }
            }
            list.push_back(bridge);
        }
        std::sort(list.begin(), list.end());
    }
    return lists;
}

} // namespace dcode

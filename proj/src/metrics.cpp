#include "dcode/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dcode {

double solution_quality(double found_cost, double optimal_cost) {
    if (!(optimal_cost > 0.0)) {
        throw std::invalid_argument("solution_quality: optimal cost must be positive");
    }
    if (found_cost < optimal_cost) {
        throw std::invalid_argument(
            "solution_quality: found cost beats the optimum, best-known fixture is wrong");
    }
    return 100.0 * optimal_cost / found_cost;
}

std::optional<std::int64_t> convergence_rate(const RunRecord& record, std::int64_t window,
                                             double eps) {
    if (window < 1) throw std::invalid_argument("convergence_rate: window must be >= 1");
    const auto& costs = record.best_cost_per_iteration;
    const auto len = static_cast<std::int64_t>(costs.size());

    // Relative improvement of step j (1-based), i.e. from entry j-1 to entry j.
    const auto improvement = [&](std::int64_t j) {
        const double before = costs[static_cast<std::size_t>(j - 2)];
        const double now = costs[static_cast<std::size_t>(j - 1)];
        if (before <= 0.0) return now < before ? 1.0 : 0.0;
        return (before - now) / before;
    };

    for (std::int64_t i = 1; i + window <= len; ++i) {
        bool stable = true;
        for (std::int64_t j = i + 1; j <= i + window; ++j) {
            if (improvement(j) >= eps) {
                stable = false;
                break;
            }
        }
        if (stable) return i;
    }
    return std::nullopt;
}

Efficiency computational_efficiency(const RunRecord& record) {
    if (!(record.wall_seconds > 0.0)) {
        throw std::invalid_argument("computational_efficiency: wall time must be positive");
    }
    return {record.wall_seconds,
            static_cast<double>(record.evaluations) / record.wall_seconds};
}

double relative_improvement(double candidate, double baseline) {
    if (!(baseline > 0.0)) {
        throw std::invalid_argument("relative_improvement: baseline must be positive");
    }
    return 100.0 * (candidate - baseline) / baseline;
}

double round1(double value) { return std::round(value * 10.0) / 10.0; }

Aggregate aggregate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("aggregate: no values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();

    Aggregate a;
    a.min = sorted.front();
    a.max = sorted.back();
    a.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    double sum = 0.0;
    for (double v : sorted) sum += v;
    a.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : sorted) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return a;
}

} // namespace dcode

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "dcode/colony.hpp"

namespace dcode {

// SQ = 100 optimal / found, for minimization. Throws when found < optimal
// (a wrong best-known fixture) or optimal <= 0.
double solution_quality(double found_cost, double optimal_cost);

// First iteration i (1-based) after which the per-step relative improvement
// stays below eps for `window` consecutive iterations; nullopt when the
// trajectory never stabilizes for a full window.
std::optional<std::int64_t> convergence_rate(const RunRecord& record, std::int64_t window,
                                             double eps);

struct Efficiency {
    double wall_seconds = 0.0;
    double evals_per_second = 0.0;
};

Efficiency computational_efficiency(const RunRecord& record);

// 100 (candidate - baseline) / baseline.
double relative_improvement(double candidate, double baseline);

// One-decimal rounding used by report tables.
double round1(double value);

struct Aggregate {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // sample standard deviation
    double min = 0.0;
    double max = 0.0;
};

Aggregate aggregate(std::span<const double> values);

} // namespace dcode

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dcode {

enum class Objective { sphere, rosenbrock, rastrigin };

Objective objective_from_name(const std::string& name);
std::string objective_name(Objective obj);

/**
 * Box-bounded continuous minimization benchmark with an analytic gradient and
 * a known global minimum. Immutable after construction.
 */
struct ContinuousProblem {
    Objective objective = Objective::sphere;
    std::size_t dim = 1;
    std::vector<double> lower, upper;
    std::vector<double> minimum_point;
    double minimum_value = 0.0;

    double eval(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;
};

// Standard domains: sphere/rastrigin [-5.12, 5.12]^d, rosenbrock [-2.048, 2.048]^d.
ContinuousProblem make_benchmark(Objective obj, std::size_t dim);

} // namespace dcode

#include "dcode/continuous.hpp"

#include <cmath>
#include <stdexcept>

namespace dcode {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Objective objective_from_name(const std::string& name) {
    if (name == "sphere") return Objective::sphere;
    if (name == "rosenbrock") return Objective::rosenbrock;
    if (name == "rastrigin") return Objective::rastrigin;
    throw std::invalid_argument("unknown objective '" + name +
                                "' (expected sphere, rosenbrock or rastrigin)");
}

std::string objective_name(Objective obj) {
    switch (obj) {
        case Objective::sphere: return "sphere";
        case Objective::rosenbrock: return "rosenbrock";
        case Objective::rastrigin: return "rastrigin";
    }
    return "?";
}

double ContinuousProblem::eval(std::span<const double> x) const {
    if (x.size() != dim) throw std::invalid_argument("point dimension mismatch");
    switch (objective) {
        case Objective::sphere: {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s;
        }
        case Objective::rosenbrock: {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < dim; ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                const double b = 1.0 - x[i];
                s += 100.0 * a * a + b * b;
            }
            return s;
        }
        case Objective::rastrigin: {
            double s = 10.0 * static_cast<double>(dim);
            for (double v : x) s += v * v - 10.0 * std::cos(kTwoPi * v);
            return s;
        }
    }
    return 0.0;
}

std::vector<double> ContinuousProblem::gradient(std::span<const double> x) const {
    if (x.size() != dim) throw std::invalid_argument("point dimension mismatch");
    std::vector<double> g(dim, 0.0);
    switch (objective) {
        case Objective::sphere:
            for (std::size_t i = 0; i < dim; ++i) g[i] = 2.0 * x[i];
            break;
        case Objective::rosenbrock:
            for (std::size_t i = 0; i + 1 < dim; ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
                g[i + 1] += 200.0 * a;
            }
            break;
        case Objective::rastrigin:
            for (std::size_t i = 0; i < dim; ++i) {
                g[i] = 2.0 * x[i] + 10.0 * kTwoPi * std::sin(kTwoPi * x[i]);
            }
            break;
    }
    return g;
}

ContinuousProblem make_benchmark(Objective obj, std::size_t dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
    ContinuousProblem p;
    p.objective = obj;
    p.dim = dim;
    const double half = (obj == Objective::rosenbrock) ? 2.048 : 5.12;
    p.lower.assign(dim, -half);
    p.upper.assign(dim, half);
    p.minimum_point.assign(dim, obj == Objective::rosenbrock ? 1.0 : 0.0);
    p.minimum_value = 0.0;
    return p;
}

} // namespace dcode

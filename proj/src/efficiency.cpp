#include "dcode/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcode {

void validate(const EfficiencySchedule& sched) {
    if (!(sched.k > 0.0)) {
        throw std::invalid_argument("efficiency schedule requires k > 0");
    }
}

double efficiency(const EfficiencySchedule& sched, double t) {
    const double e = 1.0 / (1.0 + std::exp(-sched.k * (t - sched.t0)));
    return std::clamp(e, 1e-12, 1.0 - 1e-12);
}

EfficiencySchedule default_schedule(int max_iterations) {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
    EfficiencySchedule sched;
    sched.t0 = static_cast<double>(max_iterations) / 3.0;
    sched.k = 10.0 / static_cast<double>(max_iterations);
    return sched;
}

void validate(const CouplingPolicy& policy) {
    if (!(policy.rho_min >= 0.0 && policy.rho_min <= policy.rho_max && policy.rho_max <= 1.0)) {
        throw std::invalid_argument("coupling policy requires 0 <= rho_min <= rho_max <= 1");
    }
    if (!(policy.m_min >= 1 && policy.m_min <= policy.m_max)) {
        throw std::invalid_argument("coupling policy requires 1 <= m_min <= m_max");
    }
    if (policy.stagnation_window < 1) {
        throw std::invalid_argument("stagnation window must be at least 1");
    }
    if (!(policy.stagnation_epsilon >= 0.0)) {
        throw std::invalid_argument("stagnation epsilon must be nonnegative");
    }
}

ColonyConfig recalibrate(const ColonyConfig& cfg, const CouplingPolicy& policy, double e) {
    if (!(e > 0.0 && e < 1.0)) {
        throw std::invalid_argument("recalibrate expects 0 < E < 1");
    }
    ColonyConfig out = cfg;
    out.rho = policy.rho_max - e * (policy.rho_max - policy.rho_min);
    out.m = static_cast<int>(
        std::llround(static_cast<double>(policy.m_max) -
                     e * static_cast<double>(policy.m_max - policy.m_min)));
    return out;
}

bool detect_stagnation(std::span<const double> best_costs, int window, double eps) {
    if (window < 1) throw std::invalid_argument("stagnation window must be at least 1");
    const std::size_t w = static_cast<std::size_t>(window);
    if (best_costs.size() < w) return false;
    const double before = best_costs[best_costs.size() - w];
    const double now = best_costs.back();
    if (before <= 0.0) return now >= before; // degenerate: no positive baseline to improve on
    const double improvement = (before - now) / before;
    return improvement < eps;
}

EfficiencySchedule reset_inflection(const EfficiencySchedule& original, double t_now,
                                    const CouplingPolicy& policy) {
    if (!policy.reset_on_stagnation) {
        throw std::logic_error("reset_inflection called with reset_on_stagnation disabled");
    }
    EfficiencySchedule out = original;
    out.t0 = t_now + original.t0;
    return out;
}

} // namespace dcode

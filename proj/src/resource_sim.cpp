#include "dcode/resource_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace dcode {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> task_bases(std::size_t n_tasks, double base_demand) {
    std::vector<double> bases(n_tasks);
    for (std::size_t i = 0; i < n_tasks; ++i) {
        const double spread =
            n_tasks == 1 ? 1.0
                         : 0.2 + 1.6 * static_cast<double>(i) / static_cast<double>(n_tasks - 1);
        bases[i] = base_demand * spread;
    }
    return bases;
}

} // namespace

Scenario generate_scenario(const std::string& kind, std::int64_t horizon, std::size_t n_tasks,
                           SeededRng& rng, const ScenarioParams& params) {
    if (horizon < 10) throw std::invalid_argument("generate_scenario: horizon must be >= 10");
    if (n_tasks < 2) throw std::invalid_argument("generate_scenario: need at least 2 tasks");
    if (kind != "high_demand" && kind != "emergency" && kind != "scalability") {
        throw std::invalid_argument("unknown scenario '" + kind +
                                    "', valid: high_demand, emergency, scalability");
    }

    SeededRng local = derive_rng(rng, 0);
    Scenario sc;
    sc.name = kind;
    sc.horizon = horizon;
    sc.n_tasks = n_tasks;
    sc.demand.resize(static_cast<std::size_t>(horizon) * n_tasks);
    const auto bases = task_bases(n_tasks, params.base_demand);

    // Emergency bursts: each task spikes once, at its own seeded onset.
    const auto spike_len = static_cast<std::int64_t>(
        std::ceil(0.1 * static_cast<double>(horizon)));
    std::vector<std::int64_t> onset(n_tasks, 0);
    if (kind == "emergency") {
        for (std::size_t i = 0; i < n_tasks; ++i) {
            onset[i] = static_cast<std::int64_t>(
                local.next_index(static_cast<std::uint64_t>(horizon - spike_len + 1)));
        }
    }

    for (std::int64_t t = 0; t < horizon; ++t) {
        const double phase = static_cast<double>(t) / static_cast<double>(horizon);
        for (std::size_t i = 0; i < n_tasks; ++i) {
            double factor = 1.0;
            if (kind == "high_demand") {
                const double wave = 0.5 + 0.5 * std::sin(2.0 * kPi * phase - kPi / 2.0);
                factor = 1.0 + (params.peak_factor - 1.0) * wave;
            } else if (kind == "emergency") {
                if (t >= onset[i] && t < onset[i] + spike_len) factor = params.spike_factor;
            } else { // scalability
                const double ramp = horizon == 1 ? 0.0
                                                 : static_cast<double>(t) /
                                                       static_cast<double>(horizon - 1);
                factor = 1.0 + (params.ramp_factor - 1.0) * ramp;
            }
            const double jitter =
                params.noise > 0.0 ? 1.0 + params.noise * (2.0 * local.next_double() - 1.0) : 1.0;
            sc.demand[static_cast<std::size_t>(t) * n_tasks + i] = bases[i] * factor * jitter;
        }
    }

    double total = std::accumulate(sc.demand.begin(), sc.demand.end(), 0.0);
    const double mean_total = total / static_cast<double>(horizon);
    sc.capacity.assign(static_cast<std::size_t>(horizon), params.capacity_factor * mean_total);
    return sc;
}

AllocationPolicy equal_static_policy(std::size_t n_tasks) {
    AllocationPolicy policy;
    policy.kind = PolicyKind::fixed_static;
    policy.static_share.assign(n_tasks, 1.0 / static_cast<double>(n_tasks));
    return policy;
}

AllocationPolicy adaptive_policy(std::size_t n_tasks, const EfficiencySchedule& schedule,
                                 std::int64_t review_period) {
    AllocationPolicy policy = equal_static_policy(n_tasks);
    policy.kind = PolicyKind::de_adaptive;
    policy.schedule = schedule;
    policy.review_period = review_period;
    return policy;
}

void validate(const AllocationPolicy& policy, std::size_t n_tasks) {
    if (policy.static_share.size() != n_tasks) {
        throw std::invalid_argument("policy: share count must equal task count");
    }
    double sum = 0.0;
    for (double s : policy.static_share) {
        if (s < 0.0) throw std::invalid_argument("policy: shares must be nonnegative");
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("policy: shares must sum to 1");
    if (policy.kind == PolicyKind::de_adaptive) {
        validate(policy.schedule);
        if (policy.review_period < 1) {
            throw std::invalid_argument("policy: review_period must be >= 1");
        }
    }
}

UtilizationTrace simulate(const Scenario& scenario, const AllocationPolicy& policy) {
    validate(policy, scenario.n_tasks);
    const std::size_t n = scenario.n_tasks;
    UtilizationTrace trace;
    trace.utilization.reserve(static_cast<std::size_t>(scenario.horizon));
    trace.allocation.resize(scenario.demand.size());

    std::vector<double> shares = policy.static_share;
    std::vector<double> long_run(n, 0.0);   // running mean over all past steps
    std::vector<double> recent(n, 0.0);     // mean over the last review window
    std::vector<double> window_sum(n, 0.0);
    std::int64_t window_len = 0;

    double util_sum = 0.0;
    for (std::int64_t t = 0; t < scenario.horizon; ++t) {
        if (policy.kind == PolicyKind::de_adaptive && t > 0 && t % policy.review_period == 0) {
            const double e = efficiency(policy.schedule, static_cast<double>(t));
            std::vector<double> forecast(n);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                forecast[i] = e * recent[i] + (1.0 - e) * long_run[i];
                total += forecast[i];
            }
            if (total > 0.0) {
                for (std::size_t i = 0; i < n; ++i) shares[i] = forecast[i] / total;
            }
            std::fill(window_sum.begin(), window_sum.end(), 0.0);
            window_len = 0;
        }

        const double capacity = scenario.capacity[static_cast<std::size_t>(t)];
        double served = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double alloc = shares[i] * capacity;
            trace.allocation[static_cast<std::size_t>(t) * n + i] = alloc;
            served += std::min(scenario.demand_at(t, i), alloc);
        }
        const double util = std::min(served / capacity, 1.0);
        trace.utilization.push_back(util);
        util_sum += util;

        for (std::size_t i = 0; i < n; ++i) {
            const double d = scenario.demand_at(t, i);
            long_run[i] = (long_run[i] * static_cast<double>(t) + d) / static_cast<double>(t + 1);
            window_sum[i] += d;
        }
        ++window_len;
        for (std::size_t i = 0; i < n; ++i) {
            recent[i] = window_sum[i] / static_cast<double>(window_len);
        }
    }
    trace.mean_percent = 100.0 * util_sum / static_cast<double>(scenario.horizon);
    return trace;
}

double optimization_gain(double before, double after) {
    if (!(before > 0.0)) throw std::invalid_argument("optimization_gain: before must be > 0");
    return 100.0 * (after - before) / before;
}

void write_trace_csv(const std::filesystem::path& path, const Scenario& scenario,
                     const UtilizationTrace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace: " + path.string());
    out << "timestep";
    for (std::size_t i = 0; i < scenario.n_tasks; ++i) out << ",demand_" << i;
    for (std::size_t i = 0; i < scenario.n_tasks; ++i) out << ",alloc_" << i;
    out << ",utilization\n";
    out.precision(10);
    for (std::int64_t t = 0; t < scenario.horizon; ++t) {
        out << t;
        for (std::size_t i = 0; i < scenario.n_tasks; ++i) out << ',' << scenario.demand_at(t, i);
        for (std::size_t i = 0; i < scenario.n_tasks; ++i) {
            out << ',' << trace.allocation[static_cast<std::size_t>(t) * scenario.n_tasks + i];
        }
        out << ',' << trace.utilization[static_cast<std::size_t>(t)] << '\n';
    }
}

} // namespace dcode

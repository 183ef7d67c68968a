#include "dcode/config.hpp"

#include <fstream>

namespace dcode {

namespace {

void check_keys(const Json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError("config: unknown key '" + where + "." + key + "'");
    }
}

double get_num(const Json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        throw ConfigError("config: " + where + "." + key + " must be a number");
    }
    return obj[key].get<double>();
}

int get_int(const Json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
        throw ConfigError("config: " + where + "." + key + " must be an integer");
    }
    return obj[key].get<int>();
}

bool get_bool(const Json& obj, const std::string& where, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
        throw ConfigError("config: " + where + "." + key + " must be a boolean");
    }
    return obj[key].get<bool>();
}

std::string get_str(const Json& obj, const std::string& where, const char* key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) {
        throw ConfigError("config: " + where + "." + key + " must be a string");
    }
    return obj[key].get<std::string>();
}

// Domain validation throws invalid_argument; surface it as a ConfigError
// carrying the section path.
template <typename Fn>
void checked(const std::string& where, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("config: " + where + ": " + e.what());
    }
}

} // namespace

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

EfficiencySchedule ControllerConfig::schedule(int max_iterations) const {
    EfficiencySchedule sched = default_schedule(max_iterations);
    if (t0) sched.t0 = *t0;
    if (k) sched.k = *k;
    return sched;
}

ColonyConfig colony_from_json(const Json& obj, const std::string& where) {
    check_keys(obj, where, {"alpha", "beta", "rho", "m", "q_deposit", "max_iterations",
                            "candidate_list_size", "tau_init"});
    ColonyConfig cfg;
    cfg.alpha = get_num(obj, where, "alpha", cfg.alpha);
    cfg.beta = get_num(obj, where, "beta", cfg.beta);
    cfg.rho = get_num(obj, where, "rho", cfg.rho);
    cfg.m = get_int(obj, where, "m", cfg.m);
    cfg.q_deposit = get_num(obj, where, "q_deposit", cfg.q_deposit);
    cfg.max_iterations = get_int(obj, where, "max_iterations", cfg.max_iterations);
    cfg.candidate_list_size = get_int(obj, where, "candidate_list_size", cfg.candidate_list_size);
    cfg.tau_init = get_num(obj, where, "tau_init", cfg.tau_init);
    checked(where, [&] { validate(cfg); });
    return cfg;
}

ControllerConfig controller_from_json(const Json& obj, const std::string& where) {
    check_keys(obj, where, {"enabled", "t0", "k", "rho_min", "rho_max", "m_min", "m_max",
                            "stagnation_window", "stagnation_epsilon", "reset_on_stagnation"});
    ControllerConfig cfg;
    cfg.enabled = get_bool(obj, where, "enabled", true);
    if (obj.contains("t0")) cfg.t0 = get_num(obj, where, "t0", 0.0);
    if (obj.contains("k")) cfg.k = get_num(obj, where, "k", 0.0);
    cfg.policy.rho_min = get_num(obj, where, "rho_min", cfg.policy.rho_min);
    cfg.policy.rho_max = get_num(obj, where, "rho_max", cfg.policy.rho_max);
    cfg.policy.m_min = get_int(obj, where, "m_min", cfg.policy.m_min);
    cfg.policy.m_max = get_int(obj, where, "m_max", cfg.policy.m_max);
    cfg.policy.stagnation_window = get_int(obj, where, "stagnation_window",
                                           cfg.policy.stagnation_window);
    cfg.policy.stagnation_epsilon = get_num(obj, where, "stagnation_epsilon",
                                            cfg.policy.stagnation_epsilon);
    cfg.policy.reset_on_stagnation = get_bool(obj, where, "reset_on_stagnation",
                                              cfg.policy.reset_on_stagnation);
    checked(where, [&] { validate(cfg.policy); });
    return cfg;
}

BaselineConfig baseline_from_json(const Json& obj, const std::string& where) {
    check_keys(obj, where, {"algorithm", "population", "max_iterations", "params"});
    BaselineConfig cfg;
    checked(where, [&] {
        cfg.algorithm = baseline_from_name(get_str(obj, where, "algorithm", "aco_classic"));
    });
    cfg.population = get_int(obj, where, "population", cfg.population);
    cfg.max_iterations = get_int(obj, where, "max_iterations", cfg.max_iterations);
    if (obj.contains("params")) {
        const Json& params = obj["params"];
        if (!params.is_object()) {
            throw ConfigError("config: " + where + ".params must be an object");
        }
        for (const auto& [key, value] : params.items()) {
            if (!value.is_number()) {
                throw ConfigError("config: " + where + ".params." + key + " must be a number");
            }
            cfg.params[key] = value.get<double>();
        }
    }
    checked(where, [&] { validate(cfg); });
    return cfg;
}

ScenarioConfig scenario_from_json(const Json& obj, const std::string& where) {
    check_keys(obj, where, {"base_demand", "peak_factor", "spike_factor", "ramp_factor",
                            "capacity_factor", "noise", "review_period"});
    ScenarioConfig cfg;
    cfg.params.base_demand = get_num(obj, where, "base_demand", cfg.params.base_demand);
    cfg.params.peak_factor = get_num(obj, where, "peak_factor", cfg.params.peak_factor);
    cfg.params.spike_factor = get_num(obj, where, "spike_factor", cfg.params.spike_factor);
    cfg.params.ramp_factor = get_num(obj, where, "ramp_factor", cfg.params.ramp_factor);
    cfg.params.capacity_factor = get_num(obj, where, "capacity_factor", cfg.params.capacity_factor);
    cfg.params.noise = get_num(obj, where, "noise", cfg.params.noise);
    cfg.review_period = get_int(obj, where, "review_period",
                                static_cast<int>(cfg.review_period));
    if (cfg.review_period < 1) {
        throw ConfigError("config: " + where + ".review_period must be >= 1");
    }
    return cfg;
}

CliConfig cli_config_from_json(const Json& doc) {
    check_keys(doc, "top-level", {"colony", "de_controller", "baseline", "scenario", "experiment"});
    CliConfig cfg;
    if (doc.contains("colony")) cfg.colony = colony_from_json(doc["colony"]);
    if (doc.contains("de_controller")) cfg.controller = controller_from_json(doc["de_controller"]);
    if (doc.contains("baseline")) cfg.baseline = baseline_from_json(doc["baseline"]);
    if (doc.contains("scenario")) cfg.scenario = scenario_from_json(doc["scenario"]);
    if (doc.contains("experiment")) cfg.experiment = doc["experiment"];
    return cfg;
}

Json effective_colony(const ColonyConfig& cfg) {
    return Json{{"alpha", cfg.alpha},
                {"beta", cfg.beta},
                {"rho", cfg.rho},
                {"m", cfg.m},
                {"q_deposit", cfg.q_deposit},
                {"max_iterations", cfg.max_iterations},
                {"candidate_list_size", cfg.candidate_list_size},
                {"tau_init", cfg.tau_init}};
}

Json effective_controller(const ControllerConfig& cfg, int max_iterations) {
    const EfficiencySchedule sched = cfg.schedule(max_iterations);
    return Json{{"enabled", cfg.enabled},
                {"t0", sched.t0},
                {"k", sched.k},
                {"rho_min", cfg.policy.rho_min},
                {"rho_max", cfg.policy.rho_max},
                {"m_min", cfg.policy.m_min},
                {"m_max", cfg.policy.m_max},
                {"stagnation_window", cfg.policy.stagnation_window},
                {"stagnation_epsilon", cfg.policy.stagnation_epsilon},
                {"reset_on_stagnation", cfg.policy.reset_on_stagnation}};
}

Json effective_scenario(const ScenarioConfig& cfg) {
    return Json{{"base_demand", cfg.params.base_demand},
                {"peak_factor", cfg.params.peak_factor},
                {"spike_factor", cfg.params.spike_factor},
                {"ramp_factor", cfg.params.ramp_factor},
                {"capacity_factor", cfg.params.capacity_factor},
                {"noise", cfg.params.noise},
                {"review_period", cfg.review_period}};
}

Json effective_baseline(const BaselineConfig& cfg) {
    Json params = Json::object();
    for (const auto& [key, value] : cfg.params) params[key] = value;
    return Json{{"algorithm", baseline_name(cfg.algorithm)},
                {"population", cfg.population},
                {"max_iterations", cfg.max_iterations},
                {"params", params}};
}

} // namespace dcode

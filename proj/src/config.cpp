#include "mgd/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mgd/csv.hpp"

namespace mgd {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& scope,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + scope + key + "'");
        }
    }
}

double get_number(const json& obj, const std::string& scope, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        throw ConfigError("key '" + scope + key + "' must be a number");
    }
    return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& scope, const std::string& key,
                 long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
        throw ConfigError("key '" + scope + key + "' must be an integer");
    }
    return obj[key].get<long>();
}

bool get_bool(const json& obj, const std::string& scope, const std::string& key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
        throw ConfigError("key '" + scope + key + "' must be a boolean");
    }
    return obj[key].get<bool>();
}

/// Scalar broadcasts to a flat profile; an array must match the horizon.
Eigen::VectorXd get_profile(const json& obj, const std::string& scope,
                            const std::string& key, int horizon,
                            const Eigen::VectorXd& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    if (v.is_number()) {
        return Eigen::VectorXd::Constant(horizon, v.get<double>());
    }
    if (!v.is_array()) {
        throw ConfigError("key '" + scope + key + "' must be a number or an array");
    }
    if (static_cast<int>(v.size()) != horizon) {
        throw ConfigError("key '" + scope + key + "' must have " +
                          std::to_string(horizon) + " entries");
    }
    Eigen::VectorXd out(horizon);
    for (int i = 0; i < horizon; ++i) {
        if (!v[i].is_number()) {
            throw ConfigError("key '" + scope + key + "' has a non-numeric entry");
        }
        out(i) = v[i].get<double>();
    }
    return out;
}

// bundled diurnal shapes; not measured data, just plausible defaults
Eigen::VectorXd default_load_profile() {
    Eigen::VectorXd p(24);
    p << 0.64, 0.60, 0.58, 0.56, 0.56, 0.58, 0.64, 0.72, 0.80, 0.86, 0.90, 0.92,
        0.94, 0.92, 0.90, 0.88, 0.90, 0.94, 1.00, 0.98, 0.94, 0.86, 0.76, 0.68;
    return p;
}

Eigen::VectorXd default_irradiance_profile() {
    Eigen::VectorXd p(24);
    p << 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.05, 0.15, 0.30, 0.45, 0.58, 0.68,
        0.72, 0.70, 0.62, 0.50, 0.35, 0.20, 0.08, 0.02, 0.0, 0.0, 0.0, 0.0;
    return p;
}

Eigen::VectorXd default_grid_buy_profile() {
    Eigen::VectorXd p(24);
    p << 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.12, 0.12, 0.14, 0.14, 0.14,
        0.14, 0.14, 0.14, 0.14, 0.14, 0.18, 0.18, 0.18, 0.18, 0.18, 0.10, 0.10;
    return p;
}

int resolve_bus(const NetworkModel& net, const json& entry, const std::string& scope) {
    if (!entry.contains("bus") || !entry["bus"].is_number_integer()) {
        throw ConfigError("key '" + scope + "bus' is required and must be an integer");
    }
    const int bus = entry["bus"].get<int>();
    try {
        net.bus_index(bus);
    } catch (const DatasetError&) {
        throw ConfigError("key '" + scope + "bus' references bus " +
                          std::to_string(bus) + " which is not in the dataset");
    }
    return bus;
}

Fleet parse_fleet(const json& obj, const NetworkModel& net) {
    Fleet fleet;
    check_keys(obj, "fleet.", {"wt", "pv", "chp", "ess"});

    if (obj.contains("wt")) {
        int i = 0;
        for (const json& e : obj["wt"]) {
            const std::string scope = "fleet.wt[" + std::to_string(i++) + "].";
            check_keys(e, scope, {"bus", "p_rate_kw", "v_cut_in", "v_rated",
                                  "v_cut_out", "k_om"});
            WtUnit u;
            u.bus_id = resolve_bus(net, e, scope);
            u.curve = make_wt_params(get_number(e, scope, "p_rate_kw", 250.0),
                                     get_number(e, scope, "v_cut_in", 2.0),
                                     get_number(e, scope, "v_rated", 14.0),
                                     get_number(e, scope, "v_cut_out", 25.0));
            u.k_om = get_number(e, scope, "k_om", 0.006);
            fleet.wt.push_back(u);
        }
    }
    if (obj.contains("pv")) {
        int i = 0;
        for (const json& e : obj["pv"]) {
            const std::string scope = "fleet.pv[" + std::to_string(i++) + "].";
            check_keys(e, scope, {"bus", "p_stc_kw", "g_stc", "k_temp", "t_ref_c", "k_om"});
            PvUnit u;
            u.bus_id = resolve_bus(net, e, scope);
            u.panel.p_stc_kw = get_number(e, scope, "p_stc_kw", 250.0);
            u.panel.g_stc = get_number(e, scope, "g_stc", 1000.0);
            u.panel.k_temp = get_number(e, scope, "k_temp", 0.001);
            u.panel.t_ref_c = get_number(e, scope, "t_ref_c", 25.0);
            u.k_om = get_number(e, scope, "k_om", 0.005);
            fleet.pv.push_back(u);
        }
    }
    if (obj.contains("chp")) {
        int i = 0;
        for (const json& e : obj["chp"]) {
            const std::string scope = "fleet.chp[" + std::to_string(i++) + "].";
            check_keys(e, scope, {"bus", "p_min_kw", "p_max_kw", "theta", "varrho",
                                  "gamma", "gas_price", "elec_eff", "thermal_price",
                                  "heat_to_electric", "k_om", "emission"});
            ChpParams u;
            u.bus_id = resolve_bus(net, e, scope);
            u.p_min_kw = get_number(e, scope, "p_min_kw", 0.0);
            u.p_max_kw = get_number(e, scope, "p_max_kw", 200.0);
            u.theta = get_number(e, scope, "theta", 1e-4);
            u.varrho = get_number(e, scope, "varrho", 0.03);
            u.gamma = get_number(e, scope, "gamma", 2.0);
            u.gas_price = get_number(e, scope, "gas_price", 0.035);
            u.elec_eff = get_number(e, scope, "elec_eff", 0.38);
            u.thermal_price = get_number(e, scope, "thermal_price", 0.03);
            u.heat_to_electric = get_number(e, scope, "heat_to_electric", 1.1);
            u.k_om = get_number(e, scope, "k_om", 0.008);
            if (e.contains("emission")) {
                const json& em = e["emission"];
                const std::string em_scope = scope + "emission.";
                check_keys(em, em_scope, {"a", "b", "c", "zeta", "lambda"});
                u.emission.e_a = get_number(em, em_scope, "a", 0.0);
                u.emission.e_b = get_number(em, em_scope, "b", 0.004);
                u.emission.e_c = get_number(em, em_scope, "c", 1e-6);
                u.emission.e_zeta = get_number(em, em_scope, "zeta", 0.01);
                u.emission.e_lambda = get_number(em, em_scope, "lambda", 0.004);
            } else {
                u.emission = EmissionCoeffs{0.0, 0.004, 1e-6, 0.01, 0.004};
            }
            u.validate();
            fleet.chp.push_back(u);
        }
    }
    if (obj.contains("ess")) {
        int i = 0;
        for (const json& e : obj["ess"]) {
            const std::string scope = "fleet.ess[" + std::to_string(i++) + "].";
            check_keys(e, scope, {"bus", "eta_ch", "eta_dis", "soc_min_kwh",
                                  "soc_max_kwh", "soc_init_kwh", "p_ch_max_kw",
                                  "p_dis_max_kw", "k_om"});
            EssParams u;
            u.bus_id = resolve_bus(net, e, scope);
            u.eta_ch = get_number(e, scope, "eta_ch", 0.9);
            u.eta_dis = get_number(e, scope, "eta_dis", 0.9);
            u.soc_min_kwh = get_number(e, scope, "soc_min_kwh", 80.0);
            u.soc_max_kwh = get_number(e, scope, "soc_max_kwh", 400.0);
            u.soc_init_kwh = get_number(e, scope, "soc_init_kwh", 200.0);
            u.p_ch_max_kw = get_number(e, scope, "p_ch_max_kw", 100.0);
            u.p_dis_max_kw = get_number(e, scope, "p_dis_max_kw", 100.0);
            u.k_om = get_number(e, scope, "k_om", 0.004);
            u.validate();
            fleet.ess.push_back(u);
        }
    }
    return fleet;
}

}  // namespace

HourlyModels RunConfig::hourly_models() const {
    HourlyModels m;
    m.g_max = g_max;
    m.load_columns = per_bus_load_multipliers ? static_cast<int>(network.buses.size()) : 1;
    m.irradiance_fixed = Eigen::VectorXd::Zero(horizon);
    for (int t = 0; t < horizon; ++t) {
        m.wind.push_back(WeibullDist{weibull_shape, weibull_scale * wind_scale_profile(t)});
        const double mean = irr_mean_profile(t);
        const double std = irr_std_profile(t);
        if (mean > 0.0 && mean < 1.0 && std > 0.0) {
            try {
                m.irradiance.push_back(beta_params_from_moments(mean, std, beta_identity));
            } catch (const InfeasibleMoments& e) {
                throw ConfigError("irradiance profile hour " + std::to_string(t) + ": " +
                                  e.what());
            }
        } else {
            m.irradiance.push_back(std::nullopt);
            m.irradiance_fixed(t) = std::clamp(mean, 0.0, 1.0);
        }
        m.load_multiplier.push_back(NormalDist{load_mean_profile(t), load_std_profile(t)});
    }
    return m;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config is not valid JSON: " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    check_keys(doc, "",
               {"config_version", "dataset", "seed", "horizon", "period_len",
                "scenarios", "wind", "irradiance", "load", "temperature", "fleet",
                "prices", "weights", "reliability", "penalty_coefficient", "coa",
                "threads", "out_dir"});

    RunConfig cfg;
    cfg.config_dir = std::filesystem::path(path).parent_path().string();
    cfg.config_version = static_cast<int>(get_integer(doc, "", "config_version", 1));
    if (cfg.config_version != 1) {
        throw ConfigError("unsupported config_version " +
                          std::to_string(cfg.config_version));
    }
    if (!doc.contains("dataset") || !doc["dataset"].is_string()) {
        throw ConfigError("key 'dataset' is required and must be a path string");
    }
    cfg.dataset_path =
        (std::filesystem::path(cfg.config_dir) / doc["dataset"].get<std::string>())
            .string();
    cfg.network = load_network(cfg.dataset_path);

    cfg.seed = static_cast<std::uint64_t>(get_integer(doc, "", "seed", 1));
    cfg.horizon = static_cast<int>(get_integer(doc, "", "horizon", 24));
    if (cfg.horizon < 1) throw ConfigError("key 'horizon' must be >= 1");
    cfg.period_len = static_cast<int>(get_integer(doc, "", "period_len", 3));
    if (cfg.period_len < 1 || cfg.horizon % cfg.period_len != 0) {
        throw ConfigError("key 'period_len' must divide the horizon");
    }
    cfg.threads = static_cast<int>(get_integer(doc, "", "threads", 1));
    if (cfg.threads < 1) throw ConfigError("key 'threads' must be >= 1");
    cfg.penalty_coefficient = get_number(doc, "", "penalty_coefficient", 1e6);
    if (cfg.penalty_coefficient < 0.0) {
        throw ConfigError("key 'penalty_coefficient' must be >= 0");
    }
    if (doc.contains("out_dir")) {
        if (!doc["out_dir"].is_string()) throw ConfigError("key 'out_dir' must be a string");
        cfg.out_dir = (std::filesystem::path(cfg.config_dir) /
                       doc["out_dir"].get<std::string>())
                          .string();
    }

    if (doc.contains("scenarios")) {
        const json& s = doc["scenarios"];
        check_keys(s, "scenarios.",
                   {"n_generate", "n_keep", "per_bus_load_multipliers"});
        cfg.n_generate = static_cast<int>(get_integer(s, "scenarios.", "n_generate", 1000));
        cfg.n_keep = static_cast<int>(get_integer(s, "scenarios.", "n_keep", 30));
        cfg.per_bus_load_multipliers =
            get_bool(s, "scenarios.", "per_bus_load_multipliers", false);
    }
    if (cfg.n_generate < 1) throw ConfigError("key 'scenarios.n_generate' must be >= 1");
    if (cfg.n_keep < 1 || cfg.n_keep > cfg.n_generate) {
        throw ConfigError("key 'scenarios.n_keep' must be in [1, n_generate]");
    }

    const json wind = doc.contains("wind") ? doc["wind"] : json::object();
    check_keys(wind, "wind.", {"weibull_shape", "weibull_scale", "scale_profile"});
    cfg.weibull_shape = get_number(wind, "wind.", "weibull_shape", 3.0);
    cfg.weibull_scale = get_number(wind, "wind.", "weibull_scale", 12.0);
    cfg.wind_scale_profile =
        get_profile(wind, "wind.", "scale_profile", cfg.horizon,
                    Eigen::VectorXd::Constant(cfg.horizon, 1.0));

    const json irr = doc.contains("irradiance") ? doc["irradiance"] : json::object();
    check_keys(irr, "irradiance.",
               {"mean_profile", "std_profile", "g_max", "beta_moment_identity"});
    {
        Eigen::VectorXd mean_default =
            cfg.horizon == 24 ? default_irradiance_profile()
                              : Eigen::VectorXd::Constant(cfg.horizon, 0.5);
        cfg.irr_mean_profile =
            get_profile(irr, "irradiance.", "mean_profile", cfg.horizon, mean_default);
        cfg.irr_std_profile = get_profile(irr, "irradiance.", "std_profile", cfg.horizon,
                                          0.2 * cfg.irr_mean_profile);
        cfg.g_max = get_number(irr, "irradiance.", "g_max", 1000.0);
        if (!(cfg.g_max > 0.0)) throw ConfigError("key 'irradiance.g_max' must be > 0");
        if (irr.contains("beta_moment_identity")) {
            const std::string v = irr["beta_moment_identity"].is_string()
                                      ? irr["beta_moment_identity"].get<std::string>()
                                      : "";
            if (v == "mu-plus-one") {
                cfg.beta_identity = BetaMomentIdentity::MuPlusOne;
            } else if (v == "standard") {
                cfg.beta_identity = BetaMomentIdentity::Standard;
            } else {
                throw ConfigError(
                    "key 'irradiance.beta_moment_identity' must be "
                    "\"mu-plus-one\" or \"standard\"");
            }
        }
    }

    const json load = doc.contains("load") ? doc["load"] : json::object();
    check_keys(load, "load.",
               {"multiplier_mean_profile", "multiplier_std", "multiplier_std_profile"});
    {
        Eigen::VectorXd mean_default = cfg.horizon == 24
                                           ? default_load_profile()
                                           : Eigen::VectorXd::Constant(cfg.horizon, 1.0);
        cfg.load_mean_profile = get_profile(load, "load.", "multiplier_mean_profile",
                                            cfg.horizon, mean_default);
        const double flat_std = get_number(load, "load.", "multiplier_std", 0.04);
        cfg.load_std_profile =
            get_profile(load, "load.", "multiplier_std_profile", cfg.horizon,
                        Eigen::VectorXd::Constant(cfg.horizon, flat_std));
    }

    const json temp = doc.contains("temperature") ? doc["temperature"] : json::object();
    check_keys(temp, "temperature.", {"cell_profile"});
    cfg.t_cell_profile = get_profile(temp, "temperature.", "cell_profile", cfg.horizon,
                                     Eigen::VectorXd::Constant(cfg.horizon, 25.0));

    cfg.fleet = doc.contains("fleet") ? parse_fleet(doc["fleet"], cfg.network) : Fleet{};

    const json prices = doc.contains("prices") ? doc["prices"] : json::object();
    check_keys(prices, "prices.", {"grid_buy", "grid_sell", "c_ploss", "c_int"});
    {
        Eigen::VectorXd buy_default = cfg.horizon == 24
                                          ? default_grid_buy_profile()
                                          : Eigen::VectorXd::Constant(cfg.horizon, 0.12);
        cfg.prices.grid_buy =
            get_profile(prices, "prices.", "grid_buy", cfg.horizon, buy_default);
        cfg.prices.grid_sell = get_number(prices, "prices.", "grid_sell", 0.06);
        cfg.prices.c_ploss = get_number(prices, "prices.", "c_ploss", 0.10);
        cfg.prices.c_int = get_number(prices, "prices.", "c_int", 1.5);
    }

    const json weights = doc.contains("weights") ? doc["weights"] : json::object();
    check_keys(weights, "weights.", {"h1", "h2", "h_c"});
    cfg.weights.h1 = get_number(weights, "weights.", "h1", 1.0);
    cfg.weights.h2 = get_number(weights, "weights.", "h2", 1.0);
    cfg.weights.h_c = get_number(weights, "weights.", "h_c", 1.0);
    if (cfg.weights.h1 < 0.0 || cfg.weights.h2 < 0.0 || cfg.weights.h_c < 0.0) {
        throw ConfigError("weights must be >= 0");
    }

    const json rel = doc.contains("reliability") ? doc["reliability"] : json::object();
    check_keys(rel, "reliability.", {"t_res_h", "t_rep_h"});
    cfg.reliability.t_res_h = get_number(rel, "reliability.", "t_res_h", 0.5);
    cfg.reliability.t_rep_h = get_number(rel, "reliability.", "t_rep_h", 4.0);
    if (!(cfg.reliability.t_res_h >= 0.0) ||
        cfg.reliability.t_rep_h < cfg.reliability.t_res_h) {
        throw ConfigError("reliability durations need 0 <= t_res_h <= t_rep_h");
    }
    cfg.reliability.c_int = cfg.prices.c_int;
    cfg.reliability.h_c = cfg.weights.h_c;

    const json coa = doc.contains("coa") ? doc["coa"] : json::object();
    check_keys(coa, "coa.",
               {"n_initial", "max_population", "eggs_min", "eggs_max", "n_clusters",
                "motion_coefficient", "max_iterations", "alpha_elr",
                "elr_decay_floor", "egg_demise_fraction", "stop_eps", "stop_window",
                "warm_start"});
    cfg.coa.n_initial = static_cast<int>(get_integer(coa, "coa.", "n_initial", 20));
    cfg.coa.max_population =
        static_cast<int>(get_integer(coa, "coa.", "max_population", 50));
    cfg.coa.eggs_min = static_cast<int>(get_integer(coa, "coa.", "eggs_min", 2));
    cfg.coa.eggs_max = static_cast<int>(get_integer(coa, "coa.", "eggs_max", 4));
    cfg.coa.n_clusters = static_cast<int>(get_integer(coa, "coa.", "n_clusters", 3));
    cfg.coa.motion_coefficient =
        get_number(coa, "coa.", "motion_coefficient", 2.0);
    cfg.coa.max_iterations =
        static_cast<int>(get_integer(coa, "coa.", "max_iterations", 300));
    cfg.coa.alpha_elr = get_number(coa, "coa.", "alpha_elr", 2.0);
    cfg.coa.elr_decay_floor = get_number(coa, "coa.", "elr_decay_floor", 0.02);
    cfg.coa.egg_demise_fraction = get_number(coa, "coa.", "egg_demise_fraction", 0.1);
    cfg.coa.stop_eps = get_number(coa, "coa.", "stop_eps", 1e-9);
    cfg.coa.stop_window = static_cast<int>(get_integer(coa, "coa.", "stop_window", 50));
    cfg.warm_start = get_bool(coa, "coa.", "warm_start", true);
    cfg.coa.threads = cfg.threads;
    cfg.coa.validate();

    cfg.config_hash = file_hash_hex(path);
    // dataset identity: descriptor plus both CSV files
    std::string combined = file_hash_hex(cfg.dataset_path);
    {
        std::ifstream ds(cfg.dataset_path);
        json dsdoc;
        ds >> dsdoc;
        const auto dir = std::filesystem::path(cfg.dataset_path).parent_path();
        combined += file_hash_hex((dir / dsdoc.at("buses_file").get<std::string>()).string());
        combined += file_hash_hex((dir / dsdoc.at("branches_file").get<std::string>()).string());
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : combined) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    cfg.dataset_hash = buf;

    cfg.hourly_models().validate();  // surface profile problems at load time
    return cfg;
}

}  // namespace mgd

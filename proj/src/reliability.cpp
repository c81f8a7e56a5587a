#include "mgd/reliability.hpp"

#include <cmath>

#include "mgd/stochastic.hpp"

namespace mgd {

Eigen::VectorXd island_supply_kw(const NetworkModel& net, const Fleet& fleet,
                                 const ScenarioSet& scen,
                                 const Eigen::VectorXd& t_cell_profile) {
    Eigen::VectorXd supply = Eigen::VectorXd::Zero(net.buses.size());
    for (const auto& u : fleet.chp) {
        supply(net.bus_index(u.bus_id)) += u.p_max_kw;
    }
    for (const auto& u : fleet.ess) {
        supply(net.bus_index(u.bus_id)) += u.p_dis_max_kw;
    }
    // expected available renewable output, averaged over scenarios and hours
    for (const auto& u : fleet.wt) {
        double expected = 0.0;
        for (const Scenario& s : scen.scenarios) {
            double mean_t = 0.0;
            for (int t = 0; t < scen.horizon; ++t) {
                mean_t += wt_power(s.wind_speed(t), u.curve);
            }
            expected += s.probability * mean_t / scen.horizon;
        }
        supply(net.bus_index(u.bus_id)) += expected;
    }
    for (const auto& u : fleet.pv) {
        double expected = 0.0;
        for (const Scenario& s : scen.scenarios) {
            double mean_t = 0.0;
            for (int t = 0; t < scen.horizon; ++t) {
                const double t_cell = t_cell_profile.size() == scen.horizon
                                          ? t_cell_profile(t)
                                          : u.panel.t_cell_c;
                mean_t += pv_power(s.irradiance(t), u.panel, t_cell);
            }
            expected += s.probability * mean_t / scen.horizon;
        }
        supply(net.bus_index(u.bus_id)) += expected;
    }
    return supply;
}

namespace {

int branch_index_of(const NetworkModel& net, int branch_id) {
    for (size_t i = 0; i < net.branches.size(); ++i) {
        if (net.branches[i].id == branch_id) return static_cast<int>(i);
    }
    throw InvalidInput("unknown branch id " + std::to_string(branch_id));
}

}  // namespace

Contingency contingency_partition(const NetworkModel& net,
                                  const Eigen::VectorXd& supply_kw, int branch_id,
                                  const ReliabilityOptions& opts) {
    const int bi = branch_index_of(net, branch_id);
    const Branch& br = net.branches[bi];
    const std::vector<int> island = net.downstream_of(bi);

    double island_load = 0.0;
    double island_supply = 0.0;
    for (int b : island) {
        island_load += net.buses[b].p_load_kw;
        island_supply += supply_kw(b);
    }
    const bool restorable = br.has_sectionalizer && island_supply >= island_load;

    Contingency c;
    c.branch_id = branch_id;
    c.probability_weight = br.failures_per_km_yr * br.length_km / 365.0;
    c.restored_load_kw = restorable ? island_load : 0.0;
    c.unrestored_load_kw = restorable ? 0.0 : island_load;
    c.t_res_h = opts.t_res_h;
    c.t_rep_h = opts.t_rep_h;
    return c;
}

double aens(const std::vector<std::pair<double, double>>& ens_and_prob) {
    double total = 0.0;
    for (const auto& [ens, prob] : ens_and_prob) {
        if (prob < 0.0) {
            throw InvalidInput("aens: probabilities must be non-negative");
        }
        total += ens * prob;
    }
    return total;
}

double eir(double aens_kwh, double total_demand_kwh) {
    if (!(total_demand_kwh > 0.0)) {
        throw UndefinedMetric("eir: total demand must be positive");
    }
    return 1.0 - aens_kwh / total_demand_kwh;
}

double c_aens(const NetworkModel& net, const ScenarioSet& scen,
              const Eigen::VectorXd& supply_kw, const ReliabilityOptions& opts) {
    double total = 0.0;
    for (const Branch& br : net.branches) {
        const Contingency c = contingency_partition(net, supply_kw, br.id, opts);
        const int bi = branch_index_of(net, br.id);
        const std::vector<int> island = net.downstream_of(bi);
        // scenario load level at fault time: the time-average multiplier
        for (const Scenario& s : scen.scenarios) {
            double island_load = 0.0;
            for (int b : island) {
                double mean_mult = 0.0;
                for (int t = 0; t < scen.horizon; ++t) mean_mult += s.multiplier(t, b);
                island_load += net.buses[b].p_load_kw * mean_mult / scen.horizon;
            }
            const bool restorable = c.unrestored_load_kw == 0.0;
            const double outage_kwh = island_load * (restorable ? c.t_res_h : c.t_rep_h);
            total += s.probability * opts.c_int * c.probability_weight * outage_kwh;
        }
    }
    return total;
}

double interruption_cost_day(double c_aens_value, double h_c) {
    if (h_c < 0.0) throw InvalidParameter("interruption_cost_day: h_c must be >= 0");
    return h_c * c_aens_value;
}

ReliabilityReport evaluate_reliability(const NetworkModel& net, const Fleet& fleet,
                                       const ScenarioSet& scen,
                                       const ReliabilityOptions& opts,
                                       const Eigen::VectorXd& t_cell_profile) {
    const Eigen::VectorXd supply = island_supply_kw(net, fleet, scen, t_cell_profile);
    const int n_scen = static_cast<int>(scen.scenarios.size());

    ReliabilityReport rep;
    rep.ens_cost_by_scenario = Eigen::VectorXd::Zero(n_scen);

    // expected daily demand energy (system and per zone)
    std::map<int, double> demand_by_zone;
    for (size_t b = 0; b < net.buses.size(); ++b) {
        const Bus& bus = net.buses[b];
        double expected_mult = 0.0;
        for (const Scenario& s : scen.scenarios) {
            for (int t = 0; t < scen.horizon; ++t) {
                expected_mult += s.probability * s.multiplier(t, static_cast<int>(b));
            }
        }
        const double energy = bus.p_load_kw * expected_mult;  // kWh over the day
        rep.total_demand_kwh += energy;
        demand_by_zone[bus.mg_zone] += energy;
    }

    for (size_t bi = 0; bi < net.branches.size(); ++bi) {
        const Branch& br = net.branches[bi];
        const Contingency c = contingency_partition(net, supply, br.id, opts);
        const std::vector<int> island = net.downstream_of(static_cast<int>(bi));
        const bool restorable = c.unrestored_load_kw == 0.0;
        const double duration = restorable ? c.t_res_h : c.t_rep_h;

        for (int si = 0; si < n_scen; ++si) {
            const Scenario& s = scen.scenarios[si];
            double island_load = 0.0;
            std::map<int, double> island_load_by_zone;
            for (int b : island) {
                double mean_mult = 0.0;
                for (int t = 0; t < scen.horizon; ++t) mean_mult += s.multiplier(t, b);
                const double load = net.buses[b].p_load_kw * mean_mult / scen.horizon;
                island_load += load;
                island_load_by_zone[net.buses[b].mg_zone] += load;
            }
            const double ens = island_load * duration;  // kWh per occurrence
            rep.aens_kwh += s.probability * c.probability_weight * ens;
            rep.ens_cost_by_scenario(si) += opts.c_int * c.probability_weight * ens;
            for (const auto& [zone, load] : island_load_by_zone) {
                rep.aens_by_zone[zone] +=
                    s.probability * c.probability_weight * load * duration;
            }
        }
    }

    rep.eir = eir(rep.aens_kwh, rep.total_demand_kwh);
    rep.c_aens = opts.c_int * rep.aens_kwh;
    rep.ic_day = interruption_cost_day(rep.c_aens, opts.h_c);
    for (const auto& [zone, a] : rep.aens_by_zone) {
        rep.c_aens_by_zone[zone] = opts.c_int * a;
        rep.ic_day_by_zone[zone] = opts.h_c * rep.c_aens_by_zone[zone];
        const double zone_demand = demand_by_zone[zone];
        rep.eir_by_zone[zone] = zone_demand > 0.0 ? 1.0 - a / zone_demand : 1.0;
        if (zone > 0) rep.f2 += rep.ic_day_by_zone[zone];
    }
    return rep;
}

}  // namespace mgd

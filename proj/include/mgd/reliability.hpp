#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "mgd/fleet.hpp"
#include "mgd/network.hpp"
#include "mgd/scenario.hpp"

namespace mgd {

struct ReliabilityOptions {
    double t_res_h = 0.5;  // fault location + switching
    double t_rep_h = 4.0;  // repair
    double c_int = 1.5;    // $/kWh not supplied
    double h_c = 1.0;      // interruption-cost weight
};

/// Outcome of a single branch fault: the downstream island either rides
/// through on local generation after switching (restored, out for t_res) or
/// waits for the repair (unrestored, out for t_rep). Loads are nominal.
struct Contingency {
    int branch_id = 0;
    double probability_weight = 0.0;  // failures/yr * length / 365, per day
    double restored_load_kw = 0.0;
    double unrestored_load_kw = 0.0;
    double t_res_h = 0.0;
    double t_rep_h = 0.0;
};

struct ReliabilityReport {
    double aens_kwh = 0.0;  // expected energy not supplied per day
    double eir = 1.0;       // 1 - aens / total demand energy
    double c_aens = 0.0;    // $ per day
    double ic_day = 0.0;    // h_c * c_aens
    double f2 = 0.0;        // sum of ic_day over microgrid zones
    double total_demand_kwh = 0.0;
    std::map<int, double> aens_by_zone;
    std::map<int, double> eir_by_zone;
    std::map<int, double> c_aens_by_zone;
    std::map<int, double> ic_day_by_zone;
    Eigen::VectorXd ens_cost_by_scenario;  // $ per day, for the ENS-cost histogram
};

/// Restorable-capacity credit per bus: expected available WT+PV output plus
/// CHP p_max plus ESS discharge capability. An empty temperature profile
/// falls back on each panel's stored operating temperature.
Eigen::VectorXd island_supply_kw(const NetworkModel& net, const Fleet& fleet,
                                 const ScenarioSet& scen,
                                 const Eigen::VectorXd& t_cell_profile = {});

/// Splits the island below `branch_id` into restored / unrestored load. The
/// island restores only if the faulted branch carries a sectionalizer and the
/// island's supply covers its peak (nominal) load.
Contingency contingency_partition(const NetworkModel& net,
                                  const Eigen::VectorXd& supply_kw, int branch_id,
                                  const ReliabilityOptions& opts = {});

/// Probability-weighted expected energy not supplied.
double aens(const std::vector<std::pair<double, double>>& ens_and_prob);

/// Energy index of reliability.
double eir(double aens_kwh, double total_demand_kwh);

/// Contingency cost over scenarios and branches, probability weighted on
/// both axes; load at fault time is a scenario's time-average level.
double c_aens(const NetworkModel& net, const ScenarioSet& scen,
              const Eigen::VectorXd& supply_kw, const ReliabilityOptions& opts = {});

double interruption_cost_day(double c_aens_value, double h_c);

/// Full analytical evaluation: AENS, EIR, interruption cost, per-zone
/// breakdown, the F2 objective term and the per-scenario ENS-cost samples.
ReliabilityReport evaluate_reliability(const NetworkModel& net, const Fleet& fleet,
                                       const ScenarioSet& scen,
                                       const ReliabilityOptions& opts = {},
                                       const Eigen::VectorXd& t_cell_profile = {});

}  // namespace mgd

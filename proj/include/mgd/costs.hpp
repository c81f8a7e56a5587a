#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "mgd/fleet.hpp"
#include "mgd/network.hpp"
#include "mgd/power_flow.hpp"
#include "mgd/reliability.hpp"
#include "mgd/scenario.hpp"

namespace mgd {

struct Prices {
    Eigen::VectorXd grid_buy;  // $/kWh, per hour
    double grid_sell = 0.0;    // $/kWh credited for export
    double c_ploss = 0.0;      // $/kWh of losses
    double c_int = 1.5;        // $/kWh not supplied
};

struct Weights {
    double h1 = 1.0;
    double h2 = 1.0;
    double h_c = 1.0;
};

/// Per-evaluation cost record. `fuel` carries the CHP fuel bill net of the
/// thermal-revenue credit plus the grid energy bill (purchases minus sale
/// credits). `penalty` is zero for any feasible schedule, in which case
/// z = h1 (fuel + om + emission + losses) + h2 * interruption exactly.
struct CostBreakdown {
    double fuel = 0.0;
    double om = 0.0;
    double emission = 0.0;
    double losses = 0.0;
    double interruption = 0.0;
    double penalty = 0.0;
    double z = 0.0;

    double f1() const { return fuel + om + emission + losses; }
};

struct Violation {
    std::string constraint;
    int hour = -1;
    double magnitude = 0.0;
};

// ---------------------------------------------------------------------------
// Per-device cost primitives
// ---------------------------------------------------------------------------

/// Fuel consumption rate: theta p^2 + varrho p + gamma.
double chp_fuel_rate(double p_kw, const ChpParams& c);

/// Fuel bill minus heat-sale revenue over dt hours:
/// (gas_price p / elec_eff - thermal_price heat_to_electric p) dt.
double chp_fuel_cost(double p_kw, const ChpParams& c, double dt_h);

double om_cost(double p_kw, double k_om, double dt_h);

double emission_cost(double p_kw, const EmissionCoeffs& e);

/// SOC transition: soc + eta_ch p_ch dt - p_dis dt / eta_dis. Charging and
/// discharging in the same step is rejected.
double ess_step(double soc_kwh, double p_ch_kw, double p_dis_kw,
                const EssParams& e, double dt_h);

// ---------------------------------------------------------------------------
// Schedule-level evaluation
// ---------------------------------------------------------------------------

/// Bound and SOC-trajectory checks; violations are data, not exceptions.
/// When per-hour solutions are supplied the slack power-balance self-check
/// runs as well.
std::vector<Violation> check_constraints(
    const DispatchSchedule& s, const Fleet& fleet,
    const std::vector<PowerFlowSolution>& sols = {});

Eigen::VectorXd aggregate_periods(const Eigen::VectorXd& hourly, int period_len);

/// Expected (WT + PV energy) / (demand energy) per microgrid zone.
std::map<int, double> renewable_penetration(const NetworkModel& net,
                                            const Fleet& fleet,
                                            const ScenarioSet& scen,
                                            const Eigen::VectorXd& t_cell_profile = {});

/// Everything observable about one schedule evaluation.
struct EvalDetail {
    CostBreakdown cost;
    std::vector<Violation> violations;
    double grid_import_kwh = 0.0;
    double grid_export_kwh = 0.0;
    double grid_purchase_cost = 0.0;  // included in cost.fuel
    double grid_sale_credit = 0.0;    // subtracted inside cost.fuel
    double chp_fuel_cost_total = 0.0;
    double chp_fuel_units = 0.0;  // integral of the fuel-rate polynomial
    double losses_kwh = 0.0;
    double min_voltage_pu = 1.0;
    int n_nonconverged = 0;
    Eigen::VectorXd hourly_losses_kw;    // expected over scenarios
    Eigen::MatrixXd expected_wt_kw;      // hours x n_wt
    Eigen::MatrixXd expected_pv_kw;      // hours x n_pv
};

/// Scenario-expected dispatch cost evaluator. Construction precomputes the
/// schedule-independent pieces (renewable injections per scenario-hour, the
/// reliability term F2, per-bus base demands), so evaluate() is cheap enough
/// to sit inside a metaheuristic and is safe to call from several threads.
class DispatchEvaluator {
public:
    DispatchEvaluator(const NetworkModel& net, const Fleet& fleet,
                      const ScenarioSet& scen, const Prices& prices,
                      const Weights& weights, double penalty_coefficient,
                      const ReliabilityOptions& rel_opts = {},
                      const Eigen::VectorXd& t_cell_profile = {});

    EvalDetail evaluate(const DispatchSchedule& s) const;

    /// COA-facing objective over the flattened decision vector.
    double operator()(const Eigen::VectorXd& flat) const;

    double f2() const { return f2_; }
    const ReliabilityReport& reliability() const { return reliability_; }
    const NetworkModel& network() const { return net_; }
    const Fleet& fleet() const { return fleet_; }
    const ScenarioSet& scenarios() const { return scen_; }
    const Prices& prices() const { return prices_; }
    const Weights& weights() const { return weights_; }
    double penalty_coefficient() const { return penalty_coefficient_; }
    const Eigen::VectorXd& t_cell_profile() const { return t_cell_profile_; }

    /// Per-scenario renewable energy totals (kWh over the day).
    Eigen::VectorXd scenario_wt_energy_kwh() const;
    Eigen::VectorXd scenario_pv_energy_kwh() const;

private:
    const NetworkModel& net_;
    const Fleet& fleet_;
    const ScenarioSet& scen_;
    Prices prices_;
    Weights weights_;
    double penalty_coefficient_;
    ReliabilityReport reliability_;
    double f2_ = 0.0;
    Eigen::VectorXd t_cell_profile_;

    // precomputed per scenario: base demand with renewables netted off, and
    // the renewable production/O&M that does not depend on the schedule
    std::vector<Eigen::MatrixXd> base_demand_p_;  // [scenario](bus, hour), kW
    std::vector<Eigen::MatrixXd> base_demand_q_;
    std::vector<Eigen::MatrixXd> wt_output_;  // [scenario](hour, n_wt)
    std::vector<Eigen::MatrixXd> pv_output_;
    double renewable_om_expected_ = 0.0;  // $ per day, scenario-weighted
    std::vector<int> chp_bus_index_;
    std::vector<int> ess_bus_index_;
};

/// F1 of a schedule: scenario-expected fuel + O&M + emission + losses.
double evaluate_F1(const DispatchSchedule& s, const ScenarioSet& scen,
                   const NetworkModel& net, const Fleet& fleet,
                   const Prices& prices);

/// Full weighted objective including the reliability term and the exterior
/// penalty for constraint violations.
CostBreakdown fitness(const DispatchSchedule& s, const ScenarioSet& scen,
                      const NetworkModel& net, const Fleet& fleet,
                      const Weights& weights, const Prices& prices,
                      double penalty_coefficient = 1e6,
                      const ReliabilityOptions& rel_opts = {});

/// Weighted-total assembly shared by every evaluation path.
CostBreakdown combine_objective(double fuel, double om, double emission,
                                double losses, double interruption,
                                const Weights& weights, double penalty);

}  // namespace mgd

#pragma once

#include <Eigen/Dense>

#include "mgd/network.hpp"

namespace mgd {

struct PowerFlowOptions {
    double tol_v_pu = 1e-6;        // max voltage change between sweeps
    double tol_residual_pu = 1e-6; // max branch power-balance violation
    int max_iterations = 100;
};

/// Converged state of one backward-forward sweep. Branch flows are
/// sending-end quantities; demands are the effective per-bus consumptions the
/// case was solved with (nominal load minus injection), kept so the solution
/// can be audited against the branch-flow balance on its own.
struct PowerFlowSolution {
    Eigen::VectorXd v_pu;           // per bus, ascending bus-id order
    Eigen::VectorXd branch_p_kw;    // per branch, ascending branch-id order
    Eigen::VectorXd branch_q_kvar;
    Eigen::VectorXd demand_p_kw;
    Eigen::VectorXd demand_q_kvar;
    double losses_kw = 0.0;
    double slack_p_kw = 0.0;  // grid import (+) / export (-)
    double slack_q_kvar = 0.0;
    bool converged = false;
    int iterations = 0;
    double s_base_kva = 0.0;
};

/// Backward-forward sweep with the substation held at 1.0 pu. Injections are
/// added on top of the nominal bus loads stored in the model, so the
/// effective demand at a bus is p_load_kw - inj_p_kw. Divergence yields
/// converged = false, not an exception.
PowerFlowSolution run_power_flow(const NetworkModel& net,
                                 const Eigen::VectorXd& inj_p_kw,
                                 const Eigen::VectorXd& inj_q_kvar,
                                 const PowerFlowOptions& opts = {});

/// Same solver on absolute per-bus demands (kW / kVAr, positive = consumption).
PowerFlowSolution solve_demands(const NetworkModel& net,
                                const Eigen::VectorXd& demand_p_kw,
                                const Eigen::VectorXd& demand_q_kvar,
                                const PowerFlowOptions& opts = {});

/// sum over branches of (P^2 + Q^2) R / V^2, priced per kWh over dt hours.
double losses_cost(const PowerFlowSolution& sol, double price_per_kwh, double dt_h);

/// Largest absolute branch-flow balance violation (real or reactive), pu.
double distflow_residual(const NetworkModel& net, const PowerFlowSolution& sol);

/// Voltage magnitudes in ascending bus-id order.
Eigen::VectorXd voltage_profile(const PowerFlowSolution& sol);

}  // namespace mgd

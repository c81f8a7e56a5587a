#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mgd/errors.hpp"
#include "mgd/stochastic.hpp"

namespace mgd {

/// Polynomial emission expense: e_a + e_b p + e_c p^2 + e_zeta exp(e_lambda p).
struct EmissionCoeffs {
    double e_a = 0.0;
    double e_b = 0.0;
    double e_c = 0.0;
    double e_zeta = 0.0;
    double e_lambda = 0.0;  // 1/kW
};

struct ChpParams {
    double theta = 0.0;   // fuel-rate curve, quadratic term
    double varrho = 0.0;  // linear term
    double gamma = 0.0;   // constant term
    double gas_price = 0.0;         // $ per unit fuel energy
    double elec_eff = 1.0;          // electric conversion efficiency
    double thermal_price = 0.0;     // $ per kWh of heat sold
    double heat_to_electric = 0.0;  // heat output per unit electric output
    double p_min_kw = 0.0;
    double p_max_kw = 0.0;
    double k_om = 0.0;  // $/kWh
    EmissionCoeffs emission;
    int bus_id = 0;

    void validate() const;
};

struct EssParams {
    double eta_ch = 1.0;
    double eta_dis = 1.0;
    double soc_min_kwh = 0.0;
    double soc_max_kwh = 0.0;
    double soc_init_kwh = 0.0;
    double p_ch_max_kw = 0.0;
    double p_dis_max_kw = 0.0;
    double k_om = 0.0;  // $/kWh of throughput
    int bus_id = 0;

    void validate() const;
};

struct WtUnit {
    WtParams curve;
    double k_om = 0.0;  // $/kWh
    int bus_id = 0;
};

struct PvUnit {
    PvParams panel;
    double k_om = 0.0;  // $/kWh
    int bus_id = 0;
};

/// All controllable and renewable units on the feeder.
struct Fleet {
    std::vector<WtUnit> wt;
    std::vector<PvUnit> pv;
    std::vector<ChpParams> chp;
    std::vector<EssParams> ess;

    void validate() const;
};

/// The decision variables: hourly CHP setpoints and signed ESS powers
/// (positive = discharge, negative = charge). Grid exchange is implied by
/// the slack bus and is not part of the vector.
struct DispatchSchedule {
    Eigen::MatrixXd chp_p;  // hours x n_chp, kW
    Eigen::MatrixXd ess_p;  // hours x n_ess, kW signed

    int horizon() const { return static_cast<int>(chp_p.rows()); }

    Eigen::VectorXd flatten() const;
    static DispatchSchedule unflatten(const Eigen::VectorXd& x, int horizon,
                                      int n_chp, int n_ess);
    static DispatchSchedule zeros(int horizon, int n_chp, int n_ess);
};

/// Box bounds of the flattened decision vector for a fleet.
std::pair<Eigen::VectorXd, Eigen::VectorXd> schedule_bounds(const Fleet& fleet,
                                                            int horizon);

}  // namespace mgd

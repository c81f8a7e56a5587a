#include "mgd/costs.hpp"

#include <cmath>

namespace mgd {

double chp_fuel_rate(double p_kw, const ChpParams& c) {
    if (!(p_kw >= 0.0)) throw InvalidInput("chp_fuel_rate: power must be >= 0");
    return c.theta * p_kw * p_kw + c.varrho * p_kw + c.gamma;
}

double chp_fuel_cost(double p_kw, const ChpParams& c, double dt_h) {
    if (!(p_kw >= 0.0)) throw InvalidInput("chp_fuel_cost: power must be >= 0");
    return (c.gas_price * p_kw / c.elec_eff -
            c.thermal_price * c.heat_to_electric * p_kw) * dt_h;
}

double om_cost(double p_kw, double k_om, double dt_h) {
    return k_om * p_kw * dt_h;
}

double emission_cost(double p_kw, const EmissionCoeffs& e) {
    return e.e_a + e.e_b * p_kw + e.e_c * p_kw * p_kw +
           e.e_zeta * std::exp(e.e_lambda * p_kw);
}

double ess_step(double soc_kwh, double p_ch_kw, double p_dis_kw,
                const EssParams& e, double dt_h) {
    if (p_ch_kw < 0.0 || p_dis_kw < 0.0) {
        throw InvalidInput("ess_step: charge and discharge powers must be >= 0");
    }
    if (p_ch_kw > 0.0 && p_dis_kw > 0.0) {
        throw InvalidInput("ess_step: simultaneous charge and discharge");
    }
    return soc_kwh + e.eta_ch * p_ch_kw * dt_h - p_dis_kw * dt_h / e.eta_dis;
}

std::vector<Violation> check_constraints(const DispatchSchedule& s,
                                         const Fleet& fleet,
                                         const std::vector<PowerFlowSolution>& sols) {
    const int h = s.horizon();
    if (s.chp_p.cols() != static_cast<Eigen::Index>(fleet.chp.size()) ||
        s.ess_p.cols() != static_cast<Eigen::Index>(fleet.ess.size()) ||
        s.ess_p.rows() != h) {
        throw InvalidInput("check_constraints: schedule shape does not match the fleet");
    }
    std::vector<Violation> out;

    for (size_t c = 0; c < fleet.chp.size(); ++c) {
        const ChpParams& u = fleet.chp[c];
        for (int t = 0; t < h; ++t) {
            const double p = s.chp_p(t, static_cast<int>(c));
            if (p > u.p_max_kw) {
                out.push_back({"chp" + std::to_string(c) + "_upper", t, p - u.p_max_kw});
            } else if (p < u.p_min_kw) {
                out.push_back({"chp" + std::to_string(c) + "_lower", t, u.p_min_kw - p});
            }
        }
    }

    for (size_t e = 0; e < fleet.ess.size(); ++e) {
        const EssParams& u = fleet.ess[e];
        double soc = u.soc_init_kwh;
        for (int t = 0; t < h; ++t) {
            const double p = s.ess_p(t, static_cast<int>(e));
            if (p > u.p_dis_max_kw) {
                out.push_back({"ess" + std::to_string(e) + "_power_upper", t,
                               p - u.p_dis_max_kw});
            } else if (p < -u.p_ch_max_kw) {
                out.push_back({"ess" + std::to_string(e) + "_power_lower", t,
                               -u.p_ch_max_kw - p});
            }
            soc = ess_step(soc, p < 0.0 ? -p : 0.0, p > 0.0 ? p : 0.0, u, 1.0);
            if (soc > u.soc_max_kwh) {
                out.push_back({"ess" + std::to_string(e) + "_soc_upper", t,
                               soc - u.soc_max_kwh});
            } else if (soc < u.soc_min_kwh) {
                out.push_back({"ess" + std::to_string(e) + "_soc_lower", t,
                               u.soc_min_kwh - soc});
            }
        }
    }

    // slack balance self-check; zero by construction for converged solutions
    for (size_t t = 0; t < sols.size(); ++t) {
        const PowerFlowSolution& sol = sols[t];
        if (!sol.converged) {
            out.push_back({"powerflow_nonconverged", static_cast<int>(t), 1.0});
            continue;
        }
        const double balance = sol.slack_p_kw - sol.demand_p_kw.sum() - sol.losses_kw;
        if (std::abs(balance) > 1e-6 * sol.s_base_kva) {
            out.push_back({"balance", static_cast<int>(t), std::abs(balance)});
        }
    }
    return out;
}

Eigen::VectorXd aggregate_periods(const Eigen::VectorXd& hourly, int period_len) {
    const int h = static_cast<int>(hourly.size());
    if (period_len < 1 || h % period_len != 0) {
        throw InvalidParameter("aggregate_periods: period length must divide the horizon");
    }
    const int periods = h / period_len;
    Eigen::VectorXd out(periods);
    for (int p = 0; p < periods; ++p) {
        out(p) = hourly.segment(p * period_len, period_len).mean();
    }
    return out;
}

std::map<int, double> renewable_penetration(const NetworkModel& net,
                                            const Fleet& fleet,
                                            const ScenarioSet& scen,
                                            const Eigen::VectorXd& t_cell_profile) {
    std::map<int, double> renewable_kwh;
    std::map<int, double> demand_kwh;

    for (size_t b = 0; b < net.buses.size(); ++b) {
        const Bus& bus = net.buses[b];
        if (bus.mg_zone <= 0) continue;
        double expected = 0.0;
        for (const Scenario& s : scen.scenarios) {
            for (int t = 0; t < scen.horizon; ++t) {
                expected += s.probability * s.multiplier(t, static_cast<int>(b));
            }
        }
        demand_kwh[bus.mg_zone] += bus.p_load_kw * expected;
        renewable_kwh[bus.mg_zone] += 0.0;
    }
    for (const auto& u : fleet.wt) {
        const int zone = net.buses[net.bus_index(u.bus_id)].mg_zone;
        if (zone <= 0) continue;
        for (const Scenario& s : scen.scenarios) {
            for (int t = 0; t < scen.horizon; ++t) {
                renewable_kwh[zone] += s.probability * wt_power(s.wind_speed(t), u.curve);
            }
        }
    }
    for (const auto& u : fleet.pv) {
        const int zone = net.buses[net.bus_index(u.bus_id)].mg_zone;
        if (zone <= 0) continue;
        for (const Scenario& s : scen.scenarios) {
            for (int t = 0; t < scen.horizon; ++t) {
                const double t_cell = t_cell_profile.size() == scen.horizon
                                          ? t_cell_profile(t)
                                          : u.panel.t_cell_c;
                renewable_kwh[zone] +=
                    s.probability * pv_power(s.irradiance(t), u.panel, t_cell);
            }
        }
    }

    std::map<int, double> rep;
    for (const auto& [zone, demand] : demand_kwh) {
        if (!(demand > 0.0)) {
            throw UndefinedMetric("renewable_penetration: zone " + std::to_string(zone) +
                                  " has zero demand");
        }
        rep[zone] = renewable_kwh[zone] / demand;
    }
    return rep;
}

CostBreakdown combine_objective(double fuel, double om, double emission,
                                double losses, double interruption,
                                const Weights& weights, double penalty) {
    CostBreakdown c;
    c.fuel = fuel;
    c.om = om;
    c.emission = emission;
    c.losses = losses;
    c.interruption = interruption;
    c.penalty = penalty;
    c.z = weights.h1 * c.f1() + weights.h2 * interruption + penalty;
    return c;
}

DispatchEvaluator::DispatchEvaluator(const NetworkModel& net, const Fleet& fleet,
                                     const ScenarioSet& scen, const Prices& prices,
                                     const Weights& weights,
                                     double penalty_coefficient,
                                     const ReliabilityOptions& rel_opts,
                                     const Eigen::VectorXd& t_cell_profile)
    : net_(net), fleet_(fleet), scen_(scen), prices_(prices), weights_(weights),
      penalty_coefficient_(penalty_coefficient), t_cell_profile_(t_cell_profile) {
    fleet_.validate();
    scen_.validate();
    if (prices_.grid_buy.size() != scen_.horizon) {
        throw InvalidParameter("DispatchEvaluator: grid_buy must have one price per hour");
    }

    ReliabilityOptions ro = rel_opts;
    ro.c_int = prices_.c_int;
    ro.h_c = weights_.h_c;
    reliability_ = evaluate_reliability(net_, fleet_, scen_, ro, t_cell_profile);
    f2_ = reliability_.f2;

    const int n_bus = static_cast<int>(net_.buses.size());
    const int h = scen_.horizon;
    const int n_scen = static_cast<int>(scen_.scenarios.size());

    for (const auto& u : fleet_.chp) chp_bus_index_.push_back(net_.bus_index(u.bus_id));
    for (const auto& u : fleet_.ess) ess_bus_index_.push_back(net_.bus_index(u.bus_id));

    base_demand_p_.resize(n_scen);
    base_demand_q_.resize(n_scen);
    wt_output_.resize(n_scen);
    pv_output_.resize(n_scen);
    for (int si = 0; si < n_scen; ++si) {
        const Scenario& s = scen_.scenarios[si];
        Eigen::MatrixXd dp(n_bus, h), dq(n_bus, h);
        for (int b = 0; b < n_bus; ++b) {
            for (int t = 0; t < h; ++t) {
                const double m = s.multiplier(t, b);
                dp(b, t) = net_.buses[b].p_load_kw * m;
                dq(b, t) = net_.buses[b].q_load_kvar * m;
            }
        }
        Eigen::MatrixXd wt(h, fleet_.wt.size()), pv(h, fleet_.pv.size());
        for (size_t w = 0; w < fleet_.wt.size(); ++w) {
            const int b = net_.bus_index(fleet_.wt[w].bus_id);
            for (int t = 0; t < h; ++t) {
                const double p = wt_power(s.wind_speed(t), fleet_.wt[w].curve);
                wt(t, static_cast<int>(w)) = p;
                dp(b, t) -= p;
                renewable_om_expected_ += s.probability * fleet_.wt[w].k_om * p;
            }
        }
        for (size_t v = 0; v < fleet_.pv.size(); ++v) {
            const int b = net_.bus_index(fleet_.pv[v].bus_id);
            for (int t = 0; t < h; ++t) {
                const double t_cell = t_cell_profile.size() == h
                                          ? t_cell_profile(t)
                                          : fleet_.pv[v].panel.t_cell_c;
                const double p = pv_power(s.irradiance(t), fleet_.pv[v].panel, t_cell);
                pv(t, static_cast<int>(v)) = p;
                dp(b, t) -= p;
                renewable_om_expected_ += s.probability * fleet_.pv[v].k_om * p;
            }
        }
        base_demand_p_[si] = std::move(dp);
        base_demand_q_[si] = std::move(dq);
        wt_output_[si] = std::move(wt);
        pv_output_[si] = std::move(pv);
    }
}

EvalDetail DispatchEvaluator::evaluate(const DispatchSchedule& s) const {
    const int h = scen_.horizon;
    const int n_bus = static_cast<int>(net_.buses.size());
    const int n_scen = static_cast<int>(scen_.scenarios.size());
    const double dt = 1.0;
    if (s.horizon() != h) {
        throw InvalidInput("DispatchEvaluator: schedule horizon does not match scenarios");
    }

    EvalDetail d;
    d.violations = check_constraints(s, fleet_);
    d.hourly_losses_kw = Eigen::VectorXd::Zero(h);
    d.expected_wt_kw = Eigen::MatrixXd::Zero(h, fleet_.wt.size());
    d.expected_pv_kw = Eigen::MatrixXd::Zero(h, fleet_.pv.size());

    // schedule-dependent device costs are scenario independent
    double chp_fuel = 0.0, chp_om = 0.0, chp_emission = 0.0, ess_om = 0.0;
    for (size_t c = 0; c < fleet_.chp.size(); ++c) {
        for (int t = 0; t < h; ++t) {
            const double p = std::max(s.chp_p(t, static_cast<int>(c)), 0.0);
            chp_fuel += chp_fuel_cost(p, fleet_.chp[c], dt);
            chp_om += om_cost(p, fleet_.chp[c].k_om, dt);
            chp_emission += emission_cost(p, fleet_.chp[c].emission) * dt;
            d.chp_fuel_units += chp_fuel_rate(p, fleet_.chp[c]) * dt;
        }
    }
    for (size_t e = 0; e < fleet_.ess.size(); ++e) {
        for (int t = 0; t < h; ++t) {
            ess_om += om_cost(std::abs(s.ess_p(t, static_cast<int>(e))),
                              fleet_.ess[e].k_om, dt);
        }
    }
    d.chp_fuel_cost_total = chp_fuel;

    double losses_cost_total = 0.0;
    Eigen::VectorXd dp(n_bus), dq(n_bus);
    for (int si = 0; si < n_scen; ++si) {
        const double prob = scen_.scenarios[si].probability;
        d.expected_wt_kw += prob * wt_output_[si];
        d.expected_pv_kw += prob * pv_output_[si];
        for (int t = 0; t < h; ++t) {
            dp = base_demand_p_[si].col(t);
            dq = base_demand_q_[si].col(t);
            for (size_t c = 0; c < fleet_.chp.size(); ++c) {
                dp(chp_bus_index_[c]) -= s.chp_p(t, static_cast<int>(c));
            }
            for (size_t e = 0; e < fleet_.ess.size(); ++e) {
                dp(ess_bus_index_[e]) -= s.ess_p(t, static_cast<int>(e));
            }
            const PowerFlowSolution sol = solve_demands(net_, dp, dq);
            if (!sol.converged) {
                ++d.n_nonconverged;
                continue;
            }
            d.min_voltage_pu = std::min(d.min_voltage_pu, sol.v_pu.minCoeff());
            d.hourly_losses_kw(t) += prob * sol.losses_kw;
            d.losses_kwh += prob * sol.losses_kw * dt;
            losses_cost_total += prob * losses_cost(sol, prices_.c_ploss, dt);
            if (sol.slack_p_kw >= 0.0) {
                d.grid_import_kwh += prob * sol.slack_p_kw * dt;
                d.grid_purchase_cost += prob * sol.slack_p_kw * dt * prices_.grid_buy(t);
            } else {
                d.grid_export_kwh += prob * (-sol.slack_p_kw) * dt;
                d.grid_sale_credit += prob * (-sol.slack_p_kw) * dt * prices_.grid_sell;
            }
        }
    }

    double penalty = 0.0;
    for (const Violation& v : d.violations) penalty += penalty_coefficient_ * v.magnitude;
    penalty += penalty_coefficient_ * d.n_nonconverged;

    const double fuel = chp_fuel + d.grid_purchase_cost - d.grid_sale_credit;
    const double om = chp_om + ess_om + renewable_om_expected_;
    d.cost = combine_objective(fuel, om, chp_emission, losses_cost_total, f2_,
                               weights_, penalty);
    return d;
}

Eigen::VectorXd DispatchEvaluator::scenario_wt_energy_kwh() const {
    Eigen::VectorXd out(wt_output_.size());
    for (size_t si = 0; si < wt_output_.size(); ++si) out(si) = wt_output_[si].sum();
    return out;
}

Eigen::VectorXd DispatchEvaluator::scenario_pv_energy_kwh() const {
    Eigen::VectorXd out(pv_output_.size());
    for (size_t si = 0; si < pv_output_.size(); ++si) out(si) = pv_output_[si].sum();
    return out;
}

double DispatchEvaluator::operator()(const Eigen::VectorXd& flat) const {
    const DispatchSchedule s = DispatchSchedule::unflatten(
        flat, scen_.horizon, static_cast<int>(fleet_.chp.size()),
        static_cast<int>(fleet_.ess.size()));
    return evaluate(s).cost.z;
}

double evaluate_F1(const DispatchSchedule& s, const ScenarioSet& scen,
                   const NetworkModel& net, const Fleet& fleet,
                   const Prices& prices) {
    const DispatchEvaluator eval(net, fleet, scen, prices, Weights{}, 1e6);
    const EvalDetail d = eval.evaluate(s);
    if (d.n_nonconverged > 0) {
        throw InvalidState("evaluate_F1: a per-hour power flow did not converge");
    }
    return d.cost.f1();
}

CostBreakdown fitness(const DispatchSchedule& s, const ScenarioSet& scen,
                      const NetworkModel& net, const Fleet& fleet,
                      const Weights& weights, const Prices& prices,
                      double penalty_coefficient,
                      const ReliabilityOptions& rel_opts) {
    const DispatchEvaluator eval(net, fleet, scen, prices, weights,
                                 penalty_coefficient, rel_opts);
    return eval.evaluate(s).cost;
}

}  // namespace mgd

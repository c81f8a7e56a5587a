#include <doctest.h>

#include <cmath>

#include "mgd/costs.hpp"

using namespace mgd;

namespace {

Bus bus(int id, double p = 0.0, double q = 0.0, int zone = 0) {
    Bus b;
    b.id = id;
    b.p_load_kw = p;
    b.q_load_kvar = q;
    b.mg_zone = zone;
    return b;
}

ChpParams toy_chp(int bus_id) {
    ChpParams c;
    c.bus_id = bus_id;
    c.theta = 0.01;
    c.varrho = 1.0;
    c.gamma = 5.0;
    c.gas_price = 0.5;
    c.elec_eff = 0.4;
    c.thermal_price = 0.05;
    c.heat_to_electric = 1.2;
    c.p_min_kw = 0.0;
    c.p_max_kw = 150.0;
    c.k_om = 0.02;
    c.emission = EmissionCoeffs{0.0, 0.1, 0.001, 0.5, 0.01};
    return c;
}

/// single-bus network, one CHP carrying the whole 100 kW load for one hour
struct Toy {
    NetworkModel net;
    Fleet fleet;
    ScenarioSet scen;
    Prices prices;
};

Toy make_toy() {
    Toy t;
    t.net = make_network({bus(1, 100.0)}, {}, 1, 1.0, 1000.0);
    t.fleet.chp.push_back(toy_chp(1));
    Scenario s;
    s.probability = 1.0;
    s.wind_speed = Eigen::VectorXd::Zero(1);
    s.irradiance = Eigen::VectorXd::Zero(1);
    s.load_multiplier = Eigen::MatrixXd::Constant(1, 1, 1.0);
    t.scen.scenarios.push_back(s);
    t.scen.horizon = 1;
    t.prices.grid_buy = Eigen::VectorXd::Constant(1, 0.12);
    t.prices.grid_sell = 0.05;
    t.prices.c_ploss = 1.0;
    return t;
}

DispatchSchedule toy_schedule(double p_chp) {
    DispatchSchedule s = DispatchSchedule::zeros(1, 1, 0);
    s.chp_p(0, 0) = p_chp;
    return s;
}

}  // namespace

TEST_SUITE("costs") {

TEST_CASE("chp fuel rate polynomial") {
    const ChpParams c = toy_chp(1);
    CHECK(chp_fuel_rate(10.0, c) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(chp_fuel_rate(0.0, c) == doctest::Approx(5.0).epsilon(1e-12));
    ChpParams linear = c;
    linear.theta = 0.0;
    linear.gamma = 0.0;
    CHECK(chp_fuel_rate(20.0, linear) == doctest::Approx(2.0 * chp_fuel_rate(10.0, linear)));
    CHECK_THROWS_AS(chp_fuel_rate(-1.0, c), InvalidInput);
}

TEST_CASE("chp fuel cost with thermal revenue") {
    const ChpParams c = toy_chp(1);
    CHECK(chp_fuel_cost(100.0, c, 1.0) == doctest::Approx(119.0).epsilon(1e-9));
    CHECK(chp_fuel_cost(0.0, c, 1.0) == 0.0);
    ChpParams no_heat = c;
    no_heat.thermal_price = 0.0;
    CHECK(chp_fuel_cost(100.0, no_heat, 1.0) ==
          doctest::Approx(0.5 * 100.0 / 0.4).epsilon(1e-12));
}

TEST_CASE("om cost") {
    CHECK(om_cost(100.0, 0.02, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(om_cost(0.0, 0.02, 1.0) == 0.0);
    CHECK(om_cost(100.0, 0.02, 2.0) == doctest::Approx(2.0 * om_cost(100.0, 0.02, 1.0)));
}

TEST_CASE("emission cost") {
    CHECK(emission_cost(123.0, EmissionCoeffs{2.0, 0.0, 0.0, 0.0, 0.0}) == 2.0);
    const EmissionCoeffs e{0.0, 0.1, 0.001, 0.5, 0.01};
    const double expected = 10.0 + 10.0 + 0.5 * std::exp(1.0);
    CHECK(emission_cost(100.0, e) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(emission_cost(100.0, e) == doctest::Approx(21.3591).epsilon(1e-5));
    CHECK(emission_cost(0.0, EmissionCoeffs{1.0, 0.5, 0.5, 2.0, 3.0}) ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("ess soc transitions") {
    EssParams e;
    e.eta_ch = 0.9;
    e.eta_dis = 0.9;
    e.soc_min_kwh = 0.0;
    e.soc_max_kwh = 100.0;
    e.soc_init_kwh = 50.0;
    CHECK(ess_step(50.0, 10.0, 0.0, e, 1.0) == doctest::Approx(59.0).epsilon(1e-12));
    CHECK(ess_step(50.0, 0.0, 0.0, e, 1.0) == 50.0);
    CHECK(ess_step(50.0, 0.0, 9.0, e, 1.0) == doctest::Approx(40.0).epsilon(1e-12));
    CHECK_THROWS_AS(ess_step(50.0, 1.0, 1.0, e, 1.0), InvalidInput);
    CHECK_THROWS_AS(ess_step(50.0, -1.0, 0.0, e, 1.0), InvalidInput);

    // round trip loses exactly 1 - eta_ch * eta_dis of the energy moved
    const double charged = ess_step(50.0, 10.0, 0.0, e, 1.0);
    const double stored = charged - 50.0;
    const double back = stored * e.eta_dis;  // deliverable energy
    CHECK(back / 10.0 == doctest::Approx(e.eta_ch * e.eta_dis).epsilon(1e-12));
}

TEST_CASE("constraint checks") {
    Fleet fleet;
    fleet.chp.push_back(toy_chp(1));
    EssParams e;
    e.bus_id = 1;
    e.eta_ch = 0.9;
    e.eta_dis = 0.9;
    e.soc_min_kwh = 10.0;
    e.soc_max_kwh = 100.0;
    e.soc_init_kwh = 50.0;
    e.p_ch_max_kw = 50.0;
    e.p_dis_max_kw = 50.0;
    fleet.ess.push_back(e);

    DispatchSchedule ok = DispatchSchedule::zeros(6, 1, 1);
    ok.chp_p.setConstant(100.0);
    CHECK(check_constraints(ok, fleet).empty());

    DispatchSchedule over = ok;
    over.chp_p(3, 0) = fleet.chp[0].p_max_kw + 10.0;
    const auto report = check_constraints(over, fleet);
    REQUIRE(report.size() == 1);
    CHECK(report[0].hour == 3);
    CHECK(report[0].magnitude == doctest::Approx(10.0).epsilon(1e-12));

    // charging that overflows the store at hour 5
    DispatchSchedule charge = ok;
    for (int t = 0; t < 6; ++t) charge.ess_p(t, 0) = -20.0;  // +18 kWh per hour
    const auto soc_report = check_constraints(charge, fleet);
    REQUIRE(!soc_report.empty());
    // 50 + 18 t > 100 first at t = 2 (hour index 2)
    CHECK(soc_report[0].constraint == "ess0_soc_upper");
    CHECK(soc_report[0].hour == 2);
    CHECK(soc_report[0].magnitude == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("evaluate_F1 composes the device examples") {
    const Toy t = make_toy();
    const double f1 = evaluate_F1(toy_schedule(100.0), t.scen, t.net, t.fleet, t.prices);
    const double expected = 119.0 + 2.0 + (10.0 + 10.0 + 0.5 * std::exp(1.0));
    CHECK(f1 == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("expectation collapses for duplicated scenarios") {
    Toy t = make_toy();
    const double single = evaluate_F1(toy_schedule(80.0), t.scen, t.net, t.fleet, t.prices);
    Scenario copy = t.scen.scenarios[0];
    copy.probability = 0.5;
    t.scen.scenarios[0].probability = 0.5;
    t.scen.scenarios.push_back(copy);
    const double split = evaluate_F1(toy_schedule(80.0), t.scen, t.net, t.fleet, t.prices);
    CHECK(split == doctest::Approx(single).epsilon(1e-12));
}

TEST_CASE("fitness weighting and penalties") {
    const Weights w{1.0, 1.0, 1.0};
    const CostBreakdown c = combine_objective(2.0, 1.0, 1.0, 1.0, 3.0, w, 0.0);
    CHECK(c.f1() == doctest::Approx(5.0));
    CHECK(c.z == doctest::Approx(8.0).epsilon(1e-12));

    const Weights only_f1{1.0, 0.0, 1.0};
    CHECK(combine_objective(2.0, 1.0, 1.0, 1.0, 3.0, only_f1, 0.0).z ==
          doctest::Approx(5.0).epsilon(1e-12));

    // z is monotone in each component
    const CostBreakdown base = combine_objective(1, 1, 1, 1, 1, w, 1);
    CHECK(combine_objective(2, 1, 1, 1, 1, w, 1).z >= base.z);
    CHECK(combine_objective(1, 2, 1, 1, 1, w, 1).z >= base.z);
    CHECK(combine_objective(1, 1, 2, 1, 1, w, 1).z >= base.z);
    CHECK(combine_objective(1, 1, 1, 2, 1, w, 1).z >= base.z);
    CHECK(combine_objective(1, 1, 1, 1, 2, w, 1).z >= base.z);
    CHECK(combine_objective(1, 1, 1, 1, 1, w, 2).z >= base.z);
}

TEST_CASE("one bound violation adds exactly the scaled penalty") {
    const Toy t = make_toy();
    const double c_pen = 1e6;
    const DispatchEvaluator eval(t.net, t.fleet, t.scen, t.prices, Weights{}, c_pen);

    const double m = 12.5;
    const EvalDetail bad = eval.evaluate(toy_schedule(t.fleet.chp[0].p_max_kw + m));
    CHECK(bad.cost.penalty == doctest::Approx(c_pen * m).epsilon(1e-12));
    const double z_without_penalty = bad.cost.f1() + bad.cost.interruption;
    CHECK(bad.cost.z - z_without_penalty == doctest::Approx(c_pen * m).epsilon(1e-9));

    const EvalDetail good = eval.evaluate(toy_schedule(100.0));
    CHECK(good.cost.penalty == 0.0);
}

TEST_CASE("grid exchange is billed through the fuel bucket") {
    const Toy t = make_toy();
    const DispatchEvaluator eval(t.net, t.fleet, t.scen, t.prices, Weights{}, 1e6);

    // half the load from the CHP, half bought from the grid at 0.12
    const EvalDetail d = eval.evaluate(toy_schedule(50.0));
    CHECK(d.grid_import_kwh == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(d.grid_purchase_cost == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(d.cost.fuel ==
          doctest::Approx(chp_fuel_cost(50.0, t.fleet.chp[0], 1.0) + 6.0).epsilon(1e-9));

    // overdriving the CHP exports at the sell tariff
    const EvalDetail e = eval.evaluate(toy_schedule(150.0));
    CHECK(e.grid_export_kwh == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(e.grid_sale_credit == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("renewable penetration per zone") {
    NetworkModel net = make_network({bus(1), bus(2, 100.0, 0.0, 1)},
                                    {Branch{1, 1, 2, 0.01, 0.01, 1.0, 0.0, false}},
                                    1, 1.0, 1000.0);
    Fleet fleet;
    WtUnit wt;
    wt.curve = make_wt_params(250.0, 2.0, 14.0, 25.0);
    wt.bus_id = 2;
    fleet.wt.push_back(wt);

    ScenarioSet scen;
    scen.horizon = 1;
    Scenario s;
    s.probability = 1.0;
    s.wind_speed = Eigen::VectorXd::Constant(1, 20.0);  // rated output
    s.irradiance = Eigen::VectorXd::Zero(1);
    s.load_multiplier = Eigen::MatrixXd::Constant(1, 1, 1.0);
    scen.scenarios.push_back(s);

    auto rep = renewable_penetration(net, fleet, scen);
    CHECK(rep.at(1) == doctest::Approx(2.5).epsilon(1e-12));  // 250 kWh over 100 kWh

    // zero renewables
    Fleet none;
    auto rep0 = renewable_penetration(net, none, scen);
    CHECK(rep0.at(1) == 0.0);

    // renewables equal demand
    scen.scenarios[0].wind_speed(0) = 8.0;
    const double out = wt_power(8.0, wt.curve);
    net.buses[net.bus_index(2)].p_load_kw = out;
    auto rep1 = renewable_penetration(net, fleet, scen);
    CHECK(rep1.at(1) == doctest::Approx(1.0).epsilon(1e-12));

    // zero demand is undefined
    net.buses[net.bus_index(2)].p_load_kw = 0.0;
    CHECK_THROWS_AS(renewable_penetration(net, fleet, scen), UndefinedMetric);
}

TEST_CASE("period aggregation") {
    Eigen::VectorXd hourly(24);
    for (int i = 0; i < 24; ++i) hourly(i) = i + 1;
    const Eigen::VectorXd periods = aggregate_periods(hourly, 3);
    REQUIRE(periods.size() == 8);
    const double expected[] = {2, 5, 8, 11, 14, 17, 20, 23};
    for (int p = 0; p < 8; ++p) CHECK(periods(p) == doctest::Approx(expected[p]));

    const Eigen::VectorXd flat = aggregate_periods(Eigen::VectorXd::Constant(24, 7.0), 4);
    for (int p = 0; p < flat.size(); ++p) CHECK(flat(p) == 7.0);

    CHECK_THROWS_AS(aggregate_periods(hourly, 5), InvalidParameter);
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "mgd/reliability.hpp"

using namespace mgd;

namespace {

Bus bus(int id, double p = 0.0, int zone = 0) {
    Bus b;
    b.id = id;
    b.p_load_kw = p;
    b.q_load_kvar = 0.3 * p;
    b.mg_zone = zone;
    return b;
}

Branch branch(int id, int from, int to, double lambda = 0.1, double len = 1.0,
              bool sectionalizer = false) {
    Branch b;
    b.id = id;
    b.from_bus = from;
    b.to_bus = to;
    b.r_ohm = 0.01;
    b.x_ohm = 0.01;
    b.length_km = len;
    b.failures_per_km_yr = lambda;
    b.has_sectionalizer = sectionalizer;
    return b;
}

ScenarioSet flat_scenarios(int horizon, int n_buses, double mult = 1.0) {
    ScenarioSet set;
    set.horizon = horizon;
    Scenario s;
    s.probability = 1.0;
    s.wind_speed = Eigen::VectorXd::Zero(horizon);
    s.irradiance = Eigen::VectorXd::Zero(horizon);
    s.load_multiplier = Eigen::MatrixXd::Constant(horizon, 1, mult);
    set.scenarios.push_back(s);
    (void)n_buses;
    return set;
}

/// Exhaustive oracle: sever the branch, find connected components by
/// edge-list BFS (no tree structure assumed), apply the restoration rule to
/// the component without the substation, sum loads.
struct OraclePartition {
    double restored;
    double unrestored;
};

OraclePartition oracle_partition(const NetworkModel& net,
                                 const Eigen::VectorXd& supply, int branch_id) {
    const int n = static_cast<int>(net.buses.size());
    // adjacency without the faulted branch
    std::vector<std::vector<int>> adj(n);
    bool sectionalizer = false;
    for (const Branch& b : net.branches) {
        if (b.id == branch_id) {
            sectionalizer = b.has_sectionalizer;
            continue;
        }
        adj[net.bus_index(b.from_bus)].push_back(net.bus_index(b.to_bus));
        adj[net.bus_index(b.to_bus)].push_back(net.bus_index(b.from_bus));
    }
    std::vector<char> reachable(n, 0);
    std::vector<int> stack = {net.slack_index()};
    reachable[net.slack_index()] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!reachable[v]) {
                reachable[v] = 1;
                stack.push_back(v);
            }
        }
    }
    double island_load = 0.0, island_supply = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!reachable[i]) {
            island_load += net.buses[i].p_load_kw;
            island_supply += supply(i);
        }
    }
    if (sectionalizer && island_supply >= island_load) {
        return {island_load, 0.0};
    }
    return {0.0, island_load};
}

}  // namespace

TEST_SUITE("reliability") {

TEST_CASE("aens arithmetic") {
    CHECK(aens({{10.0, 0.1}, {0.0, 0.9}}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(aens({{0.0, 0.3}, {0.0, 0.7}}) == 0.0);
    CHECK(aens({{42.0, 1.0}}) == 42.0);
    CHECK_THROWS_AS(aens({{1.0, -0.1}}), InvalidInput);
}

TEST_CASE("eir arithmetic") {
    CHECK(eir(1.0, 100.0) == doctest::Approx(0.99).epsilon(1e-12));
    CHECK(eir(0.0, 100.0) == 1.0);
    CHECK(eir(100.0, 100.0) == 0.0);
    CHECK_THROWS_AS(eir(1.0, 0.0), UndefinedMetric);
}

TEST_CASE("interruption cost day") {
    CHECK(interruption_cost_day(100.0, 1.0) == 100.0);
    CHECK(interruption_cost_day(100.0, 0.0) == 0.0);
    CHECK(interruption_cost_day(3.0, 1.0) + interruption_cost_day(4.0, 1.0) == 7.0);
    CHECK_THROWS_AS(interruption_cost_day(1.0, -1.0), InvalidParameter);
}

TEST_CASE("contingency partition examples") {
    // leaf branch feeding one 10 kW bus, no DG, no sectionalizer
    const NetworkModel net = make_network({bus(1), bus(2, 20.0), bus(3, 10.0)},
                                          {branch(1, 1, 2), branch(2, 2, 3)},
                                          1, 1.0, 1000.0);
    const Eigen::VectorXd no_dg = Eigen::VectorXd::Zero(3);
    const Contingency c = contingency_partition(net, no_dg, 2);
    CHECK(c.restored_load_kw == 0.0);
    CHECK(c.unrestored_load_kw == 10.0);
    CHECK(c.probability_weight == doctest::Approx(0.1 / 365.0).epsilon(1e-12));

    // island with sectionalizer and enough DG restores fully
    const NetworkModel net4 = make_network(
        {bus(1), bus(2, 20.0), bus(3, 10.0), bus(4, 5.0)},
        {branch(1, 1, 2), branch(2, 2, 3, 0.1, 1.0, true), branch(3, 3, 4)},
        1, 1.0, 1000.0);
    Eigen::VectorXd dg = Eigen::VectorXd::Zero(4);
    dg(net4.bus_index(4)) = 50.0;
    const Contingency c2 = contingency_partition(net4, dg, 2);
    CHECK(c2.restored_load_kw == 15.0);
    CHECK(c2.unrestored_load_kw == 0.0);

    // same island without the sectionalizer stays dark
    const Contingency c3 = contingency_partition(net4, dg, 3);
    CHECK(c3.restored_load_kw == 0.0);
    CHECK(c3.unrestored_load_kw == 5.0);

    // zero-load island
    const NetworkModel net0 = make_network({bus(1), bus(2, 20.0), bus(3)},
                                           {branch(1, 1, 2), branch(2, 2, 3)},
                                           1, 1.0, 1000.0);
    const Contingency c0 = contingency_partition(net0, no_dg, 2);
    CHECK(c0.restored_load_kw == 0.0);
    CHECK(c0.unrestored_load_kw == 0.0);

    CHECK_THROWS_AS(contingency_partition(net, no_dg, 99), InvalidInput);
}

TEST_CASE("partition matches the exhaustive component oracle") {
    // a 6-bus tree: 1-2, 2-3, 3-4, 2-5, 5-6 with varying gear
    for (int sec_mask = 0; sec_mask < 8; ++sec_mask) {
        for (double dg_kw : {0.0, 8.0, 100.0}) {
            const NetworkModel net = make_network(
                {bus(1), bus(2, 12.0), bus(3, 7.0), bus(4, 3.0), bus(5, 9.0), bus(6, 6.0)},
                {branch(1, 1, 2, 0.1, 2.0, sec_mask & 1), branch(2, 2, 3, 0.2, 1.0, sec_mask & 2),
                 branch(3, 3, 4, 0.1, 0.5, sec_mask & 4), branch(4, 2, 5, 0.3, 1.5, false),
                 branch(5, 5, 6, 0.1, 1.0, true)},
                1, 1.0, 1000.0);
            Eigen::VectorXd supply = Eigen::VectorXd::Zero(6);
            supply(net.bus_index(4)) = dg_kw;
            supply(net.bus_index(6)) = dg_kw;
            for (const Branch& b : net.branches) {
                const Contingency got = contingency_partition(net, supply, b.id);
                const OraclePartition want = oracle_partition(net, supply, b.id);
                CHECK(got.restored_load_kw == want.restored);
                CHECK(got.unrestored_load_kw == want.unrestored);
            }
        }
    }
}

TEST_CASE("more DG never increases the unrestored load") {
    const NetworkModel net = make_network(
        {bus(1), bus(2, 12.0), bus(3, 7.0), bus(4, 3.0)},
        {branch(1, 1, 2, 0.1, 1.0, true), branch(2, 2, 3, 0.1, 1.0, true),
         branch(3, 3, 4, 0.1, 1.0, true)},
        1, 1.0, 1000.0);
    double prev_unrestored = std::numeric_limits<double>::infinity();
    for (double dg = 0.0; dg <= 30.0; dg += 2.0) {
        Eigen::VectorXd supply = Eigen::VectorXd::Zero(4);
        supply(net.bus_index(3)) = dg;
        double total_unrestored = 0.0;
        for (const Branch& b : net.branches) {
            total_unrestored += contingency_partition(net, supply, b.id).unrestored_load_kw;
        }
        CHECK(total_unrestored <= prev_unrestored + 1e-12);
        prev_unrestored = total_unrestored;
    }
}

TEST_CASE("contingency cost arithmetic") {
    // single branch, lambda L = 0.1/yr, C_int = 1.5, 10 kW unrestored, t_rep = 4 h
    const NetworkModel net = make_network({bus(1), bus(2, 10.0)},
                                          {branch(1, 1, 2, 0.1, 1.0, false)},
                                          1, 1.0, 1000.0);
    const ScenarioSet scen = flat_scenarios(24, 2);
    const Eigen::VectorXd no_dg = Eigen::VectorXd::Zero(2);
    ReliabilityOptions opts;
    opts.c_int = 1.5;
    const double cost = c_aens(net, scen, no_dg, opts);
    CHECK(cost == doctest::Approx(1.5 * (0.1 / 365.0) * 40.0).epsilon(1e-9));
    CHECK(cost == doctest::Approx(0.016438).epsilon(1e-4));

    // doubling the price doubles the cost; zero failure rate zeroes it
    ReliabilityOptions doubled = opts;
    doubled.c_int = 3.0;
    CHECK(c_aens(net, scen, no_dg, doubled) == doctest::Approx(2.0 * cost).epsilon(1e-12));

    const NetworkModel quiet = make_network({bus(1), bus(2, 10.0)},
                                            {branch(1, 1, 2, 0.0, 1.0, false)},
                                            1, 1.0, 1000.0);
    CHECK(c_aens(quiet, scen, no_dg, opts) == 0.0);
}

TEST_CASE("full reliability report") {
    // zones 1 and 2 hang off the trunk; zone loads differ
    const NetworkModel net = make_network(
        {bus(1), bus(2, 10.0, 1), bus(3, 30.0, 2)},
        {branch(1, 1, 2, 0.1, 1.0, false), branch(2, 1, 3, 0.2, 1.0, false)},
        1, 1.0, 1000.0);
    const ScenarioSet scen = flat_scenarios(24, 3);
    const ReliabilityReport rep = evaluate_reliability(net, Fleet{}, scen);

    const double a1 = (0.1 / 365.0) * 10.0 * 4.0;
    const double a2 = (0.2 / 365.0) * 30.0 * 4.0;
    CHECK(rep.aens_kwh == doctest::Approx(a1 + a2).epsilon(1e-12));
    CHECK(rep.total_demand_kwh == doctest::Approx(40.0 * 24.0).epsilon(1e-9));
    CHECK(rep.eir == doctest::Approx(1.0 - (a1 + a2) / 960.0).epsilon(1e-12));
    CHECK(rep.c_aens == doctest::Approx(1.5 * (a1 + a2)).epsilon(1e-12));
    CHECK(rep.ic_day == doctest::Approx(rep.c_aens).epsilon(1e-12));  // h_c = 1
    CHECK(rep.aens_by_zone.at(1) == doctest::Approx(a1).epsilon(1e-12));
    CHECK(rep.aens_by_zone.at(2) == doctest::Approx(a2).epsilon(1e-12));
    // F2 adds the per-zone interruption costs
    CHECK(rep.f2 == doctest::Approx(rep.ic_day_by_zone.at(1) + rep.ic_day_by_zone.at(2))
                        .epsilon(1e-12));
    CHECK(rep.eir >= 0.0);
    CHECK(rep.eir <= 1.0);
    CHECK(rep.ens_cost_by_scenario.size() == 1);
    CHECK(rep.ens_cost_by_scenario(0) == doctest::Approx(rep.c_aens).epsilon(1e-12));
}

}  // TEST_SUITE

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mgd/network.hpp"

using namespace mgd;

namespace {

const std::string kDataDir = MGD_DATA_DIR;

Bus bus(int id, double p = 0.0, double q = 0.0, int zone = 0) {
    Bus b;
    b.id = id;
    b.p_load_kw = p;
    b.q_load_kvar = q;
    b.mg_zone = zone;
    return b;
}

Branch branch(int id, int from, int to, double r = 0.01, double x = 0.01) {
    Branch b;
    b.id = id;
    b.from_bus = from;
    b.to_bus = to;
    b.r_ohm = r;
    b.x_ohm = x;
    b.length_km = 1.0;
    b.failures_per_km_yr = 0.1;
    return b;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("bundled 69-bus dataset loads") {
    const NetworkModel net = load_network(kDataDir + "/pge69.json");
    CHECK(net.buses.size() == 69);
    CHECK(net.branches.size() == 68);
    CHECK(net.v_base_kv == doctest::Approx(12.66));
    CHECK(net.substation_bus == 1);
    CHECK(net.topo_order.size() == 69);

    double total_p = 0.0;
    for (const Bus& b : net.buses) total_p += b.p_load_kw;
    CHECK(total_p == doctest::Approx(3801.89).epsilon(1e-6));
}

TEST_CASE("two-bus fixture") {
    const NetworkModel net = make_network({bus(1), bus(2, 100.0)},
                                          {branch(1, 1, 2)}, 1, 1.0, 1000.0);
    CHECK(net.branches.size() == 1);
    CHECK(net.parent_branch[net.bus_index(2)] == 0);
    CHECK(net.parent_branch[net.bus_index(1)] == -1);
}

TEST_CASE("duplicate branch forming a cycle is rejected") {
    CHECK_THROWS_WITH_AS(
        make_network({bus(1), bus(2)}, {branch(1, 1, 2), branch(2, 1, 2)}, 1, 1.0, 1000.0),
        doctest::Contains("cycle"), DatasetError);
}

TEST_CASE("disconnected bus is rejected") {
    CHECK_THROWS_WITH_AS(
        make_network({bus(1), bus(2), bus(3)}, {branch(1, 1, 2)}, 1, 1.0, 1000.0),
        doctest::Contains("disconnected"), DatasetError);
}

TEST_CASE("duplicate ids and negative loads are rejected") {
    CHECK_THROWS_WITH_AS(
        make_network({bus(1), bus(1)}, {branch(1, 1, 1)}, 1, 1.0, 1000.0),
        doctest::Contains("duplicate bus id"), DatasetError);
    CHECK_THROWS_WITH_AS(
        make_network({bus(1), bus(2, -5.0)}, {branch(1, 1, 2)}, 1, 1.0, 1000.0),
        doctest::Contains("negative load"), DatasetError);
}

TEST_CASE("branch orientation follows the tree, independent of file order") {
    // branch listed against the flow direction gets flipped
    const NetworkModel net = make_network({bus(3), bus(1), bus(2, 10.0)},
                                          {branch(1, 2, 1), branch(2, 3, 2)}, 1, 1.0, 1000.0);
    for (const Branch& b : net.branches) {
        const int from = net.bus_index(b.from_bus);
        const int to = net.bus_index(b.to_bus);
        CHECK(net.parent_branch[to] >= 0);
        CHECK(net.bus_index(net.branches[net.parent_branch[to]].from_bus) == from);
    }
}

TEST_CASE("downstream islands") {
    // 1 - 2 - 3, 2 - 4
    const NetworkModel net = make_network(
        {bus(1), bus(2, 5.0), bus(3, 7.0), bus(4, 11.0)},
        {branch(1, 1, 2), branch(2, 2, 3), branch(3, 2, 4)}, 1, 1.0, 1000.0);
    const auto island = net.downstream_of(0);  // fault on 1-2
    CHECK(island.size() == 3);
    const auto leaf = net.downstream_of(1);  // fault on 2-3
    CHECK(leaf.size() == 1);
    CHECK(net.buses[leaf[0]].id == 3);
}

TEST_CASE("malformed csv rows name the offender") {
    const std::string dir = std::filesystem::temp_directory_path().string();
    const std::string buses = dir + "/mgd_bad_buses.csv";
    {
        std::ofstream f(buses);
        f << "bus_id,p_load_kw,q_load_kvar,mg_zone\n1,0,0,0\n2,oops,0,0\n";
    }
    const std::string descriptor = dir + "/mgd_bad_net.json";
    {
        std::ofstream f(descriptor);
        f << "{\"v_base_kv\":1,\"s_base_kva\":1000,\"substation_bus\":1,"
          << "\"buses_file\":\"mgd_bad_buses.csv\",\"branches_file\":\"none.csv\"}";
    }
    CHECK_THROWS_WITH_AS(load_network(descriptor), doctest::Contains("row 3"),
                         DatasetError);
    std::remove(buses.c_str());
    std::remove(descriptor.c_str());
}

}  // TEST_SUITE

#pragma once

#include <string>
#include <vector>

#include "mgd/errors.hpp"

namespace mgd {

struct Bus {
    int id = 0;
    double p_load_kw = 0.0;
    double q_load_kvar = 0.0;
    int mg_zone = 0;  // 0 = not inside a microgrid
    std::vector<std::string> devices;
};

struct Branch {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double r_ohm = 0.0;
    double x_ohm = 0.0;
    double length_km = 1.0;
    double failures_per_km_yr = 0.0;
    bool has_sectionalizer = false;
};

/// Radial feeder model. After finalize() the buses are sorted by id, every
/// branch is oriented away from the substation, and the derived topology
/// arrays below are valid. All solver and reliability code works on bus
/// indices (positions in `buses`), never raw ids.
struct NetworkModel {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    int substation_bus = 0;  // id of the slack bus
    double v_base_kv = 1.0;
    double s_base_kva = 1000.0;

    // derived by finalize()
    std::vector<int> topo_order;      // bus indices, substation first
    std::vector<int> parent_branch;   // per bus index, -1 for the substation
    std::vector<std::vector<int>> child_branches;  // per bus index

    int bus_index(int id) const;
    int slack_index() const { return bus_index(substation_bus); }
    double z_base_ohm() const { return v_base_kv * v_base_kv * 1000.0 / s_base_kva; }

    /// Validates ids, loads and radiality, orients branches, builds the
    /// topology arrays. Throws DatasetError naming the offending element.
    void finalize();

    /// Bus indices strictly below the given branch (the island isolated when
    /// that branch faults).
    std::vector<int> downstream_of(int branch_index) const;
};

NetworkModel make_network(std::vector<Bus> buses, std::vector<Branch> branches,
                          int substation_bus, double v_base_kv, double s_base_kva);

/// Loads a dataset descriptor (JSON) that names the bus and branch CSV files
/// and the system bases. CSV schemas:
///   buses:    bus_id,p_load_kw,q_load_kvar,mg_zone
///   branches: branch_id,from,to,r_ohm,x_ohm,length_km,failures_per_km_yr,has_sectionalizer
NetworkModel load_network(const std::string& path);

}  // namespace mgd

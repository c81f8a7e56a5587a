#include "mgd/network.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mgd/csv.hpp"

namespace mgd {

int NetworkModel::bus_index(int id) const {
    const auto it = std::lower_bound(
        buses.begin(), buses.end(), id,
        [](const Bus& b, int value) { return b.id < value; });
    if (it == buses.end() || it->id != id) {
        throw DatasetError("unknown bus id " + std::to_string(id));
    }
    return static_cast<int>(it - buses.begin());
}

void NetworkModel::finalize() {
    if (buses.empty()) throw DatasetError("network has no buses");
    std::sort(buses.begin(), buses.end(),
              [](const Bus& a, const Bus& b) { return a.id < b.id; });
    std::sort(branches.begin(), branches.end(),
              [](const Branch& a, const Branch& b) { return a.id < b.id; });

    for (size_t i = 1; i < buses.size(); ++i) {
        if (buses[i].id == buses[i - 1].id) {
            throw DatasetError("duplicate bus id " + std::to_string(buses[i].id));
        }
    }
    for (size_t i = 1; i < branches.size(); ++i) {
        if (branches[i].id == branches[i - 1].id) {
            throw DatasetError("duplicate branch id " + std::to_string(branches[i].id));
        }
    }
    for (const Bus& b : buses) {
        if (b.p_load_kw < 0.0 || b.q_load_kvar < 0.0) {
            throw DatasetError("negative load at bus " + std::to_string(b.id));
        }
    }
    for (const Branch& b : branches) {
        if (b.r_ohm < 0.0 || b.x_ohm < 0.0 || !(b.length_km > 0.0) ||
            b.failures_per_km_yr < 0.0) {
            throw DatasetError("invalid parameters on branch " + std::to_string(b.id));
        }
    }
    const int n = static_cast<int>(buses.size());
    std::vector<std::vector<int>> adjacency(n);  // branch indices
    for (size_t bi = 0; bi < branches.size(); ++bi) {
        const Branch& b = branches[bi];
        adjacency[bus_index(b.from_bus)].push_back(static_cast<int>(bi));
        adjacency[bus_index(b.to_bus)].push_back(static_cast<int>(bi));
    }

    // BFS from the substation, orienting branches as we go
    const int root = slack_index();
    parent_branch.assign(n, -1);
    std::vector<char> visited(n, 0);
    topo_order.clear();
    topo_order.push_back(root);
    visited[root] = 1;
    for (size_t head = 0; head < topo_order.size(); ++head) {
        const int u = topo_order[head];
        for (int bi : adjacency[u]) {
            Branch& b = branches[bi];
            const int from = bus_index(b.from_bus);
            const int to = bus_index(b.to_bus);
            const int other = (from == u) ? to : from;
            if (visited[other]) {
                if (parent_branch[u] != bi) {
                    throw DatasetError("cycle detected at branch " + std::to_string(b.id));
                }
                continue;
            }
            if (from != u) std::swap(b.from_bus, b.to_bus);
            visited[other] = 1;
            parent_branch[other] = bi;
            topo_order.push_back(other);
        }
    }
    if (static_cast<int>(topo_order.size()) != n) {
        for (int i = 0; i < n; ++i) {
            if (!visited[i]) {
                throw DatasetError("bus " + std::to_string(buses[i].id) +
                                   " is disconnected from the substation");
            }
        }
    }
    if (branches.size() != buses.size() - 1) {
        throw DatasetError("radial network needs exactly |buses|-1 branches, got " +
                           std::to_string(branches.size()) + " for " +
                           std::to_string(buses.size()) + " buses");
    }

    child_branches.assign(n, {});
    for (size_t bi = 0; bi < branches.size(); ++bi) {
        child_branches[bus_index(branches[bi].from_bus)].push_back(static_cast<int>(bi));
    }
}

std::vector<int> NetworkModel::downstream_of(int branch_index) const {
    if (branch_index < 0 || branch_index >= static_cast<int>(branches.size())) {
        throw InvalidInput("downstream_of: branch index out of range");
    }
    std::vector<int> island;
    island.push_back(bus_index(branches[branch_index].to_bus));
    for (size_t head = 0; head < island.size(); ++head) {
        for (int bi : child_branches[island[head]]) {
            island.push_back(bus_index(branches[bi].to_bus));
        }
    }
    return island;
}

NetworkModel make_network(std::vector<Bus> buses, std::vector<Branch> branches,
                          int substation_bus, double v_base_kv, double s_base_kva) {
    NetworkModel net;
    net.buses = std::move(buses);
    net.branches = std::move(branches);
    net.substation_bus = substation_bus;
    net.v_base_kv = v_base_kv;
    net.s_base_kva = s_base_kva;
    net.finalize();
    return net;
}

namespace {

std::vector<Bus> read_buses_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"bus_id", "p_load_kw",
                                                            "q_load_kvar", "mg_zone"}) {
        throw DatasetError("bus file needs header bus_id,p_load_kw,q_load_kvar,mg_zone: " + path);
    }
    std::vector<Bus> buses;
    for (size_t r = 1; r < rows.size(); ++r) {
        const std::string ctx = path + " row " + std::to_string(r + 1);
        if (rows[r].size() != 4) throw DatasetError("wrong field count in " + ctx);
        Bus b;
        b.id = static_cast<int>(parse_long(rows[r][0], ctx));
        b.p_load_kw = parse_double(rows[r][1], ctx);
        b.q_load_kvar = parse_double(rows[r][2], ctx);
        b.mg_zone = static_cast<int>(parse_long(rows[r][3], ctx));
        buses.push_back(b);
    }
    return buses;
}

std::vector<Branch> read_branches_csv(const std::string& path) {
    const auto rows = read_csv(path);
    const std::vector<std::string> expected = {
        "branch_id", "from", "to", "r_ohm", "x_ohm",
        "length_km", "failures_per_km_yr", "has_sectionalizer"};
    if (rows.empty() || rows[0] != expected) {
        throw DatasetError("branch file has an unexpected header: " + path);
    }
    std::vector<Branch> branches;
    for (size_t r = 1; r < rows.size(); ++r) {
        const std::string ctx = path + " row " + std::to_string(r + 1);
        if (rows[r].size() != 8) throw DatasetError("wrong field count in " + ctx);
        Branch b;
        b.id = static_cast<int>(parse_long(rows[r][0], ctx));
        b.from_bus = static_cast<int>(parse_long(rows[r][1], ctx));
        b.to_bus = static_cast<int>(parse_long(rows[r][2], ctx));
        b.r_ohm = parse_double(rows[r][3], ctx);
        b.x_ohm = parse_double(rows[r][4], ctx);
        b.length_km = parse_double(rows[r][5], ctx);
        b.failures_per_km_yr = parse_double(rows[r][6], ctx);
        const long sec = parse_long(rows[r][7], ctx);
        if (sec != 0 && sec != 1) {
            throw DatasetError("has_sectionalizer must be 0 or 1 in " + ctx);
        }
        b.has_sectionalizer = sec == 1;
        branches.push_back(b);
    }
    return branches;
}

}  // namespace

NetworkModel load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset descriptor: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw DatasetError("dataset descriptor is not valid JSON: " + path + ": " + e.what());
    }
    const auto dir = std::filesystem::path(path).parent_path();
    const auto resolve = [&](const std::string& rel) {
        return (dir / rel).string();
    };
    try {
        NetworkModel net;
        net.v_base_kv = doc.at("v_base_kv").get<double>();
        net.s_base_kva = doc.at("s_base_kva").get<double>();
        net.substation_bus = doc.at("substation_bus").get<int>();
        net.buses = read_buses_csv(resolve(doc.at("buses_file").get<std::string>()));
        net.branches = read_branches_csv(resolve(doc.at("branches_file").get<std::string>()));
        net.finalize();
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw DatasetError("dataset descriptor " + path + ": " + e.what());
    }
}

}  // namespace mgd

#include "mgd/power_flow.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace mgd {

namespace {

using Complex = std::complex<double>;

struct SweepWork {
    std::vector<Complex> v;        // per bus
    std::vector<Complex> s_send;   // per branch, sending end, pu
    std::vector<Complex> s_recv;   // per branch, receiving end, pu
    std::vector<Complex> z;        // per branch, pu
    std::vector<Complex> demand;   // per bus, pu
};

// flows from the current voltage estimate, leaves towards the root
void backward_sweep(const NetworkModel& net, SweepWork& w) {
    const auto& order = net.topo_order;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int u = *it;
        Complex s = w.demand[u];
        for (int bi : net.child_branches[u]) {
            s += w.s_send[bi];
        }
        const int pb = net.parent_branch[u];
        if (pb < 0) continue;  // substation
        w.s_recv[pb] = s;
        const double v2 = std::norm(w.v[u]);
        w.s_send[pb] = s + w.z[pb] * (std::norm(s) / v2);
    }
}

// voltages from the current flows, root towards the leaves
void forward_sweep(const NetworkModel& net, SweepWork& w, double& max_dv) {
    max_dv = 0.0;
    for (int u : net.topo_order) {
        const int pb = net.parent_branch[u];
        if (pb < 0) continue;
        const int parent = net.bus_index(net.branches[pb].from_bus);
        const Complex current = std::conj(w.s_send[pb] / w.v[parent]);
        const Complex v_new = w.v[parent] - w.z[pb] * current;
        max_dv = std::max(max_dv, std::abs(v_new - w.v[u]));
        w.v[u] = v_new;
    }
}

double residual_pu(const NetworkModel& net, const SweepWork& w) {
    double worst = 0.0;
    for (size_t bi = 0; bi < net.branches.size(); ++bi) {
        const int u = net.bus_index(net.branches[bi].from_bus);
        const int v = net.bus_index(net.branches[bi].to_bus);
        const double v2 = std::norm(w.v[u]);
        const Complex loss = w.z[bi] * (std::norm(w.s_send[bi]) / v2);
        Complex downstream = w.demand[v];
        for (int cb : net.child_branches[v]) {
            downstream += w.s_send[cb];
        }
        const Complex viol = w.s_send[bi] - loss - downstream;
        worst = std::max({worst, std::abs(viol.real()), std::abs(viol.imag())});
    }
    return worst;
}

}  // namespace

PowerFlowSolution solve_demands(const NetworkModel& net,
                                const Eigen::VectorXd& demand_p_kw,
                                const Eigen::VectorXd& demand_q_kvar,
                                const PowerFlowOptions& opts) {
    const int n = static_cast<int>(net.buses.size());
    const int nb = static_cast<int>(net.branches.size());
    if (demand_p_kw.size() != n || demand_q_kvar.size() != n) {
        throw InvalidInput("solve_demands: demand vectors must have one entry per bus");
    }
    if (net.topo_order.size() != net.buses.size()) {
        throw InvalidState("solve_demands: network model is not finalized");
    }

    SweepWork w;
    w.v.assign(n, Complex(1.0, 0.0));
    w.s_send.assign(nb, Complex(0.0, 0.0));
    w.s_recv.assign(nb, Complex(0.0, 0.0));
    w.z.resize(nb);
    w.demand.resize(n);
    const double z_base = net.z_base_ohm();
    for (int bi = 0; bi < nb; ++bi) {
        w.z[bi] = Complex(net.branches[bi].r_ohm, net.branches[bi].x_ohm) / z_base;
    }
    for (int i = 0; i < n; ++i) {
        w.demand[i] = Complex(demand_p_kw(i), demand_q_kvar(i)) / net.s_base_kva;
    }

    PowerFlowSolution sol;
    sol.s_base_kva = net.s_base_kva;
    sol.demand_p_kw = demand_p_kw;
    sol.demand_q_kvar = demand_q_kvar;

    bool converged = false;
    int iter = 0;
    while (iter < opts.max_iterations) {
        ++iter;
        backward_sweep(net, w);
        double max_dv = 0.0;
        forward_sweep(net, w, max_dv);
        bool finite = true;
        for (const Complex& v : w.v) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
        }
        if (!finite) break;
        if (max_dv <= opts.tol_v_pu) {
            backward_sweep(net, w);  // make flows consistent with final voltages
            if (residual_pu(net, w) <= opts.tol_residual_pu) {
                converged = true;
                break;
            }
        }
    }

    sol.converged = converged;
    sol.iterations = iter;
    sol.v_pu.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.v_pu(i) = std::isfinite(std::abs(w.v[i])) ? std::abs(w.v[i]) : 0.0;
    }
    sol.branch_p_kw.resize(nb);
    sol.branch_q_kvar.resize(nb);
    double losses_pu = 0.0;
    Complex slack = w.demand[net.slack_index()];
    for (int bi = 0; bi < nb; ++bi) {
        sol.branch_p_kw(bi) = w.s_send[bi].real() * net.s_base_kva;
        sol.branch_q_kvar(bi) = w.s_send[bi].imag() * net.s_base_kva;
        const int u = net.bus_index(net.branches[bi].from_bus);
        losses_pu += w.z[bi].real() * std::norm(w.s_send[bi]) / std::norm(w.v[u]);
    }
    for (int cb : net.child_branches[net.slack_index()]) {
        slack += w.s_send[cb];
    }
    sol.losses_kw = losses_pu * net.s_base_kva;
    sol.slack_p_kw = slack.real() * net.s_base_kva;
    sol.slack_q_kvar = slack.imag() * net.s_base_kva;
    return sol;
}

PowerFlowSolution run_power_flow(const NetworkModel& net,
                                 const Eigen::VectorXd& inj_p_kw,
                                 const Eigen::VectorXd& inj_q_kvar,
                                 const PowerFlowOptions& opts) {
    const int n = static_cast<int>(net.buses.size());
    if (inj_p_kw.size() != n || inj_q_kvar.size() != n) {
        throw InvalidInput("run_power_flow: injection vectors must have one entry per bus");
    }
    Eigen::VectorXd dp(n), dq(n);
    for (int i = 0; i < n; ++i) {
        dp(i) = net.buses[i].p_load_kw - inj_p_kw(i);
        dq(i) = net.buses[i].q_load_kvar - inj_q_kvar(i);
    }
    return solve_demands(net, dp, dq, opts);
}

double losses_cost(const PowerFlowSolution& sol, double price_per_kwh, double dt_h) {
    if (!sol.converged) {
        throw InvalidState("losses_cost: power flow did not converge");
    }
    return sol.losses_kw * dt_h * price_per_kwh;
}

double distflow_residual(const NetworkModel& net, const PowerFlowSolution& sol) {
    const int nb = static_cast<int>(net.branches.size());
    const double s_base = net.s_base_kva;
    const double z_base = net.z_base_ohm();
    double worst = 0.0;
    for (int bi = 0; bi < nb; ++bi) {
        const Branch& br = net.branches[bi];
        const int u = net.bus_index(br.from_bus);
        const int v = net.bus_index(br.to_bus);
        const double p = sol.branch_p_kw(bi) / s_base;
        const double q = sol.branch_q_kvar(bi) / s_base;
        const double v2 = sol.v_pu(u) * sol.v_pu(u);
        const double flow2 = (p * p + q * q) / v2;
        double p_down = sol.demand_p_kw(v) / s_base;
        double q_down = sol.demand_q_kvar(v) / s_base;
        for (int cb : net.child_branches[v]) {
            p_down += sol.branch_p_kw(cb) / s_base;
            q_down += sol.branch_q_kvar(cb) / s_base;
        }
        const double rp = p - (br.r_ohm / z_base) * flow2 - p_down;
        const double rq = q - (br.x_ohm / z_base) * flow2 - q_down;
        worst = std::max({worst, std::abs(rp), std::abs(rq)});
    }
    return worst;
}

Eigen::VectorXd voltage_profile(const PowerFlowSolution& sol) {
    return sol.v_pu;
}

}  // namespace mgd

#include "mgd/report.hpp"

#include <filesystem>

#include "mgd/csv.hpp"
#include "mgd/power_flow.hpp"

namespace mgd {

DispatchSchedule baseline_dispatch(const NetworkModel& net, const Fleet& fleet,
                                   const ScenarioSet& scen) {
    const int h = scen.horizon;
    DispatchSchedule s = DispatchSchedule::zeros(h, static_cast<int>(fleet.chp.size()),
                                                 static_cast<int>(fleet.ess.size()));

    // expected system load per hour
    Eigen::VectorXd load = Eigen::VectorXd::Zero(h);
    for (size_t b = 0; b < net.buses.size(); ++b) {
        for (const Scenario& sc : scen.scenarios) {
            for (int t = 0; t < h; ++t) {
                load(t) += sc.probability * net.buses[b].p_load_kw *
                           sc.multiplier(t, static_cast<int>(b));
            }
        }
    }
    const double peak = load.maxCoeff();
    if (peak <= 0.0) return s;

    for (size_t c = 0; c < fleet.chp.size(); ++c) {
        for (int t = 0; t < h; ++t) {
            const double p = fleet.chp[c].p_max_kw * load(t) / peak;
            s.chp_p(t, static_cast<int>(c)) =
                std::max(p, fleet.chp[c].p_min_kw);
        }
    }
    return s;
}

namespace {

/// Probability-weighted mean scenario: the "mean value" operating point.
Scenario mean_scenario(const ScenarioSet& scen) {
    Scenario m;
    m.probability = 1.0;
    m.wind_speed = Eigen::VectorXd::Zero(scen.horizon);
    m.irradiance = Eigen::VectorXd::Zero(scen.horizon);
    m.load_multiplier = Eigen::MatrixXd::Zero(
        scen.horizon, scen.scenarios.front().load_multiplier.cols());
    for (const Scenario& s : scen.scenarios) {
        m.wind_speed += s.probability * s.wind_speed;
        m.irradiance += s.probability * s.irradiance;
        m.load_multiplier += s.probability * s.load_multiplier;
    }
    return m;
}

/// Per-bus time-mean voltage over the mean scenario, plus the worst voltage.
void mean_case_voltages(const NetworkModel& net, const Fleet& fleet,
                        const Scenario& mean, const DispatchSchedule* schedule,
                        bool include_renewables, const Eigen::VectorXd& t_cell,
                        Eigen::VectorXd& profile_out, double& min_out) {
    const int h = static_cast<int>(mean.wind_speed.size());
    const int n = static_cast<int>(net.buses.size());
    profile_out = Eigen::VectorXd::Zero(n);
    min_out = 1.0;
    for (int t = 0; t < h; ++t) {
        Eigen::VectorXd dp(n), dq(n);
        for (int b = 0; b < n; ++b) {
            const double m = mean.multiplier(t, b);
            dp(b) = net.buses[b].p_load_kw * m;
            dq(b) = net.buses[b].q_load_kvar * m;
        }
        if (include_renewables) {
            for (const auto& u : fleet.wt) {
                dp(net.bus_index(u.bus_id)) -= wt_power(mean.wind_speed(t), u.curve);
            }
            for (const auto& u : fleet.pv) {
                const double tc = t_cell.size() == h ? t_cell(t) : u.panel.t_cell_c;
                dp(net.bus_index(u.bus_id)) -= pv_power(mean.irradiance(t), u.panel, tc);
            }
        }
        if (schedule) {
            for (size_t c = 0; c < fleet.chp.size(); ++c) {
                dp(net.bus_index(fleet.chp[c].bus_id)) -=
                    schedule->chp_p(t, static_cast<int>(c));
            }
            for (size_t e = 0; e < fleet.ess.size(); ++e) {
                dp(net.bus_index(fleet.ess[e].bus_id)) -=
                    schedule->ess_p(t, static_cast<int>(e));
            }
        }
        const PowerFlowSolution sol = solve_demands(net, dp, dq);
        profile_out += sol.v_pu / h;
        if (sol.converged) min_out = std::min(min_out, sol.v_pu.minCoeff());
    }
}

/// Worst bus voltage over every scenario and hour with no devices at all.
double no_dg_min_voltage(const NetworkModel& net, const ScenarioSet& scen) {
    const int n = static_cast<int>(net.buses.size());
    double min_v = 1.0;
    Eigen::VectorXd dp(n), dq(n);
    for (const Scenario& s : scen.scenarios) {
        for (int t = 0; t < scen.horizon; ++t) {
            for (int b = 0; b < n; ++b) {
                const double m = s.multiplier(t, b);
                dp(b) = net.buses[b].p_load_kw * m;
                dq(b) = net.buses[b].q_load_kvar * m;
            }
            const PowerFlowSolution sol = solve_demands(net, dp, dq);
            if (sol.converged) min_v = std::min(min_v, sol.v_pu.minCoeff());
        }
    }
    return min_v;
}

}  // namespace

RunReport build_report(const DispatchSchedule& optimized,
                       const DispatchSchedule& baseline,
                       const DispatchEvaluator& eval,
                       const std::vector<TracePoint>& trace,
                       bool optimizer_converged, int period_len,
                       int histogram_bins) {
    const ScenarioSet& scen = eval.scenarios();
    const NetworkModel& net = eval.network();
    const Fleet& fleet = eval.fleet();
    if (optimized.horizon() != scen.horizon || baseline.horizon() != scen.horizon) {
        throw InvalidInput("build_report: schedules do not match the scenario set");
    }

    RunReport r;
    r.optimized = optimized;
    r.baseline = baseline;
    r.trace = trace;
    r.optimizer_converged = optimizer_converged;
    r.optimizer_iterations = trace.empty() ? 0 : trace.back().iteration;

    r.detail_opt = eval.evaluate(optimized);
    r.detail_base = eval.evaluate(baseline);
    r.cost = r.detail_opt.cost;
    r.cost_baseline = r.detail_base.cost;
    r.reliability = eval.reliability();
    r.rep = renewable_penetration(net, fleet, scen, eval.t_cell_profile());

    r.losses_optimized_kwh = r.detail_opt.losses_kwh;
    r.losses_baseline_kwh = r.detail_base.losses_kwh;
    r.hourly_losses_opt_kw = r.detail_opt.hourly_losses_kw;
    r.hourly_losses_base_kw = r.detail_base.hourly_losses_kw;
    r.min_v_opt_pu = r.detail_opt.min_voltage_pu;
    r.min_v_base_pu = r.detail_base.min_voltage_pu;
    r.min_v_nodg_pu = no_dg_min_voltage(net, scen);

    const Scenario mean = mean_scenario(scen);
    double unused = 1.0;
    mean_case_voltages(net, fleet, mean, &optimized, true, eval.t_cell_profile(),
                       r.voltage_opt_pu, unused);
    mean_case_voltages(net, fleet, mean, &baseline, true, eval.t_cell_profile(),
                       r.voltage_base_pu, unused);
    mean_case_voltages(net, fleet, mean, nullptr, false, eval.t_cell_profile(),
                       r.voltage_nodg_pu, unused);

    // Table-style period means: renewables are scenario expectations, CHP and
    // ESS come from the schedule itself
    r.period_len = period_len;
    const int periods = scen.horizon / period_len;
    const int n_dev = static_cast<int>(fleet.pv.size() + fleet.wt.size() +
                                       fleet.chp.size() + fleet.ess.size());
    r.dispatch_table.resize(periods, n_dev);
    int col = 0;
    for (size_t i = 0; i < fleet.pv.size(); ++i, ++col) {
        r.device_names.push_back("pv_" + std::to_string(i + 1));
        r.dispatch_table.col(col) = aggregate_periods(
            r.detail_opt.expected_pv_kw.col(static_cast<Eigen::Index>(i)), period_len);
    }
    for (size_t i = 0; i < fleet.wt.size(); ++i, ++col) {
        r.device_names.push_back("wt_" + std::to_string(i + 1));
        r.dispatch_table.col(col) = aggregate_periods(
            r.detail_opt.expected_wt_kw.col(static_cast<Eigen::Index>(i)), period_len);
    }
    for (size_t i = 0; i < fleet.chp.size(); ++i, ++col) {
        r.device_names.push_back("chp_" + std::to_string(i + 1));
        r.dispatch_table.col(col) = aggregate_periods(
            optimized.chp_p.col(static_cast<Eigen::Index>(i)), period_len);
    }
    for (size_t i = 0; i < fleet.ess.size(); ++i, ++col) {
        r.device_names.push_back("ess_" + std::to_string(i + 1));
        r.dispatch_table.col(col) = aggregate_periods(
            optimized.ess_p.col(static_cast<Eigen::Index>(i)), period_len);
    }

    Eigen::VectorXd probs(scen.scenarios.size());
    for (size_t i = 0; i < scen.scenarios.size(); ++i) {
        probs(i) = scen.scenarios[i].probability;
    }
    if (!fleet.wt.empty()) {
        r.histograms.emplace_back(
            "wt_energy_kwh",
            empirical_distribution(eval.scenario_wt_energy_kwh(), probs, histogram_bins));
    }
    if (!fleet.pv.empty()) {
        r.histograms.emplace_back(
            "pv_energy_kwh",
            empirical_distribution(eval.scenario_pv_energy_kwh(), probs, histogram_bins));
    }
    r.histograms.emplace_back(
        "ens_cost",
        empirical_distribution(r.reliability.ens_cost_by_scenario, probs, histogram_bins));
    return r;
}

namespace {

void write_histogram_csv(const Histogram& h, const std::string& path) {
    CsvWriter w(path);
    w.row({"bin_lo", "bin_hi", "density", "cdf_hi"});
    for (int b = 0; b < h.densities.size(); ++b) {
        w.row({format_double(h.bin_edges(b)), format_double(h.bin_edges(b + 1)),
               format_double(h.densities(b)), format_double(h.cdf(b + 1))});
    }
}

}  // namespace

void write_report(const RunReport& r, const NetworkModel& net,
                  const ManifestInfo& manifest, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "histograms");

    {
        CsvWriter w((fs::path(out_dir) / "dispatch.csv").string());
        std::vector<std::string> header = {"period"};
        header.insert(header.end(), r.device_names.begin(), r.device_names.end());
        w.row(header);
        for (int p = 0; p < r.dispatch_table.rows(); ++p) {
            std::vector<std::string> row = {std::to_string(p + 1)};
            for (int c = 0; c < r.dispatch_table.cols(); ++c) {
                row.push_back(format_double(r.dispatch_table(p, c)));
            }
            w.row(row);
        }
    }
    {
        CsvWriter w((fs::path(out_dir) / "voltage.csv").string());
        w.row({"bus_id", "v_opt_pu", "v_base_pu", "v_nodg_pu"});
        for (size_t b = 0; b < net.buses.size(); ++b) {
            w.row({std::to_string(net.buses[b].id),
                   format_double(r.voltage_opt_pu(b)),
                   format_double(r.voltage_base_pu(b)),
                   format_double(r.voltage_nodg_pu(b))});
        }
    }
    {
        CsvWriter w((fs::path(out_dir) / "losses.csv").string());
        w.row({"hour", "losses_opt_kw", "losses_base_kw"});
        for (int t = 0; t < r.hourly_losses_opt_kw.size(); ++t) {
            w.row({std::to_string(t), format_double(r.hourly_losses_opt_kw(t)),
                   format_double(r.hourly_losses_base_kw(t))});
        }
    }
    for (const auto& [name, hist] : r.histograms) {
        write_histogram_csv(hist, (fs::path(out_dir) / "histograms" / (name + ".csv")).string());
    }
    write_trace_csv(r.trace, (fs::path(out_dir) / "trace.csv").string());
    {
        CsvWriter w((fs::path(out_dir) / "summary.csv").string());
        w.row({"key", "value"});
        const auto put = [&](const std::string& k, const std::string& v) {
            w.row({k, v});
        };
        const auto putd = [&](const std::string& k, double v) {
            put(k, format_double(v));
        };
        putd("z_opt", r.cost.z);
        putd("z_base", r.cost_baseline.z);
        putd("f1_opt", r.cost.f1());
        putd("f1_base", r.cost_baseline.f1());
        putd("f2", r.cost.interruption);
        putd("fuel", r.cost.fuel);
        putd("om", r.cost.om);
        putd("emission", r.cost.emission);
        putd("losses_cost", r.cost.losses);
        putd("interruption", r.cost.interruption);
        putd("penalty", r.cost.penalty);
        putd("chp_fuel_cost", r.detail_opt.chp_fuel_cost_total);
        putd("chp_fuel_units", r.detail_opt.chp_fuel_units);
        putd("grid_import_kwh", r.detail_opt.grid_import_kwh);
        putd("grid_export_kwh", r.detail_opt.grid_export_kwh);
        putd("grid_purchase_cost", r.detail_opt.grid_purchase_cost);
        putd("grid_sale_credit", r.detail_opt.grid_sale_credit);
        putd("losses_opt_kwh", r.losses_optimized_kwh);
        putd("losses_base_kwh", r.losses_baseline_kwh);
        putd("min_v_opt_pu", r.min_v_opt_pu);
        putd("min_v_base_pu", r.min_v_base_pu);
        putd("min_v_nodg_pu", r.min_v_nodg_pu);
        putd("aens_kwh", r.reliability.aens_kwh);
        putd("eir", r.reliability.eir);
        putd("c_aens", r.reliability.c_aens);
        putd("ic_day", r.reliability.ic_day);
        putd("total_demand_kwh", r.reliability.total_demand_kwh);
        for (const auto& [zone, value] : r.rep) {
            putd("rep_zone_" + std::to_string(zone), value);
        }
        for (const auto& [zone, value] : r.reliability.ic_day_by_zone) {
            putd("ic_day_zone_" + std::to_string(zone), value);
        }
        put("optimizer_converged", r.optimizer_converged ? "true" : "false");
        put("optimizer_iterations", std::to_string(r.optimizer_iterations));
        put("violations", std::to_string(r.detail_opt.violations.size()));
        put("nonconverged_flows", std::to_string(r.detail_opt.n_nonconverged));
    }
    {
        CsvWriter w((fs::path(out_dir) / "manifest.csv").string());
        w.row({"key", "value"});
        w.row({"config_version", std::to_string(manifest.config_version)});
        w.row({"seed", std::to_string(manifest.seed)});
        w.row({"config_hash", manifest.config_hash});
        w.row({"dataset_hash", manifest.dataset_hash});
        w.row({"n_generate", std::to_string(manifest.n_generate)});
        w.row({"n_keep", std::to_string(manifest.n_keep)});
        w.row({"horizon", std::to_string(manifest.horizon)});
        w.row({"period_len", std::to_string(manifest.period_len)});
    }
}

}  // namespace mgd

#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "mgd/coa.hpp"
#include "mgd/costs.hpp"

namespace mgd {

/// Everything a finished run writes out: the period-aggregated dispatch
/// table, voltage profiles, loss comparison, histograms, cost and
/// reliability summaries.
struct RunReport {
    Eigen::MatrixXd dispatch_table;  // periods x devices, mean kW
    std::vector<std::string> device_names;
    int period_len = 3;

    Eigen::VectorXd voltage_opt_pu;   // per bus, time-mean on the mean scenario
    Eigen::VectorXd voltage_base_pu;
    Eigen::VectorXd voltage_nodg_pu;
    double min_v_opt_pu = 1.0;  // over scenarios, hours and buses
    double min_v_base_pu = 1.0;
    double min_v_nodg_pu = 1.0;

    double losses_optimized_kwh = 0.0;
    double losses_baseline_kwh = 0.0;
    Eigen::VectorXd hourly_losses_opt_kw;
    Eigen::VectorXd hourly_losses_base_kw;

    std::vector<std::pair<std::string, Histogram>> histograms;

    CostBreakdown cost;           // optimized schedule
    CostBreakdown cost_baseline;
    EvalDetail detail_opt;
    EvalDetail detail_base;
    ReliabilityReport reliability;
    std::map<int, double> rep;  // renewable penetration per microgrid zone

    DispatchSchedule optimized;
    DispatchSchedule baseline;
    std::vector<TracePoint> trace;
    bool optimizer_converged = true;
    int optimizer_iterations = 0;
};

/// Comparison heuristic: CHPs follow the expected load shape at p_max scale,
/// the storage sits idle, renewables track their maximum power point.
DispatchSchedule baseline_dispatch(const NetworkModel& net, const Fleet& fleet,
                                   const ScenarioSet& scen);

/// Assembles the full report from the two evaluated schedules. Throws if the
/// schedules were not evaluated on the same scenario set.
RunReport build_report(const DispatchSchedule& optimized,
                       const DispatchSchedule& baseline,
                       const DispatchEvaluator& eval,
                       const std::vector<TracePoint>& trace,
                       bool optimizer_converged, int period_len = 3,
                       int histogram_bins = 20);

/// Writes dispatch.csv, voltage.csv, losses.csv, histograms/*.csv,
/// summary.csv, trace.csv and manifest.csv under out_dir.
struct ManifestInfo {
    int config_version = 1;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string dataset_hash;
    int n_generate = 0;
    int n_keep = 0;
    int horizon = 24;
    int period_len = 3;
};

void write_report(const RunReport& report, const NetworkModel& net,
                  const ManifestInfo& manifest, const std::string& out_dir);

}  // namespace mgd

#include "mgd/pipeline.hpp"

#include <cmath>
#include <filesystem>

#include "mgd/scenario.hpp"

namespace mgd {

RunReport run_pipeline(const RunConfig& cfg, const std::string& out_dir_override,
                       int threads_override) {
    const int threads = threads_override > 0 ? threads_override : cfg.threads;
    std::string out_dir = !out_dir_override.empty() ? out_dir_override : cfg.out_dir;
    if (out_dir.empty()) {
        out_dir = (std::filesystem::path(cfg.config_dir) /
                   ("run-seed-" + std::to_string(cfg.seed)))
                      .string();
    }
    std::filesystem::create_directories(out_dir);

    const ScenarioSet full =
        generate_scenarios(cfg.hourly_models(), cfg.n_generate, cfg.seed, threads);
    const ScenarioSet reduced = reduce_scenarios(full, cfg.n_keep);
    write_scenarios_csv(reduced,
                        (std::filesystem::path(out_dir) / "scenarios.csv").string());

    const DispatchEvaluator eval(cfg.network, cfg.fleet, reduced, cfg.prices,
                                 cfg.weights, cfg.penalty_coefficient,
                                 cfg.reliability, cfg.t_cell_profile);

    const DispatchSchedule baseline =
        baseline_dispatch(cfg.network, cfg.fleet, reduced);

    DispatchSchedule optimized = baseline;
    std::vector<TracePoint> trace;
    bool optimizer_converged = true;
    const auto [lo, hi] = schedule_bounds(cfg.fleet, cfg.horizon);
    if (lo.size() > 0) {
        CoaConfig coa = cfg.coa;
        coa.threads = threads;
        // keep the optimizer's streams disjoint from scenario generation
        coa.seed = RngStream(cfg.seed).substream(0xC0AULL).key();
        std::vector<Eigen::VectorXd> guesses;
        if (cfg.warm_start) guesses.push_back(baseline.flatten());
        const Objective objective = [&eval](const Eigen::VectorXd& x) { return eval(x); };
        const CoaResult result = optimize(objective, lo, hi, coa, guesses);
        optimized = DispatchSchedule::unflatten(result.best_position, cfg.horizon,
                                                static_cast<int>(cfg.fleet.chp.size()),
                                                static_cast<int>(cfg.fleet.ess.size()));
        trace = result.trace;
        optimizer_converged = std::isfinite(result.best_fitness);
    }

    RunReport report = build_report(optimized, baseline, eval, trace,
                                    optimizer_converged, cfg.period_len);

    ManifestInfo manifest;
    manifest.config_version = cfg.config_version;
    manifest.seed = cfg.seed;
    manifest.config_hash = cfg.config_hash;
    manifest.dataset_hash = cfg.dataset_hash;
    manifest.n_generate = cfg.n_generate;
    manifest.n_keep = cfg.n_keep;
    manifest.horizon = cfg.horizon;
    manifest.period_len = cfg.period_len;
    write_report(report, cfg.network, manifest, out_dir);
    return report;
}

}  // namespace mgd

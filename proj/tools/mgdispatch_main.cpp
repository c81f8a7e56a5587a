// mgdispatch - day-ahead microgrid dispatch under uncertainty on a radial feeder
//
// Subcommands:
//   run <config>        full pipeline: scenarios -> reduction -> optimization -> report
//   validate <config>   parse and check a configuration, print a short summary
//   powerflow <dataset> nominal-load sweep on a dataset, print losses and voltages
//   benchmark-coa       optimizer sanity suite on analytic test functions

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>

#include "mgd/coa.hpp"
#include "mgd/config.hpp"
#include "mgd/csv.hpp"
#include "mgd/pipeline.hpp"
#include "mgd/power_flow.hpp"

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559005768;
}

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                long seed_override, int threads_override) {
    mgd::RunConfig cfg = mgd::load_config(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    const mgd::RunReport report =
        mgd::run_pipeline(cfg, out_dir, threads_override);
    std::printf("scenarios: %d generated, %d kept\n", cfg.n_generate, cfg.n_keep);
    std::printf("z (optimized): %.6f  z (baseline): %.6f\n", report.cost.z,
                report.cost_baseline.z);
    std::printf("losses: %.3f kWh (optimized) vs %.3f kWh (baseline)\n",
                report.losses_optimized_kwh, report.losses_baseline_kwh);
    std::printf("min voltage: %.6f pu (optimized), %.6f pu (no DG)\n",
                report.min_v_opt_pu, report.min_v_nodg_pu);
    std::printf("AENS: %.6f kWh/day  EIR: %.9f\n", report.reliability.aens_kwh,
                report.reliability.eir);
    if (!report.optimizer_converged) {
        std::printf("warning: optimizer reported converged=false\n");
    }
    return 0;
}

int validate_command(const std::string& config_path) {
    const mgd::RunConfig cfg = mgd::load_config(config_path);
    std::printf("config ok: %s\n", config_path.c_str());
    std::printf("  dataset: %s (%zu buses, %zu branches)\n", cfg.dataset_path.c_str(),
                cfg.network.buses.size(), cfg.network.branches.size());
    std::printf("  fleet: %zu wt, %zu pv, %zu chp, %zu ess\n", cfg.fleet.wt.size(),
                cfg.fleet.pv.size(), cfg.fleet.chp.size(), cfg.fleet.ess.size());
    std::printf("  scenarios: %d -> %d, seed %llu\n", cfg.n_generate, cfg.n_keep,
                static_cast<unsigned long long>(cfg.seed));
    return 0;
}

int powerflow_command(const std::string& dataset_path, const std::string& out_csv) {
    const mgd::NetworkModel net = mgd::load_network(dataset_path);
    const int n = static_cast<int>(net.buses.size());
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(n);
    const mgd::PowerFlowSolution sol = mgd::run_power_flow(net, zeros, zeros);
    if (!sol.converged) {
        std::fprintf(stderr, "power flow did not converge within the iteration cap\n");
        return 3;
    }
    std::printf("buses: %d  branches: %zu\n", n, net.branches.size());
    std::printf("converged in %d iterations, residual %.3e pu\n", sol.iterations,
                mgd::distflow_residual(net, sol));
    std::printf("losses: %.4f kW (%.6f pu)\n", sol.losses_kw,
                sol.losses_kw / net.s_base_kva);
    std::printf("slack import: %.4f kW\n", sol.slack_p_kw);
    const Eigen::VectorXd v = mgd::voltage_profile(sol);
    int min_bus = 0;
    const double min_v = v.minCoeff(&min_bus);
    std::printf("min voltage: %.6f pu at bus %d\n", min_v, net.buses[min_bus].id);
    if (!out_csv.empty()) {
        mgd::CsvWriter w(out_csv);
        w.row({"bus_id", "v_pu"});
        for (int b = 0; b < n; ++b) {
            w.row({std::to_string(net.buses[b].id), mgd::format_double(v(b))});
        }
        std::printf("voltage profile written to %s\n", out_csv.c_str());
    }
    return 0;
}

double sphere(const Eigen::VectorXd& x) { return x.squaredNorm(); }

double rastrigin(const Eigen::VectorXd& x) {
    double f = 10.0 * x.size();
    for (int i = 0; i < x.size(); ++i) {
        f += x(i) * x(i) - 10.0 * std::cos(kTwoPi * x(i));
    }
    return f;
}

int benchmark_command(const std::string& trace_dir) {
    struct Case {
        const char* name;
        mgd::Objective f;
        double bound;
        double target;
        int max_iterations;
    };
    const std::vector<Case> cases = {
        {"sphere-2d", sphere, 5.0, 1e-6, 200},
        {"rastrigin-2d", rastrigin, 5.12, 1e-2, 300},
    };
    bool all_ok = true;
    for (const Case& c : cases) {
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -c.bound);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, c.bound);
        int successes = 0;
        double best_seen = std::numeric_limits<double>::infinity();
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            mgd::CoaConfig cfg;
            cfg.seed = seed;
            cfg.max_iterations = c.max_iterations;
            const mgd::CoaResult r = mgd::optimize(c.f, lo, hi, cfg);
            if (r.best_fitness < c.target) ++successes;
            if (r.best_fitness < best_seen) {
                best_seen = r.best_fitness;
                if (!trace_dir.empty()) {
                    mgd::write_trace_csv(
                        r.trace, trace_dir + "/" + c.name + "_best_trace.csv");
                }
            }
        }
        std::printf("%-14s target %.0e: %d/10 seeds, best %.3e\n", c.name, c.target,
                    successes, best_seen);
        all_ok = all_ok && successes >= (std::string(c.name) == "sphere-2d" ? 9 : 8);
    }
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"microgrid day-ahead dispatch toolkit"};
    app.require_subcommand(1);

    std::string config_path, dataset_path, out_dir, out_csv, trace_dir;
    long seed_override = -1;
    int threads_override = 0;

    CLI::App* run = app.add_subcommand("run", "execute the full pipeline");
    run->add_option("config", config_path, "run configuration (JSON)")->required();
    run->add_option("--out-dir", out_dir, "report directory override");
    run->add_option("--seed", seed_override, "seed override");
    run->add_option("--threads", threads_override, "worker thread cap");

    CLI::App* validate = app.add_subcommand("validate", "check a configuration");
    validate->add_option("config", config_path, "run configuration (JSON)")->required();

    CLI::App* pf = app.add_subcommand("powerflow", "nominal-load sweep on a dataset");
    pf->add_option("dataset", dataset_path, "dataset descriptor (JSON)")->required();
    pf->add_option("--out", out_csv, "write the voltage profile CSV here");

    CLI::App* bench = app.add_subcommand("benchmark-coa", "optimizer sanity suite");
    bench->add_option("--trace-dir", trace_dir, "write best-run traces here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(config_path, out_dir, seed_override, threads_override);
        }
        if (validate->parsed()) return validate_command(config_path);
        if (pf->parsed()) return powerflow_command(dataset_path, out_csv);
        if (bench->parsed()) return benchmark_command(trace_dir);
    } catch (const mgd::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const mgd::DatasetError& e) {
        std::fprintf(stderr, "dataset error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}

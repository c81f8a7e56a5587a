#include "mgd/coa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgd/csv.hpp"
#include "mgd/parallel.hpp"

namespace mgd {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double evaluate_guarded(const Objective& objective, const Eigen::VectorXd& x) {
    const double f = objective(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
}

void clip_to_bounds(Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi) {
    x = x.cwiseMax(lo).cwiseMin(hi);
}

/// Deterministic k-means on habitat positions (fixed Lloyd iterations).
/// Returns the cluster label per habitat.
std::vector<int> kmeans_labels(const std::vector<Habitat>& population, int k,
                               RngStream& rng) {
    const int n = static_cast<int>(population.size());
    k = std::min(k, n);
    const int dim = static_cast<int>(population.front().position.size());

    // pick k distinct members as initial centers
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(n - i));
        std::swap(order[i], order[j]);
    }
    Eigen::MatrixXd centers(k, dim);
    for (int c = 0; c < k; ++c) centers.row(c) = population[order[c]].position.transpose();

    std::vector<int> labels(n, 0);
    for (int round = 0; round < 20; ++round) {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (population[i].position.transpose() - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d =
                    (population[i].position.transpose() - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            labels[i] = best;
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dim);
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(labels[i]) += population[i].position.transpose();
            ++counts[labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
        }
    }
    return labels;
}

/// Goal habitat: the best member of the cluster with the best mean fitness.
int select_goal(const std::vector<Habitat>& population, int k, RngStream& rng) {
    const std::vector<int> labels = kmeans_labels(population, k, rng);
    const int n = static_cast<int>(population.size());
    k = std::min(k, n);
    std::vector<double> sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) {
        sum[labels[i]] += population[i].fitness;
        ++count[labels[i]];
    }
    int best_cluster = -1;
    double best_mean = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
        if (count[c] == 0) continue;
        const double mean = sum[c] / count[c];
        if (mean < best_mean) {
            best_mean = mean;
            best_cluster = c;
        }
    }
    int goal = -1;
    for (int i = 0; i < n; ++i) {
        if (labels[i] != best_cluster) continue;
        if (goal < 0 || population[i].fitness < population[goal].fitness) goal = i;
    }
    return goal;
}

}  // namespace

void CoaConfig::validate() const {
    if (n_initial < 1) throw InvalidParameter("CoaConfig: n_initial must be >= 1");
    if (max_population < 1) throw InvalidParameter("CoaConfig: max_population must be >= 1");
    if (!(1 <= eggs_min && eggs_min <= eggs_max)) {
        throw InvalidParameter("CoaConfig: need 1 <= eggs_min <= eggs_max");
    }
    if (n_clusters < 1) throw InvalidParameter("CoaConfig: n_clusters must be >= 1");
    if (max_iterations < 1) throw InvalidParameter("CoaConfig: max_iterations must be >= 1");
    if (!(egg_demise_fraction >= 0.0 && egg_demise_fraction < 1.0)) {
        throw InvalidParameter("CoaConfig: egg_demise_fraction must be in [0, 1)");
    }
    if (alpha_elr < 0.0) throw InvalidParameter("CoaConfig: alpha_elr must be >= 0");
}

std::vector<Habitat> init_population(const Eigen::VectorXd& lo,
                                     const Eigen::VectorXd& hi, int count,
                                     RngStream& rng) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw InvalidParameter("init_population: bounds must be non-empty and matched");
    }
    for (int d = 0; d < lo.size(); ++d) {
        if (!(lo(d) < hi(d))) {
            throw InvalidParameter("init_population: degenerate bounds in dimension " +
                                   std::to_string(d));
        }
    }
    std::vector<Habitat> population(count);
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd x(lo.size());
        for (int d = 0; d < lo.size(); ++d) x(d) = rng.uniform(lo(d), hi(d));
        population[i].position = std::move(x);
    }
    return population;
}

std::vector<Habitat> lay_eggs(const Habitat& cuckoo, int egg_count,
                              const Eigen::VectorXd& elr,
                              const Eigen::VectorXd& lo,
                              const Eigen::VectorXd& hi, RngStream& rng) {
    std::vector<Habitat> eggs(egg_count);
    for (int e = 0; e < egg_count; ++e) {
        Eigen::VectorXd x(cuckoo.position.size());
        for (int d = 0; d < x.size(); ++d) {
            x(d) = cuckoo.position(d) + rng.uniform(-elr(d), elr(d));
        }
        clip_to_bounds(x, lo, hi);
        eggs[e].position = std::move(x);
    }
    return eggs;
}

Eigen::VectorXd migration_step(const Eigen::VectorXd& position,
                               const Eigen::VectorXd& goal, double coeff,
                               double u, int plane_i, int plane_j, double angle) {
    Eigen::VectorXd step = coeff * u * (goal - position);
    if (position.size() >= 2 && plane_i != plane_j && angle != 0.0) {
        const double c = std::cos(angle), s = std::sin(angle);
        const double a = step(plane_i), b = step(plane_j);
        step(plane_i) = c * a - s * b;
        step(plane_j) = s * a + c * b;
    }
    return position + step;
}

void migrate(std::vector<Habitat>& population, const Eigen::VectorXd& goal,
             const CoaConfig& cfg, const Eigen::VectorXd& lo,
             const Eigen::VectorXd& hi, RngStream& rng) {
    const int dim = static_cast<int>(goal.size());
    for (Habitat& h : population) {
        const double u = rng.uniform01();
        int pi = 0, pj = 0;
        double angle = 0.0;
        if (dim >= 2) {
            pi = static_cast<int>(rng.uniform_int(dim));
            pj = static_cast<int>(rng.uniform_int(dim - 1));
            if (pj >= pi) ++pj;
            angle = rng.uniform(-kPi / 6.0, kPi / 6.0);
        }
        h.position = migration_step(h.position, goal, cfg.motion_coefficient, u,
                                    pi, pj, angle);
        clip_to_bounds(h.position, lo, hi);
    }
}

CoaResult optimize(const Objective& objective, const Eigen::VectorXd& lo,
                   const Eigen::VectorXd& hi, const CoaConfig& cfg,
                   const std::vector<Eigen::VectorXd>& initial_guesses) {
    cfg.validate();
    const RngStream root(cfg.seed);

    const auto evaluate_all = [&](std::vector<Habitat>& habitats) {
        parallel_for(static_cast<int>(habitats.size()), cfg.threads, [&](int i) {
            habitats[i].fitness = evaluate_guarded(objective, habitats[i].position);
        });
    };

    RngStream init_rng = root.substream(0);
    std::vector<Habitat> population = init_population(lo, hi, cfg.n_initial, init_rng);
    for (const Eigen::VectorXd& guess : initial_guesses) {
        if (guess.size() != lo.size()) {
            throw InvalidParameter("optimize: initial guess has the wrong dimension");
        }
        Habitat h;
        h.position = guess.cwiseMax(lo).cwiseMin(hi);
        population.push_back(std::move(h));
    }
    evaluate_all(population);

    Habitat incumbent = *std::min_element(
        population.begin(), population.end(),
        [](const Habitat& a, const Habitat& b) { return a.fitness < b.fitness; });

    CoaResult result;
    result.trace.push_back({0, incumbent.fitness, static_cast<int>(population.size())});

    double previous_best = incumbent.fitness;
    int stale = 0;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const RngStream iter_root = root.substream(iter);

        // egg laying: counts first, then per-cuckoo substreams for positions
        RngStream count_rng = iter_root.substream(0);
        const int n_cuckoos = static_cast<int>(population.size());
        std::vector<int> egg_counts(n_cuckoos);
        int total_eggs = 0;
        for (int i = 0; i < n_cuckoos; ++i) {
            egg_counts[i] = cfg.eggs_min +
                            static_cast<int>(count_rng.uniform_int(
                                cfg.eggs_max - cfg.eggs_min + 1));
            total_eggs += egg_counts[i];
        }
        // the laying radius contracts as the run matures; wide early casts
        // hop between basins, late ones refine the society's neighbourhood
        const double decay = std::max(
            cfg.elr_decay_floor, 1.0 - static_cast<double>(iter) / cfg.max_iterations);
        std::vector<Habitat> eggs;
        eggs.reserve(total_eggs);
        for (int i = 0; i < n_cuckoos; ++i) {
            RngStream egg_rng = iter_root.substream(1 + i);
            const Eigen::VectorXd elr = cfg.alpha_elr * decay *
                                        (static_cast<double>(egg_counts[i]) / total_eggs) *
                                        (hi - lo);
            auto laid = lay_eggs(population[i], egg_counts[i], elr, lo, hi, egg_rng);
            for (auto& egg : laid) eggs.push_back(std::move(egg));
        }
        evaluate_all(eggs);

        // the worst share of eggs never hatches
        std::stable_sort(eggs.begin(), eggs.end(),
                         [](const Habitat& a, const Habitat& b) {
                             return a.fitness < b.fitness;
                         });
        const int demised = static_cast<int>(cfg.egg_demise_fraction * eggs.size());
        eggs.resize(eggs.size() - demised);

        // merge and cull to the carrying capacity
        for (auto& egg : eggs) population.push_back(std::move(egg));
        std::stable_sort(population.begin(), population.end(),
                         [](const Habitat& a, const Habitat& b) {
                             return a.fitness < b.fitness;
                         });
        if (static_cast<int>(population.size()) > cfg.max_population) {
            population.resize(cfg.max_population);
        }
        if (population.front().fitness < incumbent.fitness) {
            incumbent = population.front();
        }

        // cluster, pick the goal society, migrate everyone towards it
        RngStream cluster_rng = iter_root.substream(1 << 20);
        const int goal_index = select_goal(population, cfg.n_clusters, cluster_rng);
        const Eigen::VectorXd goal = population[goal_index].position;
        RngStream migrate_rng = iter_root.substream(1 << 21);
        migrate(population, goal, cfg, lo, hi, migrate_rng);
        evaluate_all(population);

        auto best_it = std::min_element(
            population.begin(), population.end(),
            [](const Habitat& a, const Habitat& b) { return a.fitness < b.fitness; });
        if (best_it->fitness < incumbent.fitness) {
            incumbent = *best_it;
        } else {
            // elitism: the incumbent always stays in the population
            auto worst_it = std::max_element(
                population.begin(), population.end(),
                [](const Habitat& a, const Habitat& b) { return a.fitness < b.fitness; });
            *worst_it = incumbent;
        }

        result.trace.push_back({iter, incumbent.fitness, static_cast<int>(population.size())});
        result.iterations = iter;

        const double rel_improvement =
            (previous_best - incumbent.fitness) /
            std::max(std::abs(previous_best), 1e-300);
        stale = rel_improvement < cfg.stop_eps ? stale + 1 : 0;
        previous_best = incumbent.fitness;
        if (stale >= cfg.stop_window) {
            result.stopped_early = true;
            break;
        }
    }

    result.best_position = incumbent.position;
    result.best_fitness = incumbent.fitness;
    return result;
}

void write_trace_csv(const std::vector<TracePoint>& trace, const std::string& path) {
    CsvWriter w(path);
    w.row({"iteration", "best_fitness", "population_size"});
    for (const TracePoint& p : trace) {
        w.row({std::to_string(p.iteration), format_double(p.best_fitness),
               std::to_string(p.population_size)});
    }
}

}  // namespace mgd

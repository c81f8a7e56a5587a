#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mgd/errors.hpp"
#include "mgd/rng.hpp"

namespace mgd {

/// One candidate solution: a position inside the search box and its fitness
/// (lower is better).
struct Habitat {
    Eigen::VectorXd position;
    double fitness = std::numeric_limits<double>::infinity();
};

struct CoaConfig {
    int n_initial = 20;
    int max_population = 50;
    int eggs_min = 2;
    int eggs_max = 4;
    int n_clusters = 3;
    double motion_coefficient = 2.0;
    int max_iterations = 300;
    std::uint64_t seed = 0;
    double alpha_elr = 2.0;           // egg-laying radius scale per dimension
    double elr_decay_floor = 0.02;    // radius decay never drops below this
    double egg_demise_fraction = 0.1; // share of worst eggs dropped before merging
    double stop_eps = 1e-9;           // relative-improvement floor
    int stop_window = 50;             // consecutive stale iterations before stopping
    int threads = 1;

    void validate() const;
};

struct TracePoint {
    int iteration = 0;
    double best_fitness = 0.0;
    int population_size = 0;
};

struct CoaResult {
    Eigen::VectorXd best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::vector<TracePoint> trace;
    int iterations = 0;
    bool stopped_early = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Uniform population inside the box; deterministic for a given stream.
std::vector<Habitat> init_population(const Eigen::VectorXd& lo,
                                     const Eigen::VectorXd& hi, int count,
                                     RngStream& rng);

/// Uniform eggs in the per-dimension box of radius elr around the cuckoo,
/// clipped to the bounds.
std::vector<Habitat> lay_eggs(const Habitat& cuckoo, int egg_count,
                              const Eigen::VectorXd& elr,
                              const Eigen::VectorXd& lo,
                              const Eigen::VectorXd& hi, RngStream& rng);

/// Pure migration kernel: move coeff * u of the way towards the goal, then
/// rotate the displacement by `angle` in the (plane_i, plane_j) coordinate
/// plane. No clipping. plane_i == plane_j (or a 1-D problem) skips rotation.
Eigen::VectorXd migration_step(const Eigen::VectorXd& position,
                               const Eigen::VectorXd& goal, double coeff,
                               double u, int plane_i, int plane_j, double angle);

/// Moves every habitat towards the goal with a random step fraction and a
/// random in-plane deviation of up to pi/6, clipping to the bounds.
void migrate(std::vector<Habitat>& population, const Eigen::VectorXd& goal,
             const CoaConfig& cfg, const Eigen::VectorXd& lo,
             const Eigen::VectorXd& hi, RngStream& rng);

/// Full optimization loop: init, lay eggs, cull, cluster, migrate. The trace
/// records the incumbent best per iteration and is therefore non-increasing.
/// Non-finite objective values discard the candidate (worst fitness).
/// `initial_guesses` join the initial population (warm starts).
CoaResult optimize(const Objective& objective, const Eigen::VectorXd& lo,
                   const Eigen::VectorXd& hi, const CoaConfig& cfg,
                   const std::vector<Eigen::VectorXd>& initial_guesses = {});

void write_trace_csv(const std::vector<TracePoint>& trace, const std::string& path);

}  // namespace mgd

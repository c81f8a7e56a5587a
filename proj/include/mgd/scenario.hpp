#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "mgd/errors.hpp"
#include "mgd/rng.hpp"
#include "mgd/stochastic.hpp"

namespace mgd {

/// One probability-weighted 24-hour realization of wind speed, irradiance
/// and load multipliers. load_multiplier is hours x columns; a single column
/// means one system-wide multiplier applied to every bus.
struct Scenario {
    double probability = 0.0;
    Eigen::VectorXd wind_speed;       // m/s, per hour
    Eigen::VectorXd irradiance;       // W/m^2, per hour
    Eigen::MatrixXd load_multiplier;  // hours x load columns

    double multiplier(int hour, int bus_index) const {
        return load_multiplier.cols() == 1 ? load_multiplier(hour, 0)
                                           : load_multiplier(hour, bus_index);
    }
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;
    int horizon = 24;
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// Probability-weighted empirical histogram. cdf is per bin edge, so it has
/// one more entry than densities, starts at 0 and ends at 1.
struct Histogram {
    Eigen::VectorXd bin_edges;
    Eigen::VectorXd densities;
    Eigen::VectorXd cdf;
};

/// Per-hour sampling models for the stochastic quantities. Hours whose
/// irradiance entry is empty draw nothing and use the fixed fraction instead
/// (night hours, or hours configured with zero spread).
struct HourlyModels {
    std::vector<WeibullDist> wind;
    std::vector<std::optional<BetaDist>> irradiance;
    Eigen::VectorXd irradiance_fixed;  // fraction in [0,1], used when no dist
    double g_max = 1000.0;             // W/m^2 mapped to fraction 1.0
    std::vector<NormalDist> load_multiplier;
    int load_columns = 1;

    int horizon() const { return static_cast<int>(wind.size()); }
    void validate() const;
};

/// Monte Carlo generation: n scenarios, each with probability 1/n. Scenario i
/// draws from substream(seed, i), so generation parallelizes without changing
/// the result.
ScenarioSet generate_scenarios(const HourlyModels& models, int n,
                               std::uint64_t seed, int threads = 1);

/// Simultaneous backward reduction under the normalized L2 scenario distance.
/// Keeps `target` members of the input set and re-normalizes probabilities.
ScenarioSet reduce_scenarios(const ScenarioSet& set, int target);

/// Pairwise scenario distances: concatenated wind/irradiance/load-multiplier
/// coordinates, each dimension scaled by its standard deviation over the set.
Eigen::MatrixXd scenario_distance_matrix(const ScenarioSet& set);

/// Kernel behind reduce_scenarios: deletes scenarios one at a time, always
/// the one with minimal probability-weighted distance to its nearest
/// neighbour, transferring its probability to that neighbour. Ties break on
/// the lower scenario index. Returns the kept indices (ascending) and the
/// redistributed probabilities for them.
std::pair<std::vector<int>, Eigen::VectorXd> backward_reduce(
    const Eigen::MatrixXd& dist, const Eigen::VectorXd& probs, int target);

/// Transport cost of approximating the full set by the kept subset:
/// sum_i p_i * min_{j in kept} dist(i, j).
double transport_cost(const Eigen::MatrixXd& dist, const Eigen::VectorXd& probs,
                      const std::vector<int>& kept);

/// Probability-weighted histogram over [min, max] with equal-width bins.
Histogram empirical_distribution(const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& weights, int bins);

/// Audit/replay serialization. One row per scenario-hour; with more than one
/// load column the multiplier column expands to load_multiplier_<k>.
void write_scenarios_csv(const ScenarioSet& set, const std::string& path);
ScenarioSet read_scenarios_csv(const std::string& path);

}  // namespace mgd

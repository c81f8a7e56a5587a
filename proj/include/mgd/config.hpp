#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "mgd/coa.hpp"
#include "mgd/costs.hpp"
#include "mgd/fleet.hpp"
#include "mgd/network.hpp"
#include "mgd/reliability.hpp"
#include "mgd/scenario.hpp"

namespace mgd {

/// Fully resolved run configuration: the JSON file with every default
/// applied, the dataset loaded, and all cross-references checked. Paths in
/// the file are taken relative to the file's directory.
struct RunConfig {
    int config_version = 1;
    std::uint64_t seed = 1;
    int horizon = 24;
    int period_len = 3;

    int n_generate = 1000;
    int n_keep = 30;
    bool per_bus_load_multipliers = false;

    double weibull_shape = 3.0;
    double weibull_scale = 12.0;  // m/s
    Eigen::VectorXd wind_scale_profile;

    Eigen::VectorXd irr_mean_profile;  // fraction of g_max
    Eigen::VectorXd irr_std_profile;
    double g_max = 1000.0;
    BetaMomentIdentity beta_identity = BetaMomentIdentity::MuPlusOne;

    Eigen::VectorXd load_mean_profile;  // multiplier on nominal bus loads
    Eigen::VectorXd load_std_profile;

    Eigen::VectorXd t_cell_profile;  // degC

    Fleet fleet;
    Prices prices;
    Weights weights;
    ReliabilityOptions reliability;
    double penalty_coefficient = 1e6;
    CoaConfig coa;
    bool warm_start = true;
    int threads = 1;

    std::string dataset_path;  // resolved
    std::string out_dir;       // resolved; empty means derive from seed
    std::string config_dir;
    std::string config_hash;
    std::string dataset_hash;

    NetworkModel network;

    /// Per-hour sampling models assembled from the profiles above.
    HourlyModels hourly_models() const;
};

/// Parses and validates a JSON run configuration. Unknown keys, type
/// mismatches and dangling bus references raise ConfigError naming the key;
/// dataset problems raise DatasetError.
RunConfig load_config(const std::string& path);

}  // namespace mgd

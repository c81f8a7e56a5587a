#include "mgd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgd/csv.hpp"
#include "mgd/parallel.hpp"

namespace mgd {

void ScenarioSet::validate() const {
    if (scenarios.empty()) {
        throw InvalidParameter("ScenarioSet: must contain at least one scenario");
    }
    double total = 0.0;
    for (const auto& s : scenarios) {
        if (!(s.probability > 0.0 && s.probability <= 1.0)) {
            throw InvalidParameter("ScenarioSet: scenario probability outside (0, 1]");
        }
        if (s.wind_speed.size() != horizon || s.irradiance.size() != horizon ||
            s.load_multiplier.rows() != horizon) {
            throw InvalidParameter("ScenarioSet: per-hour arrays must match the horizon");
        }
        const bool finite = s.wind_speed.allFinite() && s.irradiance.allFinite() &&
                            s.load_multiplier.allFinite();
        if (!finite || s.wind_speed.minCoeff() < 0.0 || s.irradiance.minCoeff() < 0.0 ||
            s.load_multiplier.minCoeff() < 0.0) {
            throw InvalidParameter("ScenarioSet: entries must be finite and non-negative");
        }
        total += s.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidParameter("ScenarioSet: probabilities must sum to 1");
    }
}

void HourlyModels::validate() const {
    const size_t h = wind.size();
    if (h == 0) throw InvalidParameter("HourlyModels: empty horizon");
    if (irradiance.size() != h || load_multiplier.size() != h ||
        irradiance_fixed.size() != static_cast<Eigen::Index>(h)) {
        throw InvalidParameter("HourlyModels: per-hour model lists must share one horizon");
    }
    if (!(g_max > 0.0)) throw InvalidParameter("HourlyModels: g_max must be positive");
    if (load_columns < 1) throw InvalidParameter("HourlyModels: load_columns must be >= 1");
    for (const auto& w : wind) w.validate();
    for (const auto& b : irradiance) {
        if (b) b->validate();
    }
    for (const auto& l : load_multiplier) l.validate();
}

ScenarioSet generate_scenarios(const HourlyModels& models, int n,
                               std::uint64_t seed, int threads) {
    models.validate();
    if (n < 1) {
        throw InvalidParameter("generate_scenarios: scenario count must be >= 1");
    }
    const int h = models.horizon();
    ScenarioSet set;
    set.horizon = h;
    set.master_seed = seed;
    set.scenarios.resize(n);

    const RngStream master(seed);
    parallel_for(n, threads, [&](int i) {
        RngStream rng = master.substream(static_cast<std::uint64_t>(i));
        Scenario s;
        s.probability = 1.0 / n;
        s.wind_speed.resize(h);
        s.irradiance.resize(h);
        s.load_multiplier.resize(h, models.load_columns);
        for (int t = 0; t < h; ++t) {
            s.wind_speed(t) = sample_wind_speed(models.wind[t], rng);
            const double frac = models.irradiance[t]
                                    ? sample_irradiance_fraction(*models.irradiance[t], rng)
                                    : models.irradiance_fixed(t);
            s.irradiance(t) = frac * models.g_max;
            for (int c = 0; c < models.load_columns; ++c) {
                s.load_multiplier(t, c) = sample_load(models.load_multiplier[t], rng);
            }
        }
        set.scenarios[i] = std::move(s);
    });
    return set;
}

Eigen::MatrixXd scenario_distance_matrix(const ScenarioSet& set) {
    const int n = static_cast<int>(set.scenarios.size());
    const int h = set.horizon;
    const int cols = static_cast<int>(set.scenarios.front().load_multiplier.cols());
    const int dim = h * (2 + cols);

    Eigen::MatrixXd features(n, dim);
    for (int i = 0; i < n; ++i) {
        const Scenario& s = set.scenarios[i];
        features.row(i).segment(0, h) = s.wind_speed.transpose();
        features.row(i).segment(h, h) = s.irradiance.transpose();
        for (int c = 0; c < cols; ++c) {
            features.row(i).segment(h * (2 + c), h) = s.load_multiplier.col(c).transpose();
        }
    }
    // scale each dimension by its std over the set; flat dimensions drop out
    for (int d = 0; d < dim; ++d) {
        const double mean = features.col(d).mean();
        const double var = (features.col(d).array() - mean).square().mean();
        const double sd = std::sqrt(var);
        if (sd > 1e-12) {
            features.col(d) /= sd;
        } else {
            features.col(d).setZero();
        }
    }

    Eigen::MatrixXd dist(n, n);
    for (int i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double d = (features.row(i) - features.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

namespace {

// nearest alive neighbour of i, ties to the lower index
int nearest_alive(const Eigen::MatrixXd& dist, const std::vector<char>& alive, int i) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(alive.size());
    for (int j = 0; j < n; ++j) {
        if (j == i || !alive[j]) continue;
        if (dist(i, j) < best_d) {
            best_d = dist(i, j);
            best = j;
        }
    }
    return best;
}

}  // namespace

std::pair<std::vector<int>, Eigen::VectorXd> backward_reduce(
    const Eigen::MatrixXd& dist, const Eigen::VectorXd& probs, int target) {
    const int n = static_cast<int>(probs.size());
    if (target < 1 || target > n) {
        throw InvalidParameter("backward_reduce: target must be in [1, set size]");
    }
    std::vector<char> alive(n, 1);
    Eigen::VectorXd p = probs;
    std::vector<int> nn(n, -1);
    if (target < n) {
        for (int i = 0; i < n; ++i) nn[i] = nearest_alive(dist, alive, i);
    }

    int remaining = n;
    while (remaining > target) {
        // delete the scenario with minimal probability-weighted nearest distance
        int victim = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            const double score = p(i) * dist(i, nn[i]);
            if (score < best) {
                best = score;
                victim = i;
            }
        }
        if (victim < 0 || nn[victim] < 0) break;  // only with remaining < 2
        const int heir = nn[victim];
        p(heir) += p(victim);
        p(victim) = 0.0;
        alive[victim] = 0;
        --remaining;
        if (remaining == 1) break;
        for (int i = 0; i < n; ++i) {
            if (alive[i] && nn[i] == victim) nn[i] = nearest_alive(dist, alive, i);
        }
    }

    std::vector<int> kept;
    kept.reserve(target);
    for (int i = 0; i < n; ++i) {
        if (alive[i]) kept.push_back(i);
    }
    Eigen::VectorXd kept_probs(kept.size());
    for (size_t k = 0; k < kept.size(); ++k) kept_probs(k) = p(kept[k]);
    kept_probs /= kept_probs.sum();
    return {kept, kept_probs};
}

ScenarioSet reduce_scenarios(const ScenarioSet& set, int target) {
    set.validate();
    const int n = static_cast<int>(set.scenarios.size());
    if (target < 1 || target > n) {
        throw InvalidParameter("reduce_scenarios: target must be in [1, set size]");
    }
    if (target == n) return set;

    Eigen::VectorXd probs(n);
    for (int i = 0; i < n; ++i) probs(i) = set.scenarios[i].probability;
    const Eigen::MatrixXd dist = scenario_distance_matrix(set);
    auto [kept, kept_probs] = backward_reduce(dist, probs, target);

    ScenarioSet out;
    out.horizon = set.horizon;
    out.master_seed = set.master_seed;
    out.scenarios.reserve(kept.size());
    for (size_t k = 0; k < kept.size(); ++k) {
        Scenario s = set.scenarios[kept[k]];
        s.probability = kept_probs(k);
        out.scenarios.push_back(std::move(s));
    }
    return out;
}

double transport_cost(const Eigen::MatrixXd& dist, const Eigen::VectorXd& probs,
                      const std::vector<int>& kept) {
    double cost = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j : kept) {
            best = std::min(best, dist(i, j));
        }
        cost += probs(i) * best;
    }
    return cost;
}

Histogram empirical_distribution(const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& weights, int bins) {
    if (values.size() == 0) {
        throw InvalidInput("empirical_distribution: empty sample list");
    }
    if (bins < 1) {
        throw InvalidParameter("empirical_distribution: bins must be >= 1");
    }
    if (weights.size() != values.size()) {
        throw InvalidInput("empirical_distribution: values and weights differ in length");
    }
    const double total = weights.sum();
    if (!(total > 0.0)) {
        throw InvalidInput("empirical_distribution: total weight must be positive");
    }

    double lo = values.minCoeff();
    double hi = values.maxCoeff();
    if (hi - lo <= 0.0) {
        // degenerate range: a single occupied bin of nominal width
        const double w = (std::abs(lo) > 0.0 ? std::abs(lo) : 1.0) * 1e-6;
        lo -= 0.5 * w;
        hi += 0.5 * w;
        bins = 1;
    }
    const double width = (hi - lo) / bins;

    Eigen::VectorXd mass = Eigen::VectorXd::Zero(bins);
    for (int i = 0; i < values.size(); ++i) {
        int b = static_cast<int>((values(i) - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        mass(b) += weights(i) / total;
    }

    Histogram h;
    h.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.bin_edges(b) = lo + b * width;
    h.densities = mass / width;
    h.cdf.resize(bins + 1);
    h.cdf(0) = 0.0;
    for (int b = 0; b < bins; ++b) h.cdf(b + 1) = h.cdf(b) + mass(b);
    h.cdf(bins) = 1.0;
    return h;
}

void write_scenarios_csv(const ScenarioSet& set, const std::string& path) {
    CsvWriter w(path);
    const int cols = set.scenarios.empty()
                         ? 1
                         : static_cast<int>(set.scenarios.front().load_multiplier.cols());
    std::vector<std::string> header = {"scenario_id", "probability", "hour",
                                       "wind_speed", "irradiance"};
    if (cols == 1) {
        header.push_back("load_multiplier");
    } else {
        for (int c = 0; c < cols; ++c) {
            header.push_back("load_multiplier_" + std::to_string(c));
        }
    }
    w.row(header);
    for (size_t i = 0; i < set.scenarios.size(); ++i) {
        const Scenario& s = set.scenarios[i];
        for (int t = 0; t < set.horizon; ++t) {
            std::vector<std::string> row = {
                std::to_string(i), format_double(s.probability), std::to_string(t),
                format_double(s.wind_speed(t)), format_double(s.irradiance(t))};
            for (int c = 0; c < cols; ++c) {
                row.push_back(format_double(s.load_multiplier(t, c)));
            }
            w.row(row);
        }
    }
}

ScenarioSet read_scenarios_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) {
        throw DatasetError("scenario file has no data rows: " + path);
    }
    const auto& header = rows[0];
    if (header.size() < 6 || header[0] != "scenario_id") {
        throw DatasetError("scenario file has an unexpected header: " + path);
    }
    const int cols = static_cast<int>(header.size()) - 5;

    ScenarioSet set;
    int horizon = 0;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 1);
        if (f.size() != header.size()) {
            throw DatasetError("wrong field count in " + ctx);
        }
        const long id = parse_long(f[0], ctx);
        const int hour = static_cast<int>(parse_long(f[2], ctx));
        if (id == static_cast<long>(set.scenarios.size())) {
            set.scenarios.emplace_back();
            set.scenarios.back().probability = parse_double(f[1], ctx);
        } else if (id + 1 != static_cast<long>(set.scenarios.size())) {
            throw DatasetError("scenario ids must be contiguous, " + ctx);
        }
        Scenario& s = set.scenarios.back();
        if (hour != s.wind_speed.size()) {
            throw DatasetError("hours must be contiguous per scenario, " + ctx);
        }
        s.wind_speed.conservativeResize(hour + 1);
        s.irradiance.conservativeResize(hour + 1);
        s.load_multiplier.conservativeResize(hour + 1, cols);
        s.wind_speed(hour) = parse_double(f[3], ctx);
        s.irradiance(hour) = parse_double(f[4], ctx);
        for (int c = 0; c < cols; ++c) {
            s.load_multiplier(hour, c) = parse_double(f[5 + c], ctx);
        }
        horizon = std::max(horizon, hour + 1);
    }
    set.horizon = horizon;
    set.validate();
    return set;
}

}  // namespace mgd

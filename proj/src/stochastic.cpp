#include "mgd/stochastic.hpp"

#include <cmath>

namespace mgd {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void WtParams::validate() const {
    if (!(finite(v_cut_in) && finite(v_rated) && finite(v_cut_out)) ||
        !(0.0 < v_cut_in && v_cut_in < v_rated && v_rated < v_cut_out)) {
        throw InvalidParameter("WtParams: speeds must satisfy 0 < v_cut_in < v_rated < v_cut_out");
    }
    if (!(p_rate_kw > 0.0)) {
        throw InvalidParameter("WtParams: p_rate_kw must be positive");
    }
    const auto q = [&](double v) { return quad_a * v * v + quad_b * v + quad_c; };
    if (std::abs(q(v_cut_in)) > 1e-9 || std::abs(q(v_rated) - 1.0) > 1e-9) {
        throw InvalidParameter("WtParams: quadratic must be 0 at cut-in and 1 at rated speed");
    }
}

void WeibullDist::validate() const {
    if (!(shape > 0.0) || !(scale > 0.0) || !finite(shape) || !finite(scale)) {
        throw InvalidParameter("WeibullDist: shape and scale must be positive");
    }
}

void BetaDist::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !finite(alpha) || !finite(beta)) {
        throw InvalidParameter("BetaDist: alpha and beta must be positive");
    }
}

void PvParams::validate() const {
    if (!(p_stc_kw > 0.0) || !(g_stc > 0.0)) {
        throw InvalidParameter("PvParams: p_stc_kw and g_stc must be positive");
    }
}

void NormalDist::validate() const {
    if (!(std >= 0.0) || !finite(mean) || !finite(std)) {
        throw InvalidParameter("NormalDist: std must be non-negative and parameters finite");
    }
}

Eigen::Vector3d fit_wt_quadratic(double v_cut_in, double v_rated) {
    if (!finite(v_cut_in) || !finite(v_rated) || !(0.0 < v_cut_in && v_cut_in < v_rated)) {
        throw InvalidParameter("fit_wt_quadratic: need 0 < v_cut_in < v_rated, both finite");
    }
    const double v_m = 0.5 * (v_cut_in + v_rated);
    const double mid = std::pow(v_m / v_rated, 3.0);

    Eigen::Matrix3d vand;
    vand << v_cut_in * v_cut_in, v_cut_in, 1.0,
            v_rated * v_rated, v_rated, 1.0,
            v_m * v_m, v_m, 1.0;
    Eigen::Vector3d rhs(0.0, 1.0, mid);
    return vand.fullPivLu().solve(rhs);
}

WtParams make_wt_params(double p_rate_kw, double v_cut_in, double v_rated,
                        double v_cut_out) {
    WtParams p;
    p.p_rate_kw = p_rate_kw;
    p.v_cut_in = v_cut_in;
    p.v_rated = v_rated;
    p.v_cut_out = v_cut_out;
    const Eigen::Vector3d abc = fit_wt_quadratic(v_cut_in, v_rated);
    p.quad_a = abc(0);
    p.quad_b = abc(1);
    p.quad_c = abc(2);
    p.validate();
    return p;
}

double wt_power(double v, const WtParams& p) {
    if (!(v >= 0.0)) {
        throw InvalidInput("wt_power: wind speed must be non-negative");
    }
    if (v < p.v_cut_in || v > p.v_cut_out) return 0.0;
    if (v >= p.v_rated) return p.p_rate_kw;
    const double frac = p.quad_a * v * v + p.quad_b * v + p.quad_c;
    return std::min(std::max(frac, 0.0), 1.0) * p.p_rate_kw;
}

double wind_speed_from_uniform(const WeibullDist& d, double u) {
    d.validate();
    return d.scale * std::pow(-std::log1p(-u), 1.0 / d.shape);
}

double sample_wind_speed(const WeibullDist& d, RngStream& rng) {
    return wind_speed_from_uniform(d, rng.uniform01());
}

BetaDist beta_params_from_moments(double mean, double std,
                                  BetaMomentIdentity identity) {
    if (!(mean > 0.0 && mean < 1.0) || !(std > 0.0)) {
        throw InvalidParameter("beta_params_from_moments: need 0 < mean < 1 and std > 0");
    }
    const double var = std * std;
    const double factor = identity == BetaMomentIdentity::MuPlusOne
                              ? mean * (1.0 + mean)
                              : mean * (1.0 - mean);
    const double beta = (1.0 - mean) * (factor / var - 1.0);
    const double alpha = mean * beta / (1.0 - mean);
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw InfeasibleMoments("beta_params_from_moments: moments yield non-positive shape parameters");
    }
    return BetaDist{alpha, beta};
}

double sample_gamma(double shape, RngStream& rng) {
    if (!(shape > 0.0)) {
        throw InvalidParameter("sample_gamma: shape must be positive");
    }
    if (shape < 1.0) {
        // boost to shape+1, then scale by U^(1/shape)
        const double g = sample_gamma(shape + 1.0, rng);
        const double u = 1.0 - rng.uniform01();  // (0, 1]
        return g * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - rng.uniform01();  // (0, 1] so log is safe
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_irradiance_fraction(const BetaDist& d, RngStream& rng) {
    d.validate();
    const double x = sample_gamma(d.alpha, rng);
    const double y = sample_gamma(d.beta, rng);
    const double s = x + y;
    if (s <= 0.0) return 0.0;
    return std::min(std::max(x / s, 0.0), 1.0);
}

double pv_power(double g, const PvParams& p) {
    return pv_power(g, p, p.t_cell_c);
}

double pv_power(double g, const PvParams& p, double t_cell_c) {
    if (!(g >= 0.0)) {
        throw InvalidInput("pv_power: irradiance must be non-negative");
    }
    const double raw = p.p_stc_kw * (g / p.g_stc) *
                       (1.0 + p.k_temp * (t_cell_c - p.t_ref_c));
    return std::max(raw, 0.0);
}

double sample_load(const NormalDist& d, RngStream& rng) {
    d.validate();
    if (d.std == 0.0) return std::max(d.mean, 0.0);
    return std::max(d.mean + d.std * rng.normal(), 0.0);
}

}  // namespace mgd

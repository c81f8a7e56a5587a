#pragma once

#include <Eigen/Dense>

#include "mgd/errors.hpp"
#include "mgd/rng.hpp"

namespace mgd {

// ---------------------------------------------------------------------------
// Distribution and device-curve parameter sets
// ---------------------------------------------------------------------------

/// Wind turbine power curve: zero below cut-in and above cut-out, a fitted
/// quadratic fraction of rated power between cut-in and rated speed, rated
/// power between rated and cut-out speed.
struct WtParams {
    double p_rate_kw = 250.0;
    double v_cut_in = 2.0;    // m/s
    double v_rated = 14.0;    // m/s
    double v_cut_out = 25.0;  // m/s
    double quad_a = 0.0;
    double quad_b = 0.0;
    double quad_c = 0.0;

    void validate() const;
};

struct WeibullDist {
    double shape = 1.0;
    double scale = 1.0;  // m/s

    void validate() const;
};

struct BetaDist {
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const;
};

struct PvParams {
    double p_stc_kw = 250.0;
    double g_stc = 1000.0;  // W/m^2
    double k_temp = 0.001;  // 1/degC
    double t_ref_c = 25.0;
    double t_cell_c = 25.0;  // operating cell temperature

    void validate() const;
};

struct NormalDist {
    double mean = 0.0;  // kW
    double std = 0.0;   // kW

    void validate() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Fits the partial-load quadratic through (v_ci, 0), (v_r, 1) and the
/// midpoint anchor (v_m, (v_m/v_r)^3) with v_m = (v_ci + v_r)/2, so the
/// mid-range tracks the cubic wind-power law. Returns (a, b, c).
Eigen::Vector3d fit_wt_quadratic(double v_cut_in, double v_rated);

/// Convenience: WtParams with the quadratic fitted from the speed points.
WtParams make_wt_params(double p_rate_kw, double v_cut_in, double v_rated,
                        double v_cut_out);

/// Piecewise power curve, kW. Rated region is inclusive on both ends, so the
/// step to zero happens just beyond cut-out.
double wt_power(double v, const WtParams& p);

/// Inverse-CDF draw: scale * (-ln(1-u))^(1/shape), u uniform on [0,1).
double sample_wind_speed(const WeibullDist& d, RngStream& rng);
double wind_speed_from_uniform(const WeibullDist& d, double u);

/// Which moment identity to use when inverting (mean, std) into Beta shape
/// parameters. MuPlusOne is the primary mode: beta = (1-mu)(mu(1+mu)/sigma^2 - 1).
/// Standard uses mu(1-mu) and reproduces the requested std exactly.
enum class BetaMomentIdentity { MuPlusOne, Standard };

BetaDist beta_params_from_moments(double mean, double std,
                                  BetaMomentIdentity identity =
                                      BetaMomentIdentity::MuPlusOne);

/// Beta(alpha, beta) draw in [0, 1] via two Marsaglia-Tsang gamma draws.
double sample_irradiance_fraction(const BetaDist& d, RngStream& rng);

/// Gamma(shape, 1) draw, shape > 0.
double sample_gamma(double shape, RngStream& rng);

/// p_stc * g/g_stc * (1 + k (t_cell - t_ref)), clamped at zero. The second
/// form overrides the stored operating temperature (hourly profiles).
double pv_power(double g, const PvParams& p);
double pv_power(double g, const PvParams& p, double t_cell_c);

/// Gaussian draw clamped at zero (negative demand is unphysical).
double sample_load(const NormalDist& d, RngStream& rng);

}  // namespace mgd

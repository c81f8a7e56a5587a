#include <doctest.h>

#include <cmath>

#include "mgd/stochastic.hpp"

using namespace mgd;

namespace {

// Cramer's-rule solve of the 3x3 anchor system, independent of the
// implementation's linear algebra. Anchors: (v_ci, 0), (v_r, 1) and the
// midpoint matched to the cubic wind-power law.
void oracle_quadratic(double v_ci, double v_r, double& a, double& b, double& c) {
    const double v_m = 0.5 * (v_ci + v_r);
    const double y_m = std::pow(v_m / v_r, 3.0);
    const double x1 = v_ci, x2 = v_r, x3 = v_m;
    const double y1 = 0.0, y2 = 1.0, y3 = y_m;
    const double det = x1 * x1 * (x2 - x3) - x1 * (x2 * x2 - x3 * x3) +
                       (x2 * x2 * x3 - x3 * x3 * x2);
    const double det_a = y1 * (x2 - x3) - x1 * (y2 - y3) + (y2 * x3 - y3 * x2);
    const double det_b =
        x1 * x1 * (y2 - y3) - y1 * (x2 * x2 - x3 * x3) + (x2 * x2 * y3 - x3 * x3 * y2);
    const double det_c = x1 * x1 * (x2 * y3 - x3 * y2) - x1 * (x2 * x2 * y3 - x3 * x3 * y2) +
                         y1 * (x2 * x2 * x3 - x3 * x3 * x2);
    a = det_a / det;
    b = det_b / det;
    c = det_c / det;
}

}  // namespace

TEST_SUITE("stochastic") {

TEST_CASE("wt quadratic fit hits its anchors") {
    const Eigen::Vector3d abc = fit_wt_quadratic(2.0, 14.0);
    const auto q = [&](double v) { return abc(0) * v * v + abc(1) * v + abc(2); };
    CHECK(std::abs(q(2.0)) < 1e-9);
    CHECK(q(14.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(q(8.0) == doctest::Approx(std::pow(8.0 / 14.0, 3.0)).epsilon(1e-9));
}

TEST_CASE("wt quadratic fit matches the Cramer oracle") {
    double a, b, c;
    oracle_quadratic(2.0, 14.0, a, b, c);
    const Eigen::Vector3d abc = fit_wt_quadratic(2.0, 14.0);
    CHECK(std::abs(abc(0) - a) < 1e-12);
    CHECK(std::abs(abc(1) - b) < 1e-12);
    CHECK(std::abs(abc(2) - c) < 1e-12);

    oracle_quadratic(1.0, 2.0, a, b, c);
    const Eigen::Vector3d abc2 = fit_wt_quadratic(1.0, 2.0);
    const auto q = [&](double v) { return abc2(0) * v * v + abc2(1) * v + abc2(2); };
    CHECK(std::abs(q(1.0)) < 1e-9);
    CHECK(q(2.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("wt quadratic fit rejects bad speeds") {
    CHECK_THROWS_AS(fit_wt_quadratic(14.0, 2.0), InvalidParameter);
    CHECK_THROWS_AS(fit_wt_quadratic(0.0, 2.0), InvalidParameter);
    CHECK_THROWS_AS(fit_wt_quadratic(std::nan(""), 2.0), InvalidParameter);
}

TEST_CASE("wt power curve regions") {
    const WtParams p = make_wt_params(250.0, 2.0, 14.0, 25.0);
    CHECK(wt_power(1.0, p) == 0.0);
    CHECK(wt_power(20.0, p) == 250.0);
    CHECK(wt_power(30.0, p) == 0.0);
    CHECK(wt_power(25.0, p) == 250.0);
    CHECK(wt_power(25.0 + 1e-9, p) == 0.0);

    // partial-load region equals the fitted quadratic
    double a, b, c;
    oracle_quadratic(2.0, 14.0, a, b, c);
    const double expected = (a * 64.0 + b * 8.0 + c) * 250.0;
    CHECK(wt_power(8.0, p) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(wt_power(-1.0, p), InvalidInput);
}

TEST_CASE("wt power is continuous and monotone between cut-in and rated") {
    const WtParams p = make_wt_params(250.0, 2.0, 14.0, 25.0);
    const double eps = 1e-7;
    CHECK(std::abs(wt_power(2.0 - eps, p) - wt_power(2.0 + eps, p)) < 1e-9 * 250.0 + 1e-4);
    CHECK(std::abs(wt_power(14.0 - eps, p) - wt_power(14.0 + eps, p)) < 1e-3);
    // step at cut-out
    CHECK(wt_power(25.0 - eps, p) == 250.0);
    CHECK(wt_power(25.0 + eps, p) == 0.0);

    double prev = -1.0;
    for (double v = 2.0; v <= 14.0; v += 0.01) {
        const double w = wt_power(v, p);
        CHECK(w >= prev - 1e-12);
        CHECK(w >= 0.0);
        CHECK(w <= 250.0);
        prev = w;
    }
}

TEST_CASE("weibull inverse-CDF sampling") {
    const WeibullDist d{1.0, 1.0};
    CHECK(wind_speed_from_uniform(d, 0.0) == 0.0);
    CHECK(wind_speed_from_uniform(d, 1.0 - 1.0 / std::exp(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const WeibullDist w{3.0, 12.0};
    RngStream rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += sample_wind_speed(w, rng);
    const double analytic_mean = 12.0 * std::tgamma(1.0 + 1.0 / 3.0);
    CHECK(sum / n == doctest::Approx(analytic_mean).epsilon(0.05 / analytic_mean));
}

TEST_CASE("weibull parameter validation") {
    CHECK_THROWS_AS(wind_speed_from_uniform(WeibullDist{0.0, 1.0}, 0.5), InvalidParameter);
    CHECK_THROWS_AS(wind_speed_from_uniform(WeibullDist{1.0, -1.0}, 0.5), InvalidParameter);
}

TEST_CASE("beta parameters from moments, identity as primary") {
    // exact up to double rounding (0.1^2 is not representable)
    const BetaDist d = beta_params_from_moments(0.5, 0.1);
    CHECK(d.alpha == doctest::Approx(37.0).epsilon(1e-12));
    CHECK(d.beta == doctest::Approx(37.0).epsilon(1e-12));

    const BetaDist d2 = beta_params_from_moments(0.6, 0.1);
    CHECK(d2.beta == doctest::Approx(38.0).epsilon(1e-9));
    CHECK(d2.alpha == doctest::Approx(57.0).epsilon(1e-9));

    CHECK_THROWS_AS(beta_params_from_moments(0.5, 1.0), InfeasibleMoments);
    CHECK_THROWS_AS(beta_params_from_moments(0.0, 0.1), InvalidParameter);
    CHECK_THROWS_AS(beta_params_from_moments(1.0, 0.1), InvalidParameter);
}

TEST_CASE("beta moment recovery") {
    // the mean comes back exactly under either identity
    for (const auto identity :
         {BetaMomentIdentity::MuPlusOne, BetaMomentIdentity::Standard}) {
        const BetaDist d = beta_params_from_moments(0.3, 0.08, identity);
        CHECK(d.alpha / (d.alpha + d.beta) == doctest::Approx(0.3).epsilon(1e-12));
    }
    // the standard identity also reproduces the requested std exactly
    const BetaDist d = beta_params_from_moments(0.3, 0.08, BetaMomentIdentity::Standard);
    const double var = d.alpha * d.beta /
                       ((d.alpha + d.beta) * (d.alpha + d.beta) * (d.alpha + d.beta + 1.0));
    CHECK(std::sqrt(var) == doctest::Approx(0.08).epsilon(1e-9));
    // the primary identity deviates; it is not moment-exact
    const BetaDist dp = beta_params_from_moments(0.3, 0.08, BetaMomentIdentity::MuPlusOne);
    const double varp = dp.alpha * dp.beta /
                        ((dp.alpha + dp.beta) * (dp.alpha + dp.beta) * (dp.alpha + dp.beta + 1.0));
    CHECK(std::sqrt(varp) != doctest::Approx(0.08).epsilon(1e-9));
}

TEST_CASE("beta sampling statistics") {
    const int n = 100000;
    RngStream rng(11);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_irradiance_fraction(BetaDist{1.0, 1.0}, rng);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));

    RngStream rng2(12);
    sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_irradiance_fraction(BetaDist{3.0, 12.0}, rng2);
    CHECK(sum / n == doctest::Approx(0.2).epsilon(0.025));

    RngStream rng3(13);
    sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = sample_irradiance_fraction(BetaDist{37.0, 37.0}, rng3);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        sum += s;
        sum2 += s * s;
    }
    const double mean = sum / n;
    const double std = std::sqrt(sum2 / n - mean * mean);
    const double analytic = std::sqrt(37.0 * 37.0 / (74.0 * 74.0 * 75.0));
    CHECK(std == doctest::Approx(analytic).epsilon(0.003 / analytic));
}

TEST_CASE("pv conversion") {
    PvParams p;
    p.p_stc_kw = 250.0;
    p.g_stc = 1000.0;
    p.k_temp = 0.001;
    p.t_ref_c = 25.0;
    p.t_cell_c = 25.0;
    CHECK(pv_power(1000.0, p) == doctest::Approx(250.0).epsilon(1e-12));
    CHECK(pv_power(0.0, p) == 0.0);
    CHECK(pv_power(500.0, p, 35.0) == doctest::Approx(126.25).epsilon(1e-12));
    CHECK_THROWS_AS(pv_power(-1.0, p), InvalidInput);

    // linear in irradiance at fixed temperature
    CHECK(pv_power(800.0, p) == doctest::Approx(2.0 * pv_power(400.0, p)).epsilon(1e-12));
    // negative temperature correction clamps at zero
    PvParams cold = p;
    cold.k_temp = 0.5;
    CHECK(pv_power(500.0, cold, -25.0) == 0.0);
}

TEST_CASE("load sampling") {
    RngStream rng(21);
    const NormalDist degenerate{100.0, 0.0};
    for (int i = 0; i < 5; ++i) CHECK(sample_load(degenerate, rng) == 100.0);

    const NormalDist d{100.0, 10.0};
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += sample_load(d, rng);
    CHECK(sum / n == doctest::Approx(100.0).epsilon(0.001));

    const NormalDist wild{1.0, 100.0};
    for (int i = 0; i < 1000; ++i) CHECK(sample_load(wild, rng) >= 0.0);

    CHECK_THROWS_AS(sample_load(NormalDist{1.0, -1.0}, rng), InvalidParameter);
}

TEST_CASE("sampling is deterministic per seed") {
    RngStream a(99), b(99);
    const WeibullDist w{3.0, 12.0};
    const BetaDist beta{2.5, 4.5};
    for (int i = 0; i < 200; ++i) {
        CHECK(sample_wind_speed(w, a) == sample_wind_speed(w, b));
        CHECK(sample_irradiance_fraction(beta, a) == sample_irradiance_fraction(beta, b));
    }
    // substreams are independent of sibling consumption order
    RngStream root(5);
    RngStream s1 = root.substream(1);
    double first = s1.uniform01();
    RngStream root2(5);
    root2.substream(7).uniform01();
    CHECK(root2.substream(1).uniform01() == first);
}

}  // TEST_SUITE

#include "mgd/fleet.hpp"

namespace mgd {

void ChpParams::validate() const {
    if (theta < 0.0) throw InvalidParameter("ChpParams: theta must be >= 0");
    if (!(elec_eff > 0.0 && elec_eff <= 1.0)) {
        throw InvalidParameter("ChpParams: elec_eff must be in (0, 1]");
    }
    if (!(0.0 <= p_min_kw && p_min_kw <= p_max_kw)) {
        throw InvalidParameter("ChpParams: need 0 <= p_min <= p_max");
    }
}

void EssParams::validate() const {
    if (!(eta_ch > 0.0 && eta_ch <= 1.0 && eta_dis > 0.0 && eta_dis <= 1.0)) {
        throw InvalidParameter("EssParams: efficiencies must be in (0, 1]");
    }
    if (!(soc_min_kwh <= soc_init_kwh && soc_init_kwh <= soc_max_kwh)) {
        throw InvalidParameter("EssParams: need soc_min <= soc_init <= soc_max");
    }
    if (p_ch_max_kw < 0.0 || p_dis_max_kw < 0.0) {
        throw InvalidParameter("EssParams: power limits must be >= 0");
    }
}

void Fleet::validate() const {
    for (const auto& u : wt) u.curve.validate();
    for (const auto& u : pv) u.panel.validate();
    for (const auto& u : chp) u.validate();
    for (const auto& u : ess) u.validate();
}

Eigen::VectorXd DispatchSchedule::flatten() const {
    const int h = horizon();
    const int nc = static_cast<int>(chp_p.cols());
    const int ne = static_cast<int>(ess_p.cols());
    Eigen::VectorXd x(h * (nc + ne));
    int k = 0;
    for (int c = 0; c < nc; ++c) {
        x.segment(k, h) = chp_p.col(c);
        k += h;
    }
    for (int e = 0; e < ne; ++e) {
        x.segment(k, h) = ess_p.col(e);
        k += h;
    }
    return x;
}

DispatchSchedule DispatchSchedule::unflatten(const Eigen::VectorXd& x, int horizon,
                                             int n_chp, int n_ess) {
    if (x.size() != horizon * (n_chp + n_ess)) {
        throw InvalidInput("DispatchSchedule::unflatten: vector length does not match shape");
    }
    DispatchSchedule s = zeros(horizon, n_chp, n_ess);
    int k = 0;
    for (int c = 0; c < n_chp; ++c) {
        s.chp_p.col(c) = x.segment(k, horizon);
        k += horizon;
    }
    for (int e = 0; e < n_ess; ++e) {
        s.ess_p.col(e) = x.segment(k, horizon);
        k += horizon;
    }
    return s;
}

DispatchSchedule DispatchSchedule::zeros(int horizon, int n_chp, int n_ess) {
    DispatchSchedule s;
    s.chp_p = Eigen::MatrixXd::Zero(horizon, n_chp);
    s.ess_p = Eigen::MatrixXd::Zero(horizon, n_ess);
    return s;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> schedule_bounds(const Fleet& fleet,
                                                            int horizon) {
    const int nc = static_cast<int>(fleet.chp.size());
    const int ne = static_cast<int>(fleet.ess.size());
    Eigen::VectorXd lo(horizon * (nc + ne)), hi(horizon * (nc + ne));
    int k = 0;
    for (int c = 0; c < nc; ++c) {
        lo.segment(k, horizon).setConstant(fleet.chp[c].p_min_kw);
        hi.segment(k, horizon).setConstant(fleet.chp[c].p_max_kw);
        k += horizon;
    }
    for (int e = 0; e < ne; ++e) {
        lo.segment(k, horizon).setConstant(-fleet.ess[e].p_ch_max_kw);
        hi.segment(k, horizon).setConstant(fleet.ess[e].p_dis_max_kw);
        k += horizon;
    }
    return {lo, hi};
}

}  // namespace mgd

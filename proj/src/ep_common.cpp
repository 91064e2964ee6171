#include "epprobit/ep_common.hpp"

#include <algorithm>
#include <cmath>

#include "epprobit/errors.hpp"
#include "epprobit/special_functions.hpp"

namespace epprobit {

void EPConfig::check() const {
    if (!std::isfinite(tol) || tol <= 0.0) throw InvalidConfig("tol must be finite and > 0");
    if (max_sweeps < 1) throw InvalidConfig("max_sweeps must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw InvalidConfig("damping must lie in (0, 1]");
}

HybridMoments hybrid_moments(const HybridSNParams& cavity) {
    const auto z = zeta(cavity.tau);
    return {cavity.xi + (z.zeta1 * cavity.s) * cavity.omega_x, z.zeta2 * cavity.s * cavity.s};
}

SiteMatch match_site(double h, double shift_dot, double sign) {
    SiteMatch out{};
    out.s = sign / std::sqrt(1.0 + h);
    out.tau = out.s * shift_dot;
    const auto z = zeta(out.tau);
    out.zeta1 = z.zeta1;
    out.zeta2 = z.zeta2;
    out.k_new = -z.zeta2 / (1.0 + h + z.zeta2 * h);
    out.m_new = z.zeta1 * out.s + out.k_new * shift_dot + out.k_new * z.zeta1 * out.s * h;
    return out;
}

namespace detail {

SweepTracker::SweepTracker(const Dataset& data, const EPConfig& cfg)
    : cfg_(cfg),
      active_(static_cast<std::size_t>(data.n())),
      skipped_(static_cast<std::size_t>(data.n()), false) {
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const bool nonzero = (data.X().row(i).array() != 0.0).any();
        active_[static_cast<std::size_t>(i)] = nonzero;
        if (!nonzero) skipped_[static_cast<std::size_t>(i)] = true;
    }
}

void SweepTracker::record_change(double k_old, double k_new, double m_old, double m_new) {
    change_ = std::max(change_, std::fabs(k_new - k_old) + std::fabs(m_new - m_old));
}

bool SweepTracker::finish_sweep(FitReport& report, double seconds) {
    ++report.sweeps_run;
    report.sweep_seconds.push_back(seconds);
    report.final_change = change_;
    change_ = 0.0;
    report.converged = report.final_change < cfg_.tol;
    return report.converged;
}

void SweepTracker::finalize(FitReport& report) const {
    report.zero_covariate_sites = static_cast<std::size_t>(std::count(active_.begin(), active_.end(), false));
    report.skipped_sites = static_cast<std::size_t>(std::count(skipped_.begin(), skipped_.end(), true));
}

}  // namespace detail

}  // namespace epprobit

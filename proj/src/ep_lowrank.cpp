#include "epprobit/ep_lowrank.hpp"

#include <chrono>
#include <cmath>

namespace epprobit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

LowRankFit ep_lowrank_fit(const Dataset& data, const PriorConfig& prior, const EPConfig& cfg,
                          const LowRankObserver* observer) {
    prior.check();
    cfg.check();
    const auto start = Clock::now();
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const RowMatrix& X = data.X();

    LowRankFit fit{{}, {Vector::Zero(p), prior.nu2 * X.transpose(), SiteState::zeros(n)}, {}};
    LowRankGlobalState& state = fit.state;
    Matrix& V = state.V;
    SiteState& sites = state.sites;
    detail::SweepTracker tracker(data, cfg);

    Vector v(p);
    Vector w(p);
    Vector r_cavity(p);
    Vector xV(n);
    for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        const auto sweep_start = Clock::now();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!tracker.active(i)) continue;
            const auto x = X.row(i).transpose();
            const double k_old = sites.k(i);
            const double m_old = sites.m(i);

            v = V.col(i);
            const double xv = x.dot(v);
            const double cavity_denom = 1.0 - k_old * xv;
            if (cavity_denom <= kCavityEpsilon) {
                ++fit.report.cavity_breakdowns;
                tracker.mark_skipped(i);
                continue;
            }
            w = v / cavity_denom;
            const double h = xv / cavity_denom;
            r_cavity = state.r - m_old * x;

            const SiteMatch match = match_site(h, w.dot(r_cavity), data.sign(i));
            const double k_new = (1.0 - cfg.damping) * k_old + cfg.damping * match.k_new;
            const double m_new = (1.0 - cfg.damping) * m_old + cfg.damping * match.m_new;

            const double dk = k_new - k_old;
            const double block_denom = 1.0 + dk * xv;
            if (block_denom <= kCavityEpsilon) {
                ++fit.report.degenerate_block_updates;
                tracker.mark_skipped(i);
                continue;
            }

            state.r = r_cavity + m_new * x;
            xV.noalias() = V.transpose() * x;
            V.noalias() -= (dk / block_denom) * v * xV.transpose();

            sites.k(i) = k_new;
            sites.m(i) = m_new;
            tracker.record_change(k_old, k_new, m_old, m_new);
            if (observer && observer->after_site) observer->after_site(i, state);
        }
        const bool done = tracker.finish_sweep(fit.report, seconds_since(sweep_start));
        if (observer && observer->after_sweep) observer->after_sweep(sweep, state);
        if (done) break;
    }
    tracker.finalize(fit.report);

    fit.summary = recover_mean_and_sds(state, data, prior);
    fit.report.wall_time = seconds_since(start);
    return fit;
}

Matrix recover_covariance(const LowRankGlobalState& state, const Dataset& data, const PriorConfig& prior) {
    Matrix cov = -prior.nu2 * (state.V * state.sites.k.asDiagonal() * data.X());
    cov.diagonal().array() += prior.nu2;
    return 0.5 * (cov + cov.transpose());
}

PosteriorSummary recover_mean_and_sds(const LowRankGlobalState& state, const Dataset& data,
                                      const PriorConfig& prior) {
    const RowMatrix& X = data.X();
    const Vector& k = state.sites.k;
    const Vector kXr = k.cwiseProduct(X * state.r);

    PosteriorSummary out;
    out.mean = prior.nu2 * (state.r - state.V * kXr);

    // diag(V K X)_j = sum_i V(j, i) k_i X(i, j)
    Vector shrink = Vector::Zero(data.p());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        if (k(i) == 0.0) continue;
        shrink += k(i) * state.V.col(i).cwiseProduct(X.row(i).transpose());
    }
    Vector var = prior.nu2 * (Vector::Ones(data.p()) - shrink);
    out.clamped_variances = static_cast<std::size_t>((var.array() < 0.0).count());
    out.sd = var.cwiseMax(0.0).cwiseSqrt();
    return out;
}

}  // namespace epprobit

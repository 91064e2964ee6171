#include "epprobit/ep_dense.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace epprobit {

namespace {

using Clock = std::chrono::steady_clock;

constexpr Eigen::Index kDenseBlockSize = 32;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

DenseFit ep_dense_fit(const Dataset& data, const PriorConfig& prior, const EPConfig& cfg,
                      const DenseObserver* observer) {
    prior.check();
    cfg.check();
    const auto start = Clock::now();
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const RowMatrix& X = data.X();

    DenseFit fit{{}, SiteState::zeros(n), {Vector::Zero(p), prior.nu2 * Matrix::Identity(p, p)}, {}};
    SiteState& sites = fit.sites;
    DenseGlobalState& state = fit.state;
    Matrix& Qinv = state.Qinv;
    detail::SweepTracker tracker(data, cfg);

    // Updates are delayed within blocks of sites: Qinv = Q0 + U diag(c) U' with Q0
    // the matrix at block start, so the p x p work runs as two matrix products.
    const bool per_site_view = observer && observer->after_site;
    const Eigen::Index block = per_site_view ? 1 : std::min<Eigen::Index>(n, kDenseBlockSize);
    Matrix P(p, block);
    Matrix U(p, block);
    Vector c(block);
    Vector Ux(block);
    Vector v(p);
    Vector w(p);
    Vector r_cavity(p);
    for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        const auto sweep_start = Clock::now();
        for (Eigen::Index b0 = 0; b0 < n; b0 += block) {
            const Eigen::Index len = std::min(block, n - b0);
            P.leftCols(len).noalias() = Qinv * X.middleRows(b0, len).transpose();
            Eigen::Index pending = 0;
            for (Eigen::Index l = 0; l < len; ++l) {
                const Eigen::Index i = b0 + l;
                if (!tracker.active(i)) continue;
                const auto x = X.row(i).transpose();
                const double k_old = sites.k(i);
                const double m_old = sites.m(i);

                v = P.col(l);
                if (pending > 0) {
                    Ux.head(pending).noalias() = U.leftCols(pending).transpose() * x;
                    v.noalias() += U.leftCols(pending) * c.head(pending).cwiseProduct(Ux.head(pending));
                }
                const double q = x.dot(v);
                const double cavity_denom = 1.0 - k_old * q;
                if (cavity_denom <= kCavityEpsilon) {
                    ++fit.report.cavity_breakdowns;
                    tracker.mark_skipped(i);
                    continue;
                }

                // Omega_i = Qinv + (k_old / cavity_denom) v v' is never formed: Omega_i x = w = v / cavity_denom.
                w = v / cavity_denom;
                const double h = q / cavity_denom;
                r_cavity = state.r - m_old * x;

                const SiteMatch match = match_site(h, w.dot(r_cavity), data.sign(i));
                const double k_new = (1.0 - cfg.damping) * k_old + cfg.damping * match.k_new;
                const double m_new = (1.0 - cfg.damping) * m_old + cfg.damping * match.m_new;

                state.r = r_cavity + m_new * x;
                // Undamped, the new Qinv is the hybrid covariance Omega_i + zeta2 s^2 w w'.
                const double coeff = cfg.damping == 1.0 ? match.zeta2 * match.s * match.s
                                                        : -k_new / (1.0 + k_new * h);
                // Cavity downdate and site correction share the direction v: one rank-one term.
                U.col(pending) = v;
                c(pending) = (k_old + coeff / cavity_denom) / cavity_denom;
                ++pending;

                sites.k(i) = k_new;
                sites.m(i) = m_new;
                tracker.record_change(k_old, k_new, m_old, m_new);
                if (per_site_view) {
                    Qinv.noalias() += c(0) * v * v.transpose();
                    pending = 0;
                    observer->after_site(i, sites, state);
                }
            }
            if (pending > 0) {
                Qinv.noalias() += U.leftCols(pending) * c.head(pending).asDiagonal() * U.leftCols(pending).transpose();
            }
        }
        Qinv = (0.5 * (Qinv + Qinv.transpose())).eval();
        const bool done = tracker.finish_sweep(fit.report, seconds_since(sweep_start));
        if (observer && observer->after_sweep) observer->after_sweep(sweep, sites, state);
        if (done) break;
    }
    tracker.finalize(fit.report);

    fit.summary.mean = Qinv * state.r;
    fit.summary.sd = Qinv.diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.summary.clamped_variances = static_cast<std::size_t>((Qinv.diagonal().array() < 0.0).count());
    fit.report.wall_time = seconds_since(start);
    return fit;
}

HybridSNParams dense_cavity(const Dataset& data, const SiteState& sites, const DenseGlobalState& state,
                            Eigen::Index i) {
    const auto x = data.X().row(i).transpose();
    const Vector v = state.Qinv * x;
    const double k = sites.k(i);
    const double d = 1.0 / (1.0 - k * x.dot(v));
    // Omega_i = Qinv + k d v v'  =>  Omega_i x = d v and Omega_i r_{-i} = Qinv r_{-i} + k d v (v' r_{-i}).
    const Vector r_cavity = state.r - sites.m(i) * x;
    HybridSNParams out;
    out.omega_x = d * v;
    out.xi = state.Qinv * r_cavity + (k * d * v.dot(r_cavity)) * v;
    const double h = x.dot(out.omega_x);
    out.s = data.sign(i) / std::sqrt(1.0 + h);
    out.tau = out.s * out.omega_x.dot(r_cavity);
    return out;
}

}  // namespace epprobit

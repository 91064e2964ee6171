#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "epprobit/model_data.hpp"

namespace epprobit {

/// Rank-one Gaussian sites: site i contributes precision k_i x_i x_i' and
/// shift m_i x_i. All zeros means the global approximation is the prior.
struct SiteState {
    Vector k;
    Vector m;

    static SiteState zeros(Eigen::Index n) { return {Vector::Zero(n), Vector::Zero(n)}; }
};

struct EPConfig {
    double tol = 1e-5;           ///< stop once max_i |dk_i| + |dm_i| over a sweep is below this
    std::size_t max_sweeps = 200;
    double damping = 1.0;        ///< 1 = undamped

    void check() const;
};

/// Threshold on 1 - k_i x_i' Q^{-1} x_i below which a cavity is treated as
/// non-invertible and the site update skipped.
inline constexpr double kCavityEpsilon = 1e-12;

struct FitReport {
    std::size_t sweeps_run = 0;
    bool converged = false;
    double final_change = 0.0;
    double wall_time = 0.0;                 ///< seconds, sweeps plus summary recovery
    std::size_t cavity_breakdowns = 0;      ///< skipped site updates, counted per event
    std::size_t degenerate_block_updates = 0;
    std::size_t zero_covariate_sites = 0;   ///< x_i = 0, never updated
    std::size_t skipped_sites = 0;          ///< distinct sites skipped at least once
    std::vector<double> sweep_seconds;
};

struct PosteriorSummary {
    Vector mean;
    Vector sd;
    std::optional<Matrix> covariance;
    std::size_t clamped_variances = 0;
};

/// Cavity parameters of the extended skew-normal hybrid for one site.
/// Omega_i itself is never stored; only Omega_i x_i is needed.
struct HybridSNParams {
    Vector xi;       ///< cavity mean Omega_i r_{-i}
    Vector omega_x;  ///< Omega_i x_i
    double s = 1.0;  ///< (2y_i - 1) (1 + x_i' Omega_i x_i)^{-1/2}
    double tau = 0.0;
};

struct HybridMoments {
    Vector mean;
    /// Sigma_h = Omega_i + cov_update_coeff * (Omega_i x_i)(Omega_i x_i)'
    double cov_update_coeff = 0.0;
};

HybridMoments hybrid_moments(const HybridSNParams& cavity);

/// Scalar part of one moment-matching step, shared by the dense and the
/// low-rank routines.
struct SiteMatch {
    double s;
    double tau;
    double zeta1;
    double zeta2;
    double k_new;
    double m_new;
};

/// h = x_i' Omega_i x_i, shift_dot = (Omega_i x_i)' r_{-i}, sign = 2y_i - 1.
SiteMatch match_site(double h, double shift_dot, double sign);

namespace detail {

// Bookkeeping common to both sweep loops.
class SweepTracker {
public:
    SweepTracker(const Dataset& data, const EPConfig& cfg);

    bool active(Eigen::Index i) const { return active_[static_cast<std::size_t>(i)]; }
    void mark_skipped(Eigen::Index i) { skipped_[static_cast<std::size_t>(i)] = true; }
    void record_change(double k_old, double k_new, double m_old, double m_new);

    /// Closes a sweep; returns true when converged.
    bool finish_sweep(FitReport& report, double seconds);
    void finalize(FitReport& report) const;

private:
    const EPConfig& cfg_;
    std::vector<bool> active_;
    std::vector<bool> skipped_;
    double change_ = 0.0;
};

}  // namespace detail

}  // namespace epprobit

#pragma once

#include <functional>

#include "epprobit/ep_common.hpp"

namespace epprobit {

/// Global state of the low-rank routine. Column j of V is Q^{-1} x_j; the
/// p x p covariance is never formed during sweeps, so memory is O(pn).
struct LowRankGlobalState {
    Vector r;
    Matrix V;  ///< p x n
    SiteState sites;
};

struct LowRankObserver {
    std::function<void(Eigen::Index site, const LowRankGlobalState&)> after_site;
    std::function<void(std::size_t sweep, const LowRankGlobalState&)> after_sweep;
};

struct LowRankFit {
    PosteriorSummary summary;
    LowRankGlobalState state;
    FitReport report;
};

/// EP for large p at O(p n^2) per sweep.
///
/// Same site order, convergence rule and damping as ep_dense_fit, so both
/// routines follow the same (k, m) trajectory up to rounding. Per site the
/// cavity vector is w_i = v_i / (1 - k_i x_i' v_i) and, after matching,
/// V <- V - c_i v_i (x_i' V) with c_i = dk / (1 + dk x_i' v_i), where dk is
/// the new site precision minus the previous one. The previous k_i is kept
/// until V has been updated.
///
/// The returned summary comes from recover_mean_and_sds (O(pn)).
LowRankFit ep_lowrank_fit(const Dataset& data, const PriorConfig& prior, const EPConfig& cfg = {},
                          const LowRankObserver* observer = nullptr);

/// Q^{-1} = nu2 I - nu2 V K X, symmetrized. O(p^2 n).
Matrix recover_covariance(const LowRankGlobalState& state, const Dataset& data, const PriorConfig& prior);

/// Mean nu2 r - nu2 V K (X r) and sds from the diagonal of nu2 I - nu2 V K X,
/// without allocating any p x p matrix. Negative variances from rounding are
/// clamped to zero and counted in clamped_variances.
PosteriorSummary recover_mean_and_sds(const LowRankGlobalState& state, const Dataset& data,
                                      const PriorConfig& prior);

}  // namespace epprobit

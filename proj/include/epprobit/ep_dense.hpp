#pragma once

#include <functional>

#include "epprobit/ep_common.hpp"

namespace epprobit {

/// Global Gaussian approximation q(beta) = N(Qinv r, Qinv) with Qinv held
/// explicitly as a dense symmetric p x p matrix.
struct DenseGlobalState {
    Vector r;
    Matrix Qinv;
};

/// Optional hooks for inspecting a fit while it runs.
struct DenseObserver {
    std::function<void(Eigen::Index site, const SiteState&, const DenseGlobalState&)> after_site;
    std::function<void(std::size_t sweep, const SiteState&, const DenseGlobalState&)> after_sweep;
};

struct DenseFit {
    PosteriorSummary summary;
    SiteState sites;
    DenseGlobalState state;
    FitReport report;
};

/// EP with an explicit covariance, O(p^2 n) per sweep. Sites are visited in
/// order 0..n-1; each update matches the extended skew-normal hybrid moments
/// of the cavity. The Woodbury cavity downdate and the site correction both
/// lie along Qinv x_i, so they are applied as a single rank-one update of
/// Qinv. Qinv is re-symmetrized after each sweep.
DenseFit ep_dense_fit(const Dataset& data, const PriorConfig& prior, const EPConfig& cfg = {},
                      const DenseObserver* observer = nullptr);

/// Cavity parameters for site i given the current global state.
HybridSNParams dense_cavity(const Dataset& data, const SiteState& sites, const DenseGlobalState& state,
                            Eigen::Index i);

}  // namespace epprobit

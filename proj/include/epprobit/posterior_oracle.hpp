#pragma once

#include <cstddef>
#include <cstdint>

#include "epprobit/model_data.hpp"

namespace epprobit {

struct OracleResult {
    Vector mean;
    Vector sd;
    std::size_t n_samples = 0;
    double acceptance_rate = 0.0;
    Vector mc_standard_error;  ///< of each mean coordinate: sd / sqrt(n_samples)
    Vector sd_standard_error;  ///< of each sd coordinate, delta method from the fourth central moment
};

struct RejectionOptions {
    std::uint64_t draw_budget = 10'000'000;
    /// Work is split into this many independent RNG sub-streams. Results
    /// depend on the stream count but not on the number of threads.
    std::size_t streams = 8;
    std::size_t threads = 0;  ///< 0 = hardware concurrency
};

/// Exact posterior samples by rejection from the prior: beta ~ N(0, nu2 I)
/// is accepted with probability prod_i Phi((2y_i - 1) x_i' beta). Only
/// practical for small n. Throws AcceptanceTooLow when the draw budget runs
/// out first.
OracleResult rejection_sample_posterior(const Dataset& data, const PriorConfig& prior, std::size_t n_samples,
                                        std::uint64_t seed, const RejectionOptions& options = {});

struct Posterior1d {
    double mean;
    double sd;
};

/// Deterministic posterior moments for p = 1 by adaptive Gauss-Kronrod
/// quadrature over [-10 nu, 10 nu] at relative tolerance 1e-10.
Posterior1d quadrature_posterior_1d(const Dataset& data, const PriorConfig& prior);

}  // namespace epprobit

#pragma once

#include <string_view>

#include "epprobit/ep_common.hpp"

namespace epprobit {

enum class Algorithm { Dense, LowRank, Auto };

Algorithm parse_algorithm(std::string_view tag);
std::string_view to_string(Algorithm algorithm);

/// Dense while p < n, low-rank once p >= n.
Algorithm select_algorithm(Eigen::Index n, Eigen::Index p);

struct FitOutcome {
    Algorithm algorithm_used;
    PosteriorSummary summary;
    FitReport report;
};

/// Runs the requested routine (resolving Auto). With full_covariance the
/// summary also carries the p x p covariance.
FitOutcome fit(const Dataset& data, const PriorConfig& prior, const EPConfig& cfg, Algorithm algorithm,
               bool full_covariance = false);

}  // namespace epprobit

#include "epprobit/fit.hpp"

#include <string>

#include "epprobit/ep_dense.hpp"
#include "epprobit/ep_lowrank.hpp"
#include "epprobit/errors.hpp"

namespace epprobit {

Algorithm parse_algorithm(std::string_view tag) {
    if (tag == "dense") return Algorithm::Dense;
    if (tag == "lowrank") return Algorithm::LowRank;
    if (tag == "auto") return Algorithm::Auto;
    throw InvalidConfig("unknown algorithm '" + std::string(tag) + "'");
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Dense: return "dense";
        case Algorithm::LowRank: return "lowrank";
        case Algorithm::Auto: return "auto";
    }
    return "auto";
}

Algorithm select_algorithm(Eigen::Index n, Eigen::Index p) {
    return p >= n ? Algorithm::LowRank : Algorithm::Dense;
}

FitOutcome fit(const Dataset& data, const PriorConfig& prior, const EPConfig& cfg, Algorithm algorithm,
               bool full_covariance) {
    if (algorithm == Algorithm::Auto) algorithm = select_algorithm(data.n(), data.p());
    if (algorithm == Algorithm::Dense) {
        DenseFit result = ep_dense_fit(data, prior, cfg);
        if (full_covariance) result.summary.covariance = std::move(result.state.Qinv);
        return {algorithm, std::move(result.summary), std::move(result.report)};
    }
    LowRankFit result = ep_lowrank_fit(data, prior, cfg);
    if (full_covariance) result.summary.covariance = recover_covariance(result.state, data, prior);
    return {algorithm, std::move(result.summary), std::move(result.report)};
}

}  // namespace epprobit

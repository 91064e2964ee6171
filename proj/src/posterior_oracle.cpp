#include "epprobit/posterior_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/normal_distribution.hpp>

#include "epprobit/errors.hpp"
#include "epprobit/random.hpp"
#include "epprobit/special_functions.hpp"

namespace epprobit {

namespace {

struct StreamOutput {
    Matrix samples;  // p x accepted
    std::uint64_t draws = 0;
    bool exhausted = false;
};

StreamOutput run_stream(const Dataset& data, double nu, std::size_t target, std::uint64_t budget,
                        std::uint64_t seed, std::size_t index) {
    const Eigen::Index p = data.p();
    StreamOutput out;
    out.samples.resize(p, static_cast<Eigen::Index>(target));
    Rng rng(seed, Stream::Oracle, index);
    // Ziggurat sampler: a fixed algorithm in Boost, several times cheaper than Box-Muller.
    boost::random::normal_distribution<double> prior_draw(0.0, nu);
    Vector beta(p);
    std::size_t accepted = 0;
    while (accepted < target) {
        if (out.draws == budget) {
            out.exhausted = true;
            break;
        }
        ++out.draws;
        for (Eigen::Index j = 0; j < p; ++j) beta(j) = prior_draw(rng);
        const double u = rng.uniform();
        // Partial likelihood products only decrease, so reject early.
        double lik = 1.0;
        for (Eigen::Index i = 0; i < data.n() && lik > u; ++i) {
            lik *= norm_cdf(data.sign(i) * data.X().row(i).dot(beta));
        }
        if (lik > u) {
            out.samples.col(static_cast<Eigen::Index>(accepted++)) = beta;
        }
    }
    return out;
}

}  // namespace

OracleResult rejection_sample_posterior(const Dataset& data, const PriorConfig& prior, std::size_t n_samples,
                                        std::uint64_t seed, const RejectionOptions& options) {
    prior.check();
    if (n_samples < 2) throw InvalidConfig("rejection oracle needs at least 2 samples");
    const std::size_t streams = std::max<std::size_t>(1, std::min(options.streams, n_samples));
    const double nu = std::sqrt(prior.nu2);

    std::vector<StreamOutput> outputs(streams);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t s = next++; s < streams; s = next++) {
            const std::size_t target = n_samples / streams + (s < n_samples % streams ? 1 : 0);
            const std::uint64_t budget = options.draw_budget / streams + (s < options.draw_budget % streams ? 1 : 0);
            outputs[s] = run_stream(data, nu, target, budget, seed, s);
        }
    };
    std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, streams);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::uint64_t draws = 0;
    for (const auto& out : outputs) {
        draws += out.draws;
        if (out.exhausted) {
            throw AcceptanceTooLow("rejection oracle exhausted its budget of " + std::to_string(options.draw_budget) +
                                   " prior draws before collecting " + std::to_string(n_samples) +
                                   " samples; reduce n or the sample count");
        }
    }

    const Eigen::Index p = data.p();
    const auto N = static_cast<double>(n_samples);
    Vector sum = Vector::Zero(p);
    for (const auto& out : outputs) sum += out.samples.rowwise().sum();
    const Vector mean = sum / N;

    Vector m2 = Vector::Zero(p);
    Vector m4 = Vector::Zero(p);
    for (const auto& out : outputs) {
        const Eigen::ArrayXXd centered = out.samples.colwise() - mean;
        const Eigen::ArrayXXd sq = centered.square();
        m2 += sq.rowwise().sum().matrix();
        m4 += sq.square().rowwise().sum().matrix();
    }

    OracleResult result;
    result.mean = mean;
    result.sd = (m2 / (N - 1.0)).cwiseSqrt();
    result.n_samples = n_samples;
    result.acceptance_rate = N / static_cast<double>(draws);
    result.mc_standard_error = result.sd / std::sqrt(N);
    result.sd_standard_error.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double var = m2(j) / N;
        const double kurt_term = m4(j) / N - var * var;
        result.sd_standard_error(j) = var > 0.0 ? std::sqrt(std::max(kurt_term, 0.0) / (4.0 * var * N)) : 0.0;
    }
    return result;
}

Posterior1d quadrature_posterior_1d(const Dataset& data, const PriorConfig& prior) {
    prior.check();
    if (data.p() != 1) throw DimensionMismatch("quadrature oracle requires p = 1");
    constexpr double rel_tol = 1e-10;
    constexpr unsigned max_depth = 30;
    const double nu = std::sqrt(prior.nu2);

    auto density = [&](double beta) {
        double log_f = log_norm_pdf(beta / nu) - std::log(nu);
        for (Eigen::Index i = 0; i < data.n(); ++i) {
            log_f += log_norm_cdf(data.sign(i) * data.X()(i, 0) * beta);
        }
        return std::exp(log_f);
    };
    auto integrate = [&](auto&& f) {
        double error = 0.0;
        const double value =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -10.0 * nu, 10.0 * nu, max_depth, rel_tol, &error);
        return std::pair{value, error};
    };

    const auto [z, z_err] = integrate(density);
    if (!(z > 0.0) || z_err > rel_tol * z) {
        throw QuadratureNonConvergence("normalizing constant did not converge");
    }
    const auto [m1, m1_err] = integrate([&](double b) { return b * density(b); });
    const double mean = m1 / z;
    // The first moment may vanish by symmetry; measure its error against the scale nu * z.
    if (m1_err > rel_tol * std::max(std::fabs(m1), nu * z)) {
        throw QuadratureNonConvergence("first moment did not converge");
    }
    const auto [c2, c2_err] = integrate([&](double b) { return (b - mean) * (b - mean) * density(b); });
    if (!(c2 > 0.0) || c2_err > rel_tol * c2) {
        throw QuadratureNonConvergence("second moment did not converge");
    }
    return {mean, std::sqrt(c2 / z)};
}

}  // namespace epprobit

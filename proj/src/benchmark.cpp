#include "epprobit/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "epprobit/ep_dense.hpp"
#include "epprobit/ep_lowrank.hpp"
#include "epprobit/errors.hpp"
#include "epprobit/posterior_oracle.hpp"
#include "epprobit/random.hpp"

namespace epprobit {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_call(F&& f) {
    const auto start = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void set_oracle_diffs(BenchmarkRecord& rec, const PosteriorSummary& summary, const OracleResult& oracle) {
    std::vector<double> dmean(static_cast<std::size_t>(summary.mean.size()));
    std::vector<double> dsd(dmean.size());
    for (Eigen::Index j = 0; j < summary.mean.size(); ++j) {
        dmean[static_cast<std::size_t>(j)] = std::fabs(summary.mean(j) - oracle.mean(j));
        dsd[static_cast<std::size_t>(j)] = std::fabs(summary.sd(j) - oracle.sd(j));
    }
    rec.median_abs_mean_diff = median(std::move(dmean));
    rec.median_abs_sd_diff = median(std::move(dsd));
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) {
    return quantile(std::move(values), 0.5);
}

bool relatively_close(const Vector& a, const Vector& b, double tol) {
    if (a.size() != b.size()) return false;
    if (a.size() == 0) return true;
    const double scale = std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
    return (a - b).lpNorm<Eigen::Infinity>() <= tol * scale;
}

void BenchmarkConfig::check() const {
    if (n < 1) throw InvalidConfig("benchmark n must be >= 1");
    if (p_grid.empty()) throw InvalidConfig("benchmark p grid is empty");
    for (auto p : p_grid) {
        if (p < 1) throw InvalidConfig("benchmark p values must be >= 1");
    }
    if (reps < 1) throw InvalidConfig("benchmark reps must be >= 1");
    PriorConfig{nu2}.check();
    ep.check();
}

std::uint64_t cell_seed(std::uint64_t seed, Eigen::Index p, std::size_t rep) {
    return splitmix64(splitmix64(seed) ^ (static_cast<std::uint64_t>(p) << 32 | static_cast<std::uint64_t>(rep)));
}

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& cfg) {
    cfg.check();
    const PriorConfig prior{cfg.nu2};
    std::vector<BenchmarkRecord> records;

    for (const Eigen::Index p : cfg.p_grid) {
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            const SimConfig sim{cfg.n, p, cell_seed(cfg.seed, p, rep), BetaGen::Prior};
            const Dataset data = simulate(sim, prior).data;

            BenchmarkRecord dense_rec;
            dense_rec.p = p;
            dense_rec.n = cfg.n;
            dense_rec.algorithm = Algorithm::Dense;
            dense_rec.rep = rep;
            std::optional<DenseFit> dense;
            dense_rec.wall_time_fit = time_call([&] { dense = ep_dense_fit(data, prior, cfg.ep); });
            PosteriorSummary dense_summary;
            dense_rec.wall_time_postproc_summary = time_call([&] {
                dense_summary.mean = dense->state.Qinv * dense->state.r;
                dense_summary.sd = dense->state.Qinv.diagonal().cwiseMax(0.0).cwiseSqrt();
            });
            dense_rec.wall_time_postproc_full = time_call([&] { Matrix cov = dense->state.Qinv; (void)cov; });

            BenchmarkRecord low_rec = dense_rec;
            low_rec.algorithm = Algorithm::LowRank;
            std::optional<LowRankFit> low;
            low_rec.wall_time_fit = time_call([&] { low = ep_lowrank_fit(data, prior, cfg.ep); });
            PosteriorSummary low_summary;
            low_rec.wall_time_postproc_summary =
                time_call([&] { low_summary = recover_mean_and_sds(low->state, data, prior); });
            low_rec.wall_time_postproc_full = time_call([&] { Matrix cov = recover_covariance(low->state, data, prior); (void)cov; });

            if (!relatively_close(dense->summary.mean, low->summary.mean, 1e-8) ||
                !relatively_close(dense->summary.sd, low->summary.sd, 1e-8)) {
                throw Error("dense and low-rank fits disagree beyond 1e-8 at p = " + std::to_string(p) +
                            ", rep = " + std::to_string(rep));
            }

            for (auto* rec : {&dense_rec, &low_rec}) {
                const FitReport& report = rec == &dense_rec ? dense->report : low->report;
                rec->sweeps = report.sweeps_run;
                rec->converged = report.converged;
                rec->median_sweep_seconds = median(report.sweep_seconds);
            }

            if (cfg.oracle_samples > 0) {
                RejectionOptions opts;
                opts.draw_budget = cfg.oracle_draw_budget;
                const OracleResult oracle =
                    rejection_sample_posterior(data, prior, cfg.oracle_samples, sim.seed, opts);
                set_oracle_diffs(dense_rec, dense->summary, oracle);
                set_oracle_diffs(low_rec, low->summary, oracle);
            }
            records.push_back(dense_rec);
            records.push_back(low_rec);
        }
    }

    std::stable_sort(records.begin(), records.end(), [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.algorithm < b.algorithm;
    });
    return records;
}

void write_benchmark_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out) {
    out << "p,n,algorithm,rep,sweeps,converged,wall_time_fit,wall_time_postproc_summary,"
           "wall_time_postproc_full,median_abs_mean_diff,median_abs_sd_diff\n";
    for (const auto& rec : records) {
        out << rec.p << ',' << rec.n << ',' << to_string(rec.algorithm) << ',' << rec.rep << ',' << rec.sweeps
            << ',' << (rec.converged ? "true" : "false") << ',' << format_number(rec.wall_time_fit) << ','
            << format_number(rec.wall_time_postproc_summary) << ',' << format_number(rec.wall_time_postproc_full)
            << ',' << (rec.median_abs_mean_diff ? format_number(*rec.median_abs_mean_diff) : "") << ','
            << (rec.median_abs_sd_diff ? format_number(*rec.median_abs_sd_diff) : "") << '\n';
    }
}

}  // namespace epprobit

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "epprobit/fit.hpp"

namespace epprobit {

/// Linear-interpolation quantile (type 7), q in [0, 1]. Empty input -> NaN.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

/// Relative agreement in the infinity norm: |a - b|_inf <= tol * max(|a|_inf, |b|_inf).
bool relatively_close(const Vector& a, const Vector& b, double tol);

struct BenchmarkConfig {
    Eigen::Index n = 100;
    std::vector<Eigen::Index> p_grid{50, 100, 200, 400, 800};
    std::size_t reps = 3;
    std::uint64_t seed = 1;
    double nu2 = 25.0;
    EPConfig ep;
    std::size_t oracle_samples = 0;  ///< 0 disables the rejection oracle
    std::uint64_t oracle_draw_budget = 10'000'000;

    void check() const;
};

struct BenchmarkRecord {
    Eigen::Index p = 0;
    Eigen::Index n = 0;
    Algorithm algorithm = Algorithm::Dense;
    std::size_t rep = 0;
    std::size_t sweeps = 0;
    bool converged = false;
    double wall_time_fit = 0.0;
    double wall_time_postproc_summary = 0.0;
    double wall_time_postproc_full = 0.0;
    std::optional<double> median_abs_mean_diff;
    std::optional<double> median_abs_sd_diff;
    /// Median of the per-sweep wall times; not part of the CSV.
    double median_sweep_seconds = 0.0;
};

/// Seed of the dataset simulated for one (p, rep) cell.
std::uint64_t cell_seed(std::uint64_t seed, Eigen::Index p, std::size_t rep);

/// For every p and rep: simulate one dataset, fit it with both routines,
/// check that their summaries agree to 1e-8 (throws Error otherwise) and
/// record timings. Records are sorted by (p, algorithm), reps in order.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& cfg);

void write_benchmark_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out);

}  // namespace epprobit

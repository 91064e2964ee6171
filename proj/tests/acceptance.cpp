// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "epprobit/benchmark.hpp"
#include "epprobit/ep_dense.hpp"
#include "epprobit/ep_lowrank.hpp"
#include "epprobit/errors.hpp"
#include "epprobit/posterior_oracle.hpp"
#include "epprobit/special_functions.hpp"
#include "oracles.hpp"

using namespace epprobit;
using namespace epprobit::testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> body;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

Outcome single_site_exactness() {
    const Dataset data = single_site();
    const PriorConfig prior{1.0};
    const DenseFit dense = ep_dense_fit(data, prior);
    const LowRankFit low = ep_lowrank_fit(data, prior);
    const Posterior1d quad = quadrature_posterior_1d(data, prior);

    double worst = 0.0;
    const auto track = [&](double got, double want) { worst = std::max(worst, std::fabs(got - want)); };
    for (const PosteriorSummary* s : {&dense.summary, &low.summary}) {
        track(s->mean(0), kInvSqrtPi);
        track(s->sd(0) * s->sd(0), kOneMinusInvPi);
    }
    track(quad.mean, kInvSqrtPi);
    track(quad.sd * quad.sd, kOneMinusInvPi);
    const bool sweeps_ok = dense.report.converged && low.report.converged && dense.report.sweeps_run <= 3 &&
                           low.report.sweeps_run <= 3;
    return {sweeps_ok && worst <= 1e-9,
            fmt("sweeps dense=%g lowrank=%g, max abs error %.2e", static_cast<double>(dense.report.sweeps_run),
                static_cast<double>(low.report.sweeps_run), worst)};
}

Outcome dense_lowrank_equivalence() {
    double worst_summary = 0.0;
    double worst_traj = 0.0;
    int mismatched_sweeps = 0;
    for (std::uint64_t j = 0; j < 50; ++j) {
        const auto inst = random_instance(100 + j, 2, 50, 1, 100, {1.0, 25.0});
        const PriorConfig prior{inst.nu2};
        std::vector<SiteState> dense_traj;
        std::vector<SiteState> low_traj;
        DenseObserver dobs;
        dobs.after_sweep = [&](std::size_t, const SiteState& s, const DenseGlobalState&) { dense_traj.push_back(s); };
        LowRankObserver lobs;
        lobs.after_sweep = [&](std::size_t, const LowRankGlobalState& st) { low_traj.push_back(st.sites); };
        const DenseFit dense = ep_dense_fit(inst.data, prior, EPConfig{}, &dobs);
        const LowRankFit low = ep_lowrank_fit(inst.data, prior, EPConfig{}, &lobs);

        worst_summary = std::max({worst_summary, relative_inf(dense.summary.mean, low.summary.mean),
                                  relative_inf(dense.summary.sd, low.summary.sd)});
        if (dense_traj.size() != low_traj.size()) ++mismatched_sweeps;
        for (std::size_t t = 0; t < std::min(dense_traj.size(), low_traj.size()); ++t) {
            worst_traj = std::max({worst_traj, relative_inf(dense_traj[t].k, low_traj[t].k),
                                   relative_inf(dense_traj[t].m, low_traj[t].m)});
        }
    }
    return {worst_summary <= 1e-8 && worst_traj <= 1e-10 && mismatched_sweeps == 0,
            fmt("max rel diff summaries %.2e, trajectories %.2e, sweep-count mismatches %g", worst_summary, worst_traj,
                mismatched_sweeps)};
}

// Instances are drawn from a fixed generator; all 20 must meet the bound.
Outcome oracle_accuracy() {
    Rng gen(20240);
    int passed = 0;
    double worst_mean_excess = -INFINITY;
    double worst_sd_excess = -INFINITY;
    std::string failures;
    for (int j = 0; j < 20; ++j) {
        const Eigen::Index n = 4 + static_cast<Eigen::Index>(gen.next_u64() % 9);
        const Eigen::Index p = 2 + static_cast<Eigen::Index>(gen.next_u64() % 63);
        const PriorConfig prior{25.0};
        const Dataset data =
            simulate(SimConfig{n, p, static_cast<std::uint64_t>(1000 + j), BetaGen::Prior}, prior).data;
        const PosteriorSummary ep = p >= n ? ep_lowrank_fit(data, prior).summary : ep_dense_fit(data, prior).summary;

        RejectionOptions opts;
        opts.draw_budget = 50'000'000;
        OracleResult oracle;
        try {
            oracle = rejection_sample_posterior(data, prior, 20'000, static_cast<std::uint64_t>(500 + j), opts);
        } catch (const AcceptanceTooLow&) {
            std::printf("    instance %2d n=%2ld p=%2ld draw budget exhausted\n", j, static_cast<long>(n),
                        static_cast<long>(p));
            failures += " #" + std::to_string(j) + "(budget)";
            continue;
        }
        const auto abs_diffs = [](const Vector& a, const Vector& b) {
            const Vector d = (a - b).cwiseAbs();
            return std::vector<double>(d.data(), d.data() + d.size());
        };
        const auto as_vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
        const double mean_diff = median(abs_diffs(ep.mean, oracle.mean));
        const double sd_diff = median(abs_diffs(ep.sd, oracle.sd));
        const double mean_bound = std::max(0.05, 4.0 * median(as_vec(oracle.mc_standard_error)));
        const double sd_bound = std::max(0.05, 4.0 * median(as_vec(oracle.sd_standard_error)));
        worst_mean_excess = std::max(worst_mean_excess, mean_diff - mean_bound);
        worst_sd_excess = std::max(worst_sd_excess, sd_diff - sd_bound);
        std::printf("    instance %2d n=%2ld p=%2ld acc=%.2e  |dmean| %.4f (bound %.4f)  |dsd| %.4f (bound %.4f)\n", j,
                    static_cast<long>(n), static_cast<long>(p), oracle.acceptance_rate, mean_diff, mean_bound,
                    sd_diff, sd_bound);
        if (mean_diff <= mean_bound && sd_diff <= sd_bound) {
            ++passed;
        } else {
            failures += " #" + std::to_string(j);
        }
    }
    std::string detail = fmt("%g/20 instances within bounds, worst excess mean %.4f sd %.4f", passed,
                             worst_mean_excess, worst_sd_excess);
    if (!failures.empty()) detail += "; failing:" + failures;
    return {passed == 20, detail};
}

// Reps run as interleaved rounds so every grid point sees the same machine load.
Outcome linear_scaling() {
    BenchmarkConfig cfg;
    cfg.n = 40;
    cfg.p_grid = {200, 400, 800};
    cfg.reps = 1;
    cfg.ep = EPConfig{1e-300, 10, 1.0};
    run_benchmark(cfg);  // warm-up
    std::vector<BenchmarkRecord> records;
    for (std::uint64_t round = 0; round < 5; ++round) {
        cfg.seed = 7 + round;
        const auto batch = run_benchmark(cfg);
        records.insert(records.end(), batch.begin(), batch.end());
    }
    const auto per_sweep = [&](Algorithm algo, Eigen::Index p) {
        std::vector<double> t;
        for (const auto& r : records)
            if (r.algorithm == algo && r.p == p) t.push_back(r.median_sweep_seconds);
        return median(t);
    };
    bool ok = true;
    std::string detail;
    for (Algorithm algo : {Algorithm::LowRank, Algorithm::Dense}) {
        const double lo = algo == Algorithm::LowRank ? 1.6 : 3.0;
        const double hi = algo == Algorithm::LowRank ? 2.6 : 5.5;
        const double r1 = per_sweep(algo, 400) / per_sweep(algo, 200);
        const double r2 = per_sweep(algo, 800) / per_sweep(algo, 400);
        ok = ok && r1 >= lo && r1 <= hi && r2 >= lo && r2 <= hi;
        detail += std::string(algo == Algorithm::LowRank ? "lowrank" : ", dense") +
                  fmt(" ratios %.2f %.2f in [%.1f, %.1f]", r1, r2, lo, hi);
    }
    return {ok, detail};
}

Outcome postprocessing_identity() {
    double worst = 0.0;
    for (std::uint64_t j = 0; j < 20; ++j) {
        const auto inst = random_instance(200 + j, 2, 60, 1, 50, {1.0, 25.0});
        const PriorConfig prior{inst.nu2};
        const LowRankFit fit = ep_lowrank_fit(inst.data, prior);
        const Matrix cov = recover_covariance(fit.state, inst.data, prior);
        worst = std::max(worst, relative_frobenius(cov, explicit_covariance(inst.data, fit.state.sites.k, inst.nu2)));
    }
    return {worst <= 1e-8, fmt("max relative Frobenius error %.2e", worst)};
}

Outcome special_function_suite() {
    int violations = 0;
    double prev = INFINITY;
    for (double x = -40.0; x <= 38.0; x += 0.01) {
        const double z1 = zeta1(x);
        if (!(z1 > 0.0 && z1 < prev)) ++violations;
        prev = z1;
    }
    double worst_identity = 0.0;
    for (double x = -40.0; x <= 40.0; x += 0.01) {
        const ZetaPair z = zeta(x);
        if (!(z.zeta2 <= 0.0 && z.zeta2 > -1.0)) ++violations;
        if (x <= 38.0 && !(z.zeta2 < 0.0)) ++violations;
        const double identity = -z.zeta1 * (z.zeta1 + x);
        if (identity == 0.0) {
            if (z.zeta2 != 0.0) ++violations;
        } else {
            worst_identity = std::max(worst_identity, std::fabs(z.zeta2 - identity) / std::fabs(identity));
        }
    }
    const double t = 300.0;
    const double t2 = t * t;
    const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2);
    const double tail_err = std::fabs(zeta1(-t) - t / series) / (t / series);
    const double z2 = zeta2(-t);
    if (!(std::isfinite(z2) && z2 > -1.0 && z2 < 0.0)) ++violations;
    if (!std::isfinite(log_norm_cdf(-t))) ++violations;
    return {violations == 0 && worst_identity <= 1e-12 && tail_err <= 1e-10,
            fmt("violations %g, identity rel error %.2e, x=-300 asymptotic rel error %.2e", violations,
                worst_identity, tail_err)};
}

Outcome fixed_point() {
    const EPConfig cfg;
    double worst = 0.0;
    int unconverged = 0;
    for (std::uint64_t j = 0; j < 20; ++j) {
        const auto inst = random_instance(300 + j, 4, 40, 1, 30, {1.0, 25.0});
        const DenseFit fit = ep_dense_fit(inst.data, PriorConfig{inst.nu2}, cfg);
        if (!fit.report.converged) ++unconverged;
        const Vector mean = fit.state.Qinv * fit.state.r;
        for (Eigen::Index i = 0; i < inst.data.n(); ++i) {
            const HybridMoments h = hybrid_moments(dense_cavity(inst.data, fit.sites, fit.state, i));
            worst = std::max(worst, (h.mean - mean).lpNorm<Eigen::Infinity>());
        }
    }
    return {unconverged == 0 && worst <= 10.0 * cfg.tol,
            fmt("max |hybrid mean - global mean| %.2e (limit %.0e), unconverged %g", worst, 10.0 * cfg.tol,
                unconverged)};
}

Outcome invariant_suite() {
    int k_violations = 0;
    int diag_violations = 0;
    for (std::uint64_t j = 0; j < 10; ++j) {
        const auto inst = random_instance(400 + j, 5, 40, 1, 60, {1.0, 25.0});
        const PriorConfig prior{inst.nu2};
        const double cap = inst.nu2 * (1.0 + 1e-10);
        DenseObserver dobs;
        dobs.after_site = [&](Eigen::Index i, const SiteState& s, const DenseGlobalState& st) {
            if (!(s.k(i) > 0.0)) ++k_violations;
            if (st.Qinv.diagonal().maxCoeff() > cap) ++diag_violations;
        };
        LowRankObserver lobs;
        lobs.after_site = [&](Eigen::Index i, const LowRankGlobalState& st) {
            if (!(st.sites.k(i) > 0.0)) ++k_violations;
        };
        lobs.after_sweep = [&](std::size_t, const LowRankGlobalState& st) {
            const PosteriorSummary s = recover_mean_and_sds(st, inst.data, prior);
            if (s.sd.cwiseAbs2().maxCoeff() > cap) ++diag_violations;
        };
        ep_dense_fit(inst.data, prior, EPConfig{}, &dobs);
        ep_lowrank_fit(inst.data, prior, EPConfig{}, &lobs);
    }
    double worst_rotation = 0.0;
    for (std::uint64_t j = 0; j < 10; ++j) {
        const auto inst = random_instance(500 + j, 5, 30, 1, 10, {1.0, 25.0});
        const Matrix R = random_orthogonal(inst.data.p(), 600 + j);
        const Dataset rotated = validate(inst.data.X() * R.transpose(), inst.data.y());
        const PriorConfig prior{inst.nu2};
        const EPConfig cfg{1e-10, 1000, 1.0};
        const DenseFit a = ep_dense_fit(inst.data, prior, cfg);
        const DenseFit b = ep_dense_fit(rotated, prior, cfg);
        worst_rotation = std::max({worst_rotation, (b.summary.mean - R * a.summary.mean).lpNorm<Eigen::Infinity>(),
                                   (b.state.Qinv - R * a.state.Qinv * R.transpose()).lpNorm<Eigen::Infinity>()});
    }
    return {k_violations == 0 && diag_violations == 0 && worst_rotation <= 1e-8,
            fmt("k<=0 events %g, diag>nu2 events %g, rotation max abs error %.2e", k_violations, diag_violations,
                worst_rotation)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "single-site exactness", 1e-3, single_site_exactness},
        {2, "dense/low-rank equivalence", 30.0, dense_lowrank_equivalence},
        {3, "oracle accuracy", 300.0, oracle_accuracy},
        {4, "linear-in-p scaling", 120.0, linear_scaling},
        {5, "post-processing identity", 5.0, postprocessing_identity},
        {6, "special-function suite", 1.0, special_function_suite},
        {7, "fixed-point property", 10.0, fixed_point},
        {8, "invariant suite", 10.0, invariant_suite},
    };
    // Optional arguments select criteria by number.
    std::vector<int> selected;
    for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
    int failed = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.body();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed < c.limit_seconds;
        const bool pass = outcome.ok && in_time;
        if (!pass) ++failed;
        std::printf("[%s] %d %s: %s; runtime %.3g s (limit %g s%s)\n", pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), outcome.detail.c_str(), elapsed, c.limit_seconds, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}

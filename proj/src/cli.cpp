#include "epprobit/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epprobit/benchmark.hpp"
#include "epprobit/errors.hpp"
#include "epprobit/fit.hpp"
#include "epprobit/model_data.hpp"
#include "epprobit/posterior_oracle.hpp"

namespace epprobit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string fmt17(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<double> to_std(const Vector& v) {
    return {v.data(), v.data() + v.size()};
}

/// d.csv -> d<suffix>; anything else gets the suffix appended.
fs::path sibling_path(const fs::path& path, const std::string& suffix) {
    fs::path out = path;
    if (out.extension() == ".csv" || out.extension() == ".json") out.replace_extension();
    out += suffix;
    return out;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

struct DataOptions {
    std::string path;
    bool header = false;
    bool intercept = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--data", path, "Dataset CSV: y first, then covariates")->required();
        cmd.add_flag("--header", header, "Skip the first line of the CSV");
        cmd.add_flag("--intercept", intercept, "Prepend a column of ones to X");
    }

    Dataset load() const {
        Dataset data = load_csv(path, header);
        return intercept ? with_intercept(data) : data;
    }
};

void add_ep_options(CLI::App& cmd, EPConfig& ep) {
    cmd.add_option("--tol", ep.tol, "Convergence threshold on max |dk| + |dm| per sweep")->capture_default_str();
    cmd.add_option("--max-sweeps", ep.max_sweeps, "Maximum number of sweeps")->capture_default_str();
    cmd.add_option("--damping", ep.damping, "Damping in (0, 1]; 1 is undamped")->capture_default_str();
}

struct SimulateArgs {
    SimConfig sim;
    double nu2 = 25.0;
    std::string beta_gen = "prior";
    std::string out;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    SimConfig sim = args.sim;
    sim.beta_gen = parse_beta_gen(args.beta_gen);
    const PriorConfig prior{args.nu2};
    const SimulatedData result = simulate(sim, prior);

    const fs::path csv_path = args.out;
    save_csv(result.data, csv_path);
    const fs::path meta_path = sibling_path(csv_path, ".meta.json");
    json meta = {
        {"n", sim.n},
        {"p", sim.p},
        {"seed", sim.seed},
        {"nu2", prior.nu2},
        {"beta_gen", std::string(to_string(sim.beta_gen))},
        {"true_beta", to_std(result.true_beta)},
    };
    open_output(meta_path) << meta.dump(2) << '\n';
    out << "wrote " << csv_path.string() << " and " << meta_path.string() << '\n';
    return kExitOk;
}

struct FitArgs {
    DataOptions data;
    double nu2 = 25.0;
    std::string algorithm = "auto";
    EPConfig ep;
    std::string out;
    bool full_covariance = false;
};

int cmd_fit(const FitArgs& args, std::ostream& out) {
    const Dataset data = args.data.load();
    const PriorConfig prior{args.nu2};
    const FitOutcome result = fit(data, prior, args.ep, parse_algorithm(args.algorithm), args.full_covariance);

    json doc = {
        {"algorithm_used", std::string(to_string(result.algorithm_used))},
        {"mean", to_std(result.summary.mean)},
        {"sd", to_std(result.summary.sd)},
        {"sweeps", result.report.sweeps_run},
        {"converged", result.report.converged},
        {"skipped_sites", result.report.skipped_sites},
        {"wall_time_seconds", result.report.wall_time},
    };
    open_output(args.out) << doc.dump(2) << '\n';

    if (args.full_covariance) {
        const fs::path cov_path = sibling_path(args.out, ".cov.csv");
        auto cov_out = open_output(cov_path);
        const Matrix& cov = *result.summary.covariance;
        for (Eigen::Index i = 0; i < cov.rows(); ++i) {
            for (Eigen::Index j = 0; j < cov.cols(); ++j) {
                if (j) cov_out << ',';
                cov_out << fmt17(cov(i, j));
            }
            cov_out << '\n';
        }
    }
    out << "algorithm " << to_string(result.algorithm_used) << ", " << result.report.sweeps_run << " sweeps, "
        << (result.report.converged ? "converged" : "not converged") << '\n';
    return kExitOk;
}

struct CompareArgs {
    DataOptions data;
    double nu2 = 25.0;
    std::string oracle = "rejection";
    std::size_t oracle_samples = 20000;
    std::uint64_t draw_budget = 10'000'000;
    std::uint64_t seed = 1;
    EPConfig ep;
    std::string out;
};

int cmd_compare(const CompareArgs& args, std::ostream& out) {
    const Dataset data = args.data.load();
    const PriorConfig prior{args.nu2};
    const FitOutcome ep = fit(data, prior, args.ep, Algorithm::Auto);

    Vector oracle_mean;
    Vector oracle_sd;
    if (args.oracle == "quad1d") {
        const Posterior1d q = quadrature_posterior_1d(data, prior);
        oracle_mean = Vector::Constant(1, q.mean);
        oracle_sd = Vector::Constant(1, q.sd);
    } else {
        RejectionOptions opts;
        opts.draw_budget = args.draw_budget;
        const OracleResult r = rejection_sample_posterior(data, prior, args.oracle_samples, args.seed, opts);
        oracle_mean = r.mean;
        oracle_sd = r.sd;
    }

    auto csv = open_output(args.out);
    csv << "index,ep_mean,oracle_mean,abs_mean_diff,ep_sd,oracle_sd,abs_sd_diff\n";
    std::vector<double> dmean;
    std::vector<double> dsd;
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        dmean.push_back(std::fabs(ep.summary.mean(j) - oracle_mean(j)));
        dsd.push_back(std::fabs(ep.summary.sd(j) - oracle_sd(j)));
        csv << j << ',' << fmt17(ep.summary.mean(j)) << ',' << fmt17(oracle_mean(j)) << ',' << fmt17(dmean.back())
            << ',' << fmt17(ep.summary.sd(j)) << ',' << fmt17(oracle_sd(j)) << ',' << fmt17(dsd.back()) << '\n';
    }
    for (const auto& [label, q] : {std::pair{"median", 0.5}, std::pair{"q1", 0.25}, std::pair{"q3", 0.75}}) {
        csv << label << ",,," << fmt17(quantile(dmean, q)) << ",,," << fmt17(quantile(dsd, q)) << '\n';
    }
    out << "median |dmean| " << fmt17(median(dmean)) << ", median |dsd| " << fmt17(median(dsd)) << '\n';
    return kExitOk;
}

struct BenchmarkArgs {
    BenchmarkConfig cfg;
    std::vector<Eigen::Index> p_grid{50, 100, 200, 400, 800};
    std::string out;
};

int cmd_benchmark(BenchmarkArgs args, std::ostream& out) {
    args.cfg.p_grid = args.p_grid;
    const auto records = run_benchmark(args.cfg);
    std::ostringstream buffer;
    write_benchmark_csv(records, buffer);
    open_output(args.out) << buffer.str();
    out << "wrote " << records.size() << " records to " << args.out << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Expectation propagation for Bayesian probit regression", "epprobit"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a probit dataset");
    simulate_cmd->add_option("--n", sim_args.sim.n, "Observations")->check(CLI::PositiveNumber)->capture_default_str();
    simulate_cmd->add_option("--p", sim_args.sim.p, "Covariates")->check(CLI::PositiveNumber)->capture_default_str();
    simulate_cmd->add_option("--seed", sim_args.sim.seed, "RNG seed")->capture_default_str();
    simulate_cmd->add_option("--nu2", sim_args.nu2, "Prior variance")->check(CLI::PositiveNumber)->capture_default_str();
    simulate_cmd->add_option("--beta-gen", sim_args.beta_gen, "Coefficient rule")
        ->check(CLI::IsMember({"prior", "fixed_unit"}))
        ->capture_default_str();
    simulate_cmd->add_option("--out", sim_args.out, "Output CSV; metadata goes to <stem>.meta.json")->required();

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the EP approximation");
    fit_args.data.add_to(*fit_cmd);
    fit_cmd->add_option("--nu2", fit_args.nu2, "Prior variance")->check(CLI::PositiveNumber)->capture_default_str();
    fit_cmd->add_option("--algorithm", fit_args.algorithm, "dense, lowrank or auto")
        ->check(CLI::IsMember({"dense", "lowrank", "auto"}))
        ->capture_default_str();
    add_ep_options(*fit_cmd, fit_args.ep);
    fit_cmd->add_option("--out", fit_args.out, "Output JSON")->required();
    fit_cmd->add_flag("--full-covariance", fit_args.full_covariance, "Also write <stem>.cov.csv");

    CompareArgs cmp_args;
    auto* compare_cmd = app.add_subcommand("compare", "Compare EP moments with an exact oracle");
    cmp_args.data.add_to(*compare_cmd);
    compare_cmd->add_option("--nu2", cmp_args.nu2, "Prior variance")->check(CLI::PositiveNumber)->capture_default_str();
    compare_cmd->add_option("--oracle", cmp_args.oracle, "rejection or quad1d")
        ->check(CLI::IsMember({"rejection", "quad1d"}))
        ->capture_default_str();
    compare_cmd->add_option("--oracle-samples", cmp_args.oracle_samples, "Accepted rejection samples")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    compare_cmd->add_option("--draw-budget", cmp_args.draw_budget, "Maximum prior draws")->capture_default_str();
    compare_cmd->add_option("--seed", cmp_args.seed, "Oracle RNG seed")->capture_default_str();
    add_ep_options(*compare_cmd, cmp_args.ep);
    compare_cmd->add_option("--out", cmp_args.out, "Output CSV")->required();

    BenchmarkArgs bench_args;
    auto* bench_cmd = app.add_subcommand("benchmark", "Time dense and low-rank EP over a grid of p");
    bench_cmd->add_option("--n", bench_args.cfg.n, "Observations")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--p-grid", bench_args.p_grid, "Comma-separated covariate counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--reps", bench_args.cfg.reps, "Datasets per p")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--seed", bench_args.cfg.seed, "Base RNG seed")->capture_default_str();
    bench_cmd->add_option("--nu2", bench_args.cfg.nu2, "Prior variance")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--oracle-samples", bench_args.cfg.oracle_samples, "Rejection oracle samples (0 = off)")
        ->capture_default_str();
    add_ep_options(*bench_cmd, bench_args.cfg.ep);
    bench_cmd->add_option("--out", bench_args.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const auto selected = app.get_subcommands();
        err << (selected.empty() ? app.help() : selected.front()->help());
        return kExitUsage;
    }

    try {
        if (simulate_cmd->parsed()) return cmd_simulate(sim_args, out);
        if (fit_cmd->parsed()) return cmd_fit(fit_args, out);
        if (compare_cmd->parsed()) return cmd_compare(cmp_args, out);
        return cmd_benchmark(std::move(bench_args), out);
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const AcceptanceTooLow& e) {
        err << "error: " << e.what() << "\nhint: the rejection oracle is only practical for small n (about 12 or fewer)\n";
        return kExitRuntime;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace epprobit

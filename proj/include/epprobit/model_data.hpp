#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace epprobit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Design matrices are row-major so each observation x_i is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Binary-response design: row i of X is the covariate vector of observation i.
/// Immutable once built; construct through validate(), load_csv() or simulate().
class Dataset {
public:
    const RowMatrix& X() const noexcept { return X_; }
    const std::vector<int>& y() const noexcept { return y_; }
    Eigen::Index n() const noexcept { return X_.rows(); }
    Eigen::Index p() const noexcept { return X_.cols(); }

    /// 2*y_i - 1, the sign carried into the probit likelihood.
    double sign(Eigen::Index i) const { return y_[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0; }

private:
    Dataset(RowMatrix X, std::vector<int> y) : X_(std::move(X)), y_(std::move(y)) {}
    friend Dataset validate(RowMatrix X, std::vector<int> y);

    RowMatrix X_;
    std::vector<int> y_;
};

/// Prior beta ~ N(0, nu2 * I).
struct PriorConfig {
    double nu2 = 25.0;

    /// Throws InvalidConfig unless nu2 is finite and strictly positive.
    void check() const;
};

enum class BetaGen {
    Prior,      ///< beta ~ N(0, nu2 I)
    FixedUnit,  ///< beta_j = +1, -1, +1, ...
};

BetaGen parse_beta_gen(std::string_view tag);
std::string_view to_string(BetaGen gen);

struct SimConfig {
    Eigen::Index n = 100;
    Eigen::Index p = 50;
    std::uint64_t seed = 1;
    BetaGen beta_gen = BetaGen::Prior;

    void check() const;
};

struct SimulatedData {
    Dataset data;
    Vector true_beta;
};

/// Throws DimensionMismatch, NonBinaryResponse or NonFiniteCovariate.
Dataset validate(RowMatrix X, std::vector<int> y);

/// Column 1 is y, columns 2..p+1 are covariates; comma-delimited.
Dataset load_csv(const std::filesystem::path& path, bool has_header = false);

/// Writes the layout read by load_csv with 17 significant digits, so a
/// load_csv of the output reproduces the dataset bit for bit.
void save_csv(const Dataset& data, const std::filesystem::path& path, bool write_header = false);

/// X_ij ~ N(0,1) i.i.d., beta per cfg.beta_gen, y_i ~ Bernoulli(Phi(x_i' beta)).
/// Deterministic in (cfg, prior); each of X, beta and y has its own RNG stream.
SimulatedData simulate(const SimConfig& cfg, const PriorConfig& prior);

/// Copy of data with a leading column of ones.
Dataset with_intercept(const Dataset& data);

}  // namespace epprobit

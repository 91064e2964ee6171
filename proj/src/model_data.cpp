#include "epprobit/model_data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "epprobit/errors.hpp"
#include "epprobit/random.hpp"
#include "epprobit/special_functions.hpp"

namespace epprobit {

void PriorConfig::check() const {
    if (!std::isfinite(nu2) || nu2 <= 0.0) {
        throw InvalidConfig("prior variance nu2 must be finite and > 0");
    }
}

BetaGen parse_beta_gen(std::string_view tag) {
    if (tag == "prior") return BetaGen::Prior;
    if (tag == "fixed_unit") return BetaGen::FixedUnit;
    throw InvalidConfig("unknown beta generation rule '" + std::string(tag) + "'");
}

std::string_view to_string(BetaGen gen) {
    return gen == BetaGen::Prior ? "prior" : "fixed_unit";
}

void SimConfig::check() const {
    if (n < 1 || p < 1) {
        throw InvalidConfig("simulation requires n >= 1 and p >= 1");
    }
}

Dataset validate(RowMatrix X, std::vector<int> y) {
    if (X.rows() != static_cast<Eigen::Index>(y.size())) {
        throw DimensionMismatch("X has " + std::to_string(X.rows()) + " rows but y has " +
                                std::to_string(y.size()) + " entries");
    }
    if (X.rows() < 1 || X.cols() < 1) {
        throw DimensionMismatch("dataset must have n >= 1 and p >= 1");
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0 && y[i] != 1) {
            throw NonBinaryResponse("y[" + std::to_string(i) + "] = " + std::to_string(y[i]) +
                                    " is not 0 or 1");
        }
    }
    if (!X.allFinite()) {
        throw NonFiniteCovariate("X contains NaN or infinite entries");
    }
    return Dataset(std::move(X), std::move(y));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field, std::size_t row, std::size_t col) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("cannot parse '" + std::string(field) + "' as a number", row, col);
    }
    return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }

    std::vector<double> values;
    std::vector<int> y;
    std::size_t width = 0;
    std::size_t row = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++row;
        if (has_header && row == 1) continue;
        const auto content = trim(line);
        if (content.empty()) continue;

        const auto fields = split_fields(content);
        if (fields.size() < 2) {
            throw ParseError("expected a response and at least one covariate", row, 0);
        }
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw ParseError("expected " + std::to_string(width) + " fields, found " +
                                 std::to_string(fields.size()),
                             row, 0);
        }

        const double response = parse_double(fields[0], row, 1);
        if (response != std::floor(response) || std::fabs(response) > 1e9) {
            throw NonBinaryResponse("response '" + std::string(trim(fields[0])) + "' on row " +
                                    std::to_string(row) + " is not 0 or 1");
        }
        y.push_back(static_cast<int>(response));
        for (std::size_t c = 1; c < fields.size(); ++c) {
            values.push_back(parse_double(fields[c], row, c + 1));
        }
    }
    if (in.bad()) {
        throw IoError("read error on '" + path.string() + "'");
    }
    if (y.empty()) {
        throw ParseError("no data rows in '" + path.string() + "'", row + 1, 0);
    }

    const auto n = static_cast<Eigen::Index>(y.size());
    const auto p = static_cast<Eigen::Index>(width - 1);
    RowMatrix X = Eigen::Map<const RowMatrix>(values.data(), n, p);
    return validate(std::move(X), std::move(y));
}

void save_csv(const Dataset& data, const std::filesystem::path& path, bool write_header) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    if (write_header) {
        out << "y";
        for (Eigen::Index j = 0; j < data.p(); ++j) out << ",x" << (j + 1);
        out << '\n';
    }
    char buf[32];
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        out << data.y()[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < data.p(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.X()(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write error on '" + path.string() + "'");
    }
}

SimulatedData simulate(const SimConfig& cfg, const PriorConfig& prior) {
    cfg.check();
    prior.check();

    Rng x_rng(cfg.seed, Stream::Covariates);
    RowMatrix X(cfg.n, cfg.p);
    for (Eigen::Index i = 0; i < cfg.n; ++i) {
        for (Eigen::Index j = 0; j < cfg.p; ++j) X(i, j) = x_rng.normal();
    }

    Vector beta(cfg.p);
    if (cfg.beta_gen == BetaGen::Prior) {
        Rng b_rng(cfg.seed, Stream::Coefficients);
        const double nu = std::sqrt(prior.nu2);
        for (Eigen::Index j = 0; j < cfg.p; ++j) beta(j) = nu * b_rng.normal();
    } else {
        for (Eigen::Index j = 0; j < cfg.p; ++j) beta(j) = (j % 2 == 0) ? 1.0 : -1.0;
    }

    Rng y_rng(cfg.seed, Stream::Responses);
    const Vector eta = X * beta;
    std::vector<int> y(static_cast<std::size_t>(cfg.n));
    for (Eigen::Index i = 0; i < cfg.n; ++i) {
        y[static_cast<std::size_t>(i)] = y_rng.uniform() < norm_cdf(eta(i)) ? 1 : 0;
    }
    return {validate(std::move(X), std::move(y)), std::move(beta)};
}

Dataset with_intercept(const Dataset& data) {
    RowMatrix X(data.n(), data.p() + 1);
    X.col(0).setOnes();
    X.rightCols(data.p()) = data.X();
    return validate(std::move(X), data.y());
}

}  // namespace epprobit

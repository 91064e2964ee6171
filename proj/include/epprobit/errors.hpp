#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epprobit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonBinaryResponse : public Error {
public:
    using Error::Error;
};

class NonFiniteCovariate : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// CSV parse failure. Row and column are 1-based file positions; column 0
/// means the whole row.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class AcceptanceTooLow : public Error {
public:
    using Error::Error;
};

class QuadratureNonConvergence : public Error {
public:
    using Error::Error;
};

}  // namespace epprobit

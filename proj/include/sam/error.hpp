#ifndef SAM_ERROR_HPP
#define SAM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sam {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (nonpositive dimension, probability outside (0,1), point outside support).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The operation is undefined for the given object (e.g. cdf of a Fixed
/// distribution, serializing a synthetic device).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// A metric name not provided by the device under analysis.
class UnknownMetricError : public Error {
public:
    using Error::Error;
};

/// Frequency evaluation requested on a model whose calibration constant is
/// still zero.
class UncalibratedModelError : public Error {
public:
    using Error::Error;
};

/// Metric evaluation failed at a concrete parameter point; the message names
/// the parameter and value involved.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// All u-space gradient components are zero: the specification boundary has
/// no finite worst-case distance.
class DegenerateGradientError : public Error {
public:
    using Error::Error;
};

/// Iterative worst-case search exhausted its iteration budget. Carries the
/// last iterate in u-space.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, std::vector<double> last_u, int iterations)
        : Error(msg), last_u_(std::move(last_u)), iterations_(iterations) {}

    const std::vector<double>& last_iterate() const noexcept { return last_u_; }
    int iterations() const noexcept { return iterations_; }

private:
    std::vector<double> last_u_;
    int iterations_;
};

/// The brute-force grid search found no spec-violating point inside its
/// search radius.
class NoBoundaryError : public Error {
public:
    using Error::Error;
};

/// Command-line arguments failed validation.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Which grammar rule a netlist parse error violated.
enum class ParseErrorKind {
    UnknownKeyword,
    UnknownDeviceKind,
    UnknownDistributionKind,
    UnknownField,
    UnknownParameter,
    UnknownMetric,
    DuplicateStatement,
    DuplicateParameter,
    MalformedNumber,
    MissingArgument,
    InvalidValue,
};

/// Netlist syntax or validation failure. `line()` is 1-based and points at
/// the offending statement.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, int line, const std::string& msg)
        : Error(msg), kind_(kind), line_(line) {}

    ParseErrorKind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    int line_;
};

}  // namespace sam

#endif  // SAM_ERROR_HPP

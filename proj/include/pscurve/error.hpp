#pragma once

#include <stdexcept>
#include <string>

namespace pscurve {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid (n, p) combination or a field tag an operation does not accept.
class SignatureError : public Error {
public:
    using Error::Error;
};

/// Vector or matrix sizes that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Path-file or expression syntax problem. Line and column are 1-based;
/// zero means "not known".
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(format(msg, line, column)), message_(msg), line_(line), column_(column) {}

    /// The diagnostic without the position prefix.
    const std::string& message() const noexcept { return message_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        if (line <= 0) {
            return column > 0 ? "column " + std::to_string(column) + ": " + msg : msg;
        }
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
    }

    std::string message_;
    int line_;
    int column_;
};

/// Evaluation outside the domain of a function (log at 0, t outside the
/// interval, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A value overflowed to infinity (or NaN) during evaluation.
class OverflowError : public DomainError {
public:
    using DomainError::DomainError;
};

/// M(x)(t) is (numerically) singular where a nonsingular frame is required.
class StrongRegularityError : public Error {
public:
    StrongRegularityError(const std::string& what, double t, double abs_det)
        : Error(what), t_(t), abs_det_(abs_det) {}

    double t() const noexcept { return t_; }
    double abs_det() const noexcept { return abs_det_; }

private:
    double t_;
    double abs_det_;
};

/// Adaptive quadrature did not reach the requested accuracy.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Finiteness of an arc-length tail could not be decided within budget.
class IndeterminateTailError : public Error {
public:
    using Error::Error;
};

/// Root bracketing for the inverse arc-length map failed.
class BracketError : public Error {
public:
    using Error::Error;
};

}  // namespace pscurve

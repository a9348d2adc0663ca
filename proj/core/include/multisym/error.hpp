#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multisym {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different ambient dimensions or have incompatible degrees.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A finite-difference stencil would leave the chart domain.
class BoundaryError : public Error {
public:
    using Error::Error;
};

/// A scalar on M(pi) does not satisfy Z(H) = 1 where required.
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

/// A variation is not compactly supported inside the integration box.
class SupportError : public Error {
public:
    using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    using Error::Error;

    /// Residual after each sweep, when the solver kept one.
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Generic precondition failure (bad step, bad degree, empty grid...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace multisym

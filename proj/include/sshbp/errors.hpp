#pragma once

#include <stdexcept>
#include <string>

namespace sshbp {

/// Raised when an input violates a documented invariant. `field()` names the
/// offending field so CLI messages can point at the config key.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The requested z-quadrature cannot reach the accuracy target.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical routine failed in a way that indicates a bug (e.g. eigensolver
/// non-convergence on symmetric tridiagonal input).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sshbp

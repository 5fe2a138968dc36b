#pragma once

#include <stdexcept>
#include <string>

namespace isospec {

// Bad input values: singular maps, degenerate polygons, out-of-range counts.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A structurally valid input that violates an operation's geometric
// precondition (e.g. missing rotational symmetry).
class PreconditionViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The requested combination has no implementation (e.g. exact Robin
// spectrum of a triangle).
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Schrodinger box too small for the requested eigenvalues.
class WidenGrid : public std::runtime_error {
public:
    WidenGrid(const std::string& what, double suggested_half_width)
        : std::runtime_error(what), suggested_half_width_(suggested_half_width) {}

    double suggested_half_width() const noexcept { return suggested_half_width_; }

private:
    double suggested_half_width_;
};

}  // namespace isospec

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace deltashell {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument inside the domain but outside the representable/accurate range.
class RangeError : public std::runtime_error {
public:
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method exhausted its iteration budget.
class NoConvergenceError : public std::runtime_error {
public:
    NoConvergenceError(const std::string& what, std::complex<double> last, double residual)
        : std::runtime_error(what), last_iterate(last), residual(residual) {}

    std::complex<double> last_iterate;
    double residual;
};

/// Invalid or degenerate geometry (self-intersection, vanishing tangent, ...).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested spectral data does not exist (no bound state, empty basin, ...).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Eigenfunction normalisation failed (self-orthogonal state, zero norm).
class NormalizationError : public std::runtime_error {
public:
    explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace deltashell

#pragma once

#include <complex>
#include <functional>

namespace deltashell::numerics {

using Complex = std::complex<double>;
using ComplexFunction = std::function<Complex(Complex)>;

struct RootOptions {
    double tol = 1e-12;
    int max_iterations = 200;
};

/// Root of an analytic scalar function near `seed`: Newton with a central
/// finite-difference derivative (step 1e-7 * max(1, |z|)), switching to
/// Muller's method when Newton stagnates. On success both |f(z*)| and the
/// final step are below tol; otherwise a NoConvergenceError carries the last
/// iterate and residual.
Complex find_root_complex(const ComplexFunction& f, Complex seed, double tol);
Complex find_root_complex(const ComplexFunction& f, Complex seed, const RootOptions& opts);

} // namespace deltashell::numerics

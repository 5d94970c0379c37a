#pragma once

#include <complex>
#include <vector>

namespace deltashell::numerics {

using Complex = std::complex<double>;

struct FitResult {
    /// c[j] multiplies eps^j; length degree + 1.
    std::vector<Complex> coefficients;
    /// l2 norm of the model residuals at the requested degree.
    double residual_norm = 0.0;
    /// Exponent p of the remainder after removing the constant and linear
    /// parts (log-log slope); +inf when the remainder sits at rounding floor.
    double order_estimate = 0.0;
};

/// Least-squares polynomial fit of complex samples against a real expansion
/// parameter. Requires degree + 2 distinct eps values.
FitResult fit_expansion(const std::vector<std::pair<double, Complex>>& points, int degree);

} // namespace deltashell::numerics

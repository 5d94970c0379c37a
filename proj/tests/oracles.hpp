#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library evaluation paths: extended-precision series / integral
// representations for the special functions, bisection for real secular
// roots, AGM for the ellipse perimeter, and adaptive Simpson quadrature.

#include <complex>
#include <functional>

namespace oracles {

using Complex = std::complex<double>;

/// I_nu by the ascending power series in long double (any nu > -1).
Complex bessel_i_series(double nu, Complex z);

/// K_0 and K_1 by the real-integral representation
/// K_nu(z) = sqrt(pi/(2z)) e^{-z} / Gamma(nu+1/2) * int_0^inf e^{-t} t^{nu-1/2}
/// (1+t/(2z))^{nu-1/2} dt, evaluated with a long double trapezoid after
/// t = v^2; integer orders >= 2 by upward recurrence.
Complex bessel_k_integral(int n, Complex z);

/// Bisection root of a real continuous function with a sign change on [a,b].
double bisect(const std::function<double(double)>& f, double a, double b, double tol);

/// Ellipse perimeter 4 a E(e) through the arithmetic-geometric mean.
double ellipse_perimeter(double a, double b);

/// Adaptive Simpson quadrature of a real function.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

} // namespace oracles

#pragma once

#include <complex>

namespace deltashell::numerics {

using Complex = std::complex<double>;

// Modified Bessel functions of complex argument, Re z > 0, for the orders
// actually needed by the radial reductions: nonnegative integers and
// half-integers. Evaluation strategy:
//   * integer order, |z| <= 17 : ascending series (long double accumulation)
//     for I0/I1, downward Miller recurrence for higher orders; K0/K1 by the
//     logarithmic series (|z| <= 2), the Thompson-Barnett continued fraction
//     (moderate/large |z|), or a long-double series fallback near the
//     imaginary axis; upward recurrence for K_n, n >= 2.
//   * integer order, |z| > 17 : large-argument expansions, both exponentials
//     retained for I.
//   * half-integer order       : closed elementary forms, with the ascending
//     series substituted at small |z| where the closed forms cancel.
//
// Relative accuracy target: 1e-12 on Re z in [0.1, 30], |Im z| <= 5.

/// I_nu(z). `order` must be a nonnegative integer or half-integer.
Complex bessel_i(double order, Complex z);

/// K_nu(z). `order` must be a nonnegative integer or half-integer.
Complex bessel_k(double order, Complex z);

/// d/dz I_nu(z) via the stable recurrence forms.
Complex bessel_i_prime(double order, Complex z);

/// d/dz K_nu(z).
Complex bessel_k_prime(double order, Complex z);

/// Largest |z| accepted before a RangeError is raised (exponential overflow).
double bessel_overflow_bound();

} // namespace deltashell::numerics

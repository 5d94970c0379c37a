#pragma once

#include "deltashell/coupling.hpp"

#include <complex>

namespace deltashell::onedim {

using Complex = std::complex<double>;
using deltashell::Coupling;

/// Two point interactions at x = +-eps on the line. Everything is closed
/// form: the eigenvalue comes from the transcendental secular equation, the
/// eigenfunction is a piecewise exponential
///
///   f(x) = e^{kappa x}                    x < -eps
///        = c1 e^{-kappa x} + c2 e^{kappa x}   |x| < eps
///        = c3 e^{-kappa x}                x > eps
///
/// normalised by the bilinear condition  int f^2 = 1.
class PiecewiseEigenfunction {
public:
    PiecewiseEigenfunction(Complex kappa, double eps, const Coupling& c);

    Complex kappa() const { return kappa_; }
    double epsilon() const { return eps_; }
    Complex c1() const { return c1_; }
    Complex c2() const { return c2_; }
    Complex c3() const { return c3_; }
    /// int f^2 before rescaling.
    Complex normalization() const { return raw_norm_; }

    /// Normalised value / one-sided derivative at x (sides agree away from
    /// the interaction points; at a breakpoint the `from_left` flag picks the
    /// piece).
    Complex value(double x) const;
    Complex derivative(double x, bool from_left) const;

private:
    Complex piece_value(double x, int piece) const;
    Complex piece_derivative(double x, int piece) const;
    int piece_of(double x, bool from_left) const;

    Complex kappa_;
    double eps_;
    Complex c1_, c2_, c3_;
    Complex raw_norm_;
    Complex scale_;
};

/// lambda_0 = -(alpha_+ + alpha_-)^2 / 4; requires Re(alpha_+ + alpha_-) < 0.
Complex limit_eigenvalue(const Coupling& c);

/// (alpha_+ + 2 kappa)(alpha_- + 2 kappa) - alpha_+ alpha_- e^{-4 kappa eps}.
Complex secular_residual(Complex kappa, double eps, const Coupling& c);

/// Decay rate of the bound state for eps > 0, Newton-refined from the seed
/// kappa_0 - alpha_+ alpha_- eps.
Complex solve_kappa(double eps, const Coupling& c);

/// lambda_eps = -kappa_eps^2 (eps = 0 routes to limit_eigenvalue).
Complex eigenvalue(double eps, const Coupling& c);

PiecewiseEigenfunction eigenfunction(double eps, const Coupling& c);

/// First-order coefficient -(alpha_+ + alpha_-) alpha_+ alpha_-, cross-checked
/// against the boundary-trace form of the same coefficient.
Complex first_order_coefficient(const Coupling& c);

struct CorrectionDecomposition {
    /// (h_eps - h_0) evaluated on the limit eigenfunction.
    Complex form_difference;
    /// h_eps on the projected-out component omega = psi_0 - (psi_eps, psi_0) psi_eps.
    Complex omega_energy;
    /// L2 norm of omega.
    double projector_norm;
};

CorrectionDecomposition correction_decomposition(double eps, const Coupling& c);

/// max over the two interaction points of |psi_eps - psi_0|.
double uniform_difference(double eps, const Coupling& c);

} // namespace deltashell::onedim

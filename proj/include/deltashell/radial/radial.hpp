#pragma once

#include "deltashell/asymptotics/asymptotics.hpp"
#include "deltashell/coupling.hpp"

#include <complex>
#include <utility>

namespace deltashell::radial {

using Complex = std::complex<double>;
using deltashell::Coupling;

/// Two concentric delta shells at radii R -+ eps in dimension 2 or 3,
/// restricted to one angular sector (Fourier mode m for d = 2, orbital l for
/// d = 3). The radial parts are modified Bessel functions of order
/// nu = m + (d-2)/2 with the d = 3 prefactor r^{-1/2}.
struct RadialProblem {
    int dimension = 2;
    double R = 1.0;
    double epsilon = 0.0;
    Coupling coupling;
    int angular_index = 0;

    double bessel_order() const { return angular_index + 0.5 * (dimension - 2); }
    void validate() const;
};

enum class AngularBasis { Constant, Cosine, Sine };

struct RadialEigenData {
    Complex lambda;
    Complex kappa;
    // coefficients of the raw (unnormalised) radial profile:
    // inner A I_nu, annulus B I_nu + C K_nu, outer D K_nu (eps = 0: A/D only)
    Complex A, B, C, D;
    Complex trace_psi0;     // u(R)
    Complex trace_dn_plus;  // outward-side radial derivative at R
    Complex trace_dn_minus; // -(inner-side radial derivative) at R
    Complex norm_sq;        // bilinear volume integral of psi^2 (raw scaling)
    AngularBasis angular = AngularBasis::Constant;
};

/// Determinant of the matching system at decay rate kappa (4x4 for eps > 0,
/// 2x2 single-shell for eps = 0), rows scaled by their max-magnitude entry.
Complex secular_det(Complex kappa, const RadialProblem& p);

/// Collapsed-shell starting guess kappa ~ -(alpha_+ + alpha_-)/2.
Complex default_seed(const RadialProblem& p);

/// Root of the secular determinant near `seed` plus the null-vector
/// coefficients, boundary traces at R and the closed-form volume norm.
RadialEigenData solve_eigenvalue(const RadialProblem& p, Complex seed);

/// First-order slope predicted by the trace formula, K1 = -1/R on the shell.
/// Requires eps = 0.
Complex predicted_slope(const RadialProblem& p, Complex seed);

/// cos/sin pair of the degenerate level m >= 1 (d = 2), sharing one kappa,
/// biorthonormalised so that the bilinear pairings are delta_ij.
std::pair<RadialEigenData, RadialEigenData> degenerate_pair(const RadialProblem& p, Complex seed);

/// Raw radial profile u(r) and one-sided derivative (for residual checks and
/// trace comparisons).
Complex radial_value(const RadialProblem& p, const RadialEigenData& d, double r);
Complex radial_derivative(const RadialProblem& p, const RadialEigenData& d, double r,
                          bool from_inside);

/// Worst continuity/jump-condition residual at the two shells, from
/// independent pointwise evaluation, relative to the trace magnitude.
double jump_residual(const RadialProblem& p, const RadialEigenData& d);

/// Angular normalisation constant: volume integral = angular_factor * int u^2 r^{d-1} dr.
double angular_factor(const RadialProblem& p, AngularBasis basis);

/// Boundary data for the slope formulas, sampled on `nodes` points of the
/// shell (d = 2) or as a single weighted node (d = 3, l = 0).
asymptotics::TraceBundle to_trace_bundle(const RadialProblem& p, const RadialEigenData& d,
                                         int nodes);

} // namespace deltashell::radial

#pragma once

#include "deltashell/coupling.hpp"
#include "deltashell/numerics/linalg.hpp"

#include <complex>
#include <vector>

namespace deltashell::asymptotics {

using Complex = std::complex<double>;
using deltashell::Coupling;

/// Boundary data of a limit eigenfunction, sampled on a surface quadrature
/// grid: values, one-sided normal derivatives, curvature and weights.
///
/// Derivative convention (the one that reproduces the 1D coefficient):
///   dn_plus  = directional derivative along +n taken from outside,
///   dn_minus = directional derivative along -n taken from inside,
/// so the interface condition at a collapsed shell with total coupling
/// alpha_+ + alpha_- reads  dn_plus + dn_minus = (alpha_+ + alpha_-) psi0.
struct TraceBundle {
    int dimension = 2;
    std::vector<Complex> psi0;
    std::vector<Complex> dn_plus;
    std::vector<Complex> dn_minus;
    std::vector<double> K1;     // first mean curvature per node
    std::vector<double> weight; // quadrature weights: sum w_i v_i ~ surface integral
    Complex norm_sq;            // bilinear volume integral of psi0^2

    void validate() const;
    Complex surface_sum(const std::vector<Complex>& values) const;
};

/// First-order eigenvalue slope for a simple limit eigenvalue,
///
///   [ a+ S(dn+ psi^2) + a- S(dn- psi^2) - S((a+^2 + a-^2 + (a+ - a-)(d-1) K1) psi^2) ] / norm_sq
///
/// with S the surface integral and dn(psi^2) = 2 psi dn psi.
Complex slope_simple(const TraceBundle& t, const Coupling& c);

struct SlopeMatrixResult {
    numerics::Matrix S;
    std::vector<Complex> slopes; // eigenvalues of S, sorted (Re, Im)
};

/// Degenerate version: bundles spanning the eigenspace, together with their
/// bilinear Gram matrix  G_ij = int psi_i psi_j  over R^d. The bundles are
/// re-biorthonormalised by bilinear Gram-Schmidt when G deviates from the
/// identity, then the coupling matrix S is assembled entry-wise and its
/// eigenvalues are the per-branch slopes.
SlopeMatrixResult slope_matrix(std::vector<TraceBundle> bundles, numerics::Matrix gram,
                               const Coupling& c);

} // namespace deltashell::asymptotics

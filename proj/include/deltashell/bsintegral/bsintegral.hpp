#pragma once

#include "deltashell/asymptotics/asymptotics.hpp"
#include "deltashell/coupling.hpp"
#include "deltashell/geometry/curve.hpp"
#include "deltashell/numerics/linalg.hpp"

#include <complex>
#include <vector>

namespace deltashell::bsintegral {

using Complex = std::complex<double>;
using deltashell::Coupling;
using geometry::ClosedCurve;

/// Nystrom data of one curve: node positions, parameters and speeds.
struct NystromGrid {
    std::vector<geometry::Point> nodes;
    std::vector<double> params;
    std::vector<double> speeds;
    int N = 0;
};

NystromGrid make_grid(const ClosedCurve& curve);

/// Discretisation of I + S(kappa) diag(alpha), where S is the single-layer
/// operator with kernel (1/2pi) K_0(kappa |x-y|) on the shell pair
/// Sigma_{+-eps} (or the single shell for eps = 0, with the summed coupling).
/// Self-interactions use the spectrally accurate log-splitting quadrature;
/// shell-to-shell interactions use per-row graded panels with trigonometric
/// interpolation of the density, which stays accurate when the shells nearly
/// touch.
struct BlockOperator {
    numerics::Matrix matrix; // (2N x 2N), or (N x N) for eps = 0
    int nodes_per_curve = 0;
    bool two_curves = false;
    Complex kappa;
};

BlockOperator build_block(Complex kappa, const ClosedCurve& sigma0, double eps, const Coupling& c,
                          int N);

/// Plain single-layer Nystrom matrix of one curve (diagnostics and tests).
numerics::Matrix single_layer_matrix(Complex kappa, const ClosedCurve& curve, int N);

struct EigenSolution {
    Complex lambda;
    Complex kappa;
    double sigma_ratio; // certification sigma_min / sigma_max at the root
};

/// Kernel point of the block operator near `seed` (in kappa), found on the
/// LU log-determinant and certified by the singular-value ratio.
EigenSolution find_eigenvalue(const ClosedCurve& sigma0, double eps, const Coupling& c,
                              Complex seed, int N);

struct EigenTraces {
    std::vector<Complex> psi0;     // boundary values on Sigma_0
    std::vector<Complex> dn_plus;  // one-sided normal derivative, outer side
    std::vector<Complex> dn_minus; // one-sided normal derivative, inner side
    Complex norm_sq;               // bilinear volume integral of psi^2
};

/// Boundary traces of the limit (eps = 0) eigenfunction at a certified
/// kernel point: null density from the smallest singular vector, normal
/// derivatives through the classical single-layer jump relations, volume
/// norm through the closed-form identity
///   int_{R^2} G_k(x,a) G_k(x,b) dx = |a-b| K_1(kappa |a-b|) / (4 pi kappa).
EigenTraces eigen_traces(const ClosedCurve& sigma0, const Coupling& c, Complex kappa, int N);

/// Shell values of the eps > 0 eigenfunction (the null density itself),
/// bilinearly normalised; row order matches the block operator.
struct ShellTraces {
    std::vector<Complex> outer; // on Sigma_{+eps}
    std::vector<Complex> inner; // on Sigma_{-eps}
    Complex norm_sq;
};

ShellTraces shell_traces(const ClosedCurve& sigma0, double eps, const Coupling& c, Complex kappa,
                         int N);

/// TraceBundle adapter (converts the inner-side derivative to the
/// inward-derivative convention of the slope formulas).
asymptotics::TraceBundle to_trace_bundle(const ClosedCurve& sigma0, const EigenTraces& t);

} // namespace deltashell::bsintegral

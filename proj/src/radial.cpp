#include "deltashell/radial/radial.hpp"

#include "deltashell/errors.hpp"
#include "deltashell/numerics/bessel.hpp"
#include "deltashell/numerics/linalg.hpp"
#include "deltashell/numerics/roots.hpp"

#include <array>
#include <cmath>

namespace deltashell::radial {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

using numerics::bessel_i;
using numerics::bessel_i_prime;
using numerics::bessel_k;
using numerics::bessel_k_prime;

// I_{nu} extended to the index nu-1 needed by the quadrature closed forms;
// only nu - 1 = -1/2 (d = 3, l = 0) falls outside the public order range.
Complex besi_ext(double order, Complex z) {
    if (order >= 0.0) return bessel_i(order, z);
    if (std::abs(order + 0.5) < 1e-12) {
        return std::sqrt(2.0 / (kPi * z)) * std::cosh(z);
    }
    return bessel_i(-order, z); // integer reflection
}

Complex besk_ext(double order, Complex z) { return bessel_k(std::abs(order), z); }

// radial basis u(r) = w(r) Z_nu(kappa r), w = r^{-(d-2)/2}
struct Basis {
    double s;      // (d-2)/2
    double nu;
    Complex kappa;

    Complex w(double r) const { return std::pow(r, -s); }
    Complex wp(double r) const { return s == 0.0 ? Complex(0.0) : -s * std::pow(r, -s - 1.0); }

    Complex uI(double r) const { return w(r) * bessel_i(nu, kappa * r); }
    Complex uK(double r) const { return w(r) * bessel_k(nu, kappa * r); }
    Complex duI(double r) const {
        return wp(r) * bessel_i(nu, kappa * r) + w(r) * kappa * bessel_i_prime(nu, kappa * r);
    }
    Complex duK(double r) const {
        return wp(r) * bessel_k(nu, kappa * r) + w(r) * kappa * bessel_k_prime(nu, kappa * r);
    }
};

Basis make_basis(const RadialProblem& p, Complex kappa) {
    return {0.5 * (p.dimension - 2), p.bessel_order(), kappa};
}

// Matching system in analytically column-normalised form: the I columns are
// divided by I_nu(kappa R) and the K columns by K_nu(kappa R), which keeps
// every entry O(1 + |alpha|) for all bindings and leaves the determinant an
// analytic function of kappa with the same zero set.
numerics::Matrix matching_matrix(Complex kappa, const RadialProblem& p) {
    const Basis bs = make_basis(p, kappa);
    const Complex iref = bessel_i(p.bessel_order(), kappa * p.R);
    const Complex kref = bessel_k(p.bessel_order(), kappa * p.R);
    if (p.epsilon == 0.0) {
        const double R = p.R;
        const Complex alpha = p.coupling.sum();
        numerics::Matrix m(2, 2);
        m(0, 0) = bs.uI(R) / iref;
        m(0, 1) = -bs.uK(R) / kref;
        m(1, 0) = (-bs.duI(R) - alpha * bs.uI(R)) / iref;
        m(1, 1) = bs.duK(R) / kref;
        return m;
    }
    const double a = p.R - p.epsilon;
    const double b = p.R + p.epsilon;
    numerics::Matrix m(4, 4);
    // unknowns (A, B, C, D) scaled by (I_ref, I_ref, K_ref, K_ref)
    m(0, 0) = bs.uI(a) / iref;
    m(0, 1) = -bs.uI(a) / iref;
    m(0, 2) = -bs.uK(a) / kref;
    m(1, 0) = (-bs.duI(a) - p.coupling.alpha_minus * bs.uI(a)) / iref;
    m(1, 1) = bs.duI(a) / iref;
    m(1, 2) = bs.duK(a) / kref;
    m(2, 1) = bs.uI(b) / iref;
    m(2, 2) = bs.uK(b) / kref;
    m(2, 3) = -bs.uK(b) / kref;
    m(3, 1) = -bs.duI(b) / iref;
    m(3, 2) = -bs.duK(b) / kref;
    m(3, 3) = (bs.duK(b) - p.coupling.alpha_plus * bs.uK(b)) / kref;
    return m;
}

// the column normalisation turns null-vector entries into scaled
// coefficients; undo it for the physical (A, B, C, D)
void unscale_coefficients(const RadialProblem& p, Complex kappa, std::vector<Complex>& v) {
    const Complex iref = bessel_i(p.bessel_order(), kappa * p.R);
    const Complex kref = bessel_k(p.bessel_order(), kappa * p.R);
    if (v.size() == 2) {
        v[0] /= iref;
        v[1] /= kref;
    } else {
        v[0] /= iref;
        v[1] /= iref;
        v[2] /= kref;
        v[3] /= kref;
    }
}

numerics::Matrix row_scaled(numerics::Matrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double mx = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) mx = std::max(mx, std::abs(m(i, j)));
        if (mx == 0.0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= mx;
    }
    return m;
}

Complex det_small(const numerics::Matrix& m) {
    if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    // 4x4 by cofactor expansion over the first column; entries are O(1)
    // after the column normalisation
    Complex det(0.0, 0.0);
    std::array<std::size_t, 4> rows{0, 1, 2, 3};
    for (std::size_t i = 0; i < 4; ++i) {
        std::array<std::size_t, 3> sub;
        std::size_t t = 0;
        for (std::size_t r : rows)
            if (r != i) sub[t++] = r;
        const Complex minor =
            m(sub[0], 1) * (m(sub[1], 2) * m(sub[2], 3) - m(sub[1], 3) * m(sub[2], 2)) -
            m(sub[0], 2) * (m(sub[1], 1) * m(sub[2], 3) - m(sub[1], 3) * m(sub[2], 1)) +
            m(sub[0], 3) * (m(sub[1], 1) * m(sub[2], 2) - m(sub[1], 2) * m(sub[2], 1));
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        det += sign * m(i, 0) * minor;
    }
    return det;
}

// Lommel antiderivatives of z Z(z) W(z); evaluate F(kappa r2) - F(kappa r1)
// and divide by kappa^2 for int_{r1}^{r2} Z W r dr.
Complex lommel_ii(double nu, Complex z) {
    const Complex i0 = bessel_i(nu, z);
    return 0.5 * z * z * (i0 * i0 - besi_ext(nu - 1.0, z) * bessel_i(nu + 1.0, z));
}

Complex lommel_kk(double nu, Complex z) {
    const Complex k0 = bessel_k(nu, z);
    return 0.5 * z * z * (k0 * k0 - besk_ext(nu - 1.0, z) * bessel_k(nu + 1.0, z));
}

Complex lommel_ik(double nu, Complex z) {
    const Complex ik = bessel_i(nu, z) * bessel_k(nu, z);
    const Complex cross = besi_ext(nu - 1.0, z) * bessel_k(nu + 1.0, z) +
                          bessel_i(nu + 1.0, z) * besk_ext(nu - 1.0, z);
    return 0.5 * z * z * (ik + 0.5 * cross);
}

// int_0^{r_in} A^2 I^2 + int_{r_in}^{r_out} (B I + C K)^2 + int_{r_out}^inf D^2 K^2,
// all against r^{d-1} dr; the w(r)^2 prefactor cancels one power of r in d=3.
Complex radial_norm(const RadialProblem& p, const RadialEigenData& d) {
    const double nu = p.bessel_order();
    const Complex k = d.kappa;
    const Complex k2 = k * k;
    const double a = p.R - p.epsilon;
    const double b = p.R + p.epsilon;

    Complex total(0.0, 0.0);
    if (p.epsilon == 0.0) {
        total += d.A * d.A * lommel_ii(nu, k * p.R) / k2;
        total -= d.D * d.D * lommel_kk(nu, k * p.R) / k2; // F(inf) = 0
    } else {
        total += d.A * d.A * lommel_ii(nu, k * a) / k2;
        const Complex ii = (lommel_ii(nu, k * b) - lommel_ii(nu, k * a)) / k2;
        const Complex kk = (lommel_kk(nu, k * b) - lommel_kk(nu, k * a)) / k2;
        const Complex ik = (lommel_ik(nu, k * b) - lommel_ik(nu, k * a)) / k2;
        total += d.B * d.B * ii + d.C * d.C * kk + 2.0 * d.B * d.C * ik;
        total -= d.D * d.D * lommel_kk(nu, k * b) / k2;
    }
    return total;
}

} // namespace

void RadialProblem::validate() const {
    if (dimension != 2 && dimension != 3) throw DomainError("radial: dimension must be 2 or 3");
    if (!(R > 0.0)) throw DomainError("radial: R must be positive");
    if (epsilon < 0.0 || epsilon >= 0.9 * R)
        throw DomainError("radial: need 0 <= eps < 0.9 R");
    if (angular_index < 0) throw DomainError("radial: angular index must be >= 0");
}

Complex secular_det(Complex kappa, const RadialProblem& p) {
    p.validate();
    if (!(kappa.real() > 0.0)) throw DomainError("secular_det: Re kappa must be positive");
    return det_small(row_scaled(matching_matrix(kappa, p)));
}

Complex default_seed(const RadialProblem& p) { return -0.5 * p.coupling.sum(); }

double angular_factor(const RadialProblem& p, AngularBasis basis) {
    if (p.dimension == 2) return basis == AngularBasis::Constant ? 2.0 * kPi : kPi;
    if (p.angular_index != 0)
        throw DomainError("radial: d = 3 volume normalisation implemented for l = 0 only");
    return 4.0 * kPi;
}

RadialEigenData solve_eigenvalue(const RadialProblem& p, Complex seed) {
    p.validate();
    if (!(seed.real() > 0.0)) throw DomainError("solve_eigenvalue: Re seed must be positive");

    // Newton runs on the analytic (column-normalised) determinant; the
    // row-scaled variant exposed by secular_det has max-switch kinks
    const auto f = [&](Complex kappa) { return det_small(matching_matrix(kappa, p)); };
    const Complex kappa = numerics::find_root_complex(f, seed, 1e-12);
    if (!(kappa.real() > 0.0))
        throw SolverError("solve_eigenvalue: converged to Re kappa <= 0");

    const numerics::Matrix m = matching_matrix(kappa, p);
    const auto sigma_min = numerics::smallest_singular(m);
    const double sigma_max = numerics::largest_singular(m);
    if (!sigma_min.exactly_singular && sigma_min.value > 1e-8 * sigma_max)
        throw SolverError("solve_eigenvalue: root not certified by the singular-value ratio");

    RadialEigenData d;
    d.kappa = kappa;
    d.lambda = -kappa * kappa;
    d.angular = (p.dimension == 2 && p.angular_index >= 1) ? AngularBasis::Cosine
                                                           : AngularBasis::Constant;

    auto null_vec = numerics::smallest_singular_vector(m);
    unscale_coefficients(p, kappa, null_vec);
    // canonical phase: largest coefficient rotated to the positive real axis,
    // so real problems produce real data and reruns are bit-reproducible
    std::size_t imax = 0;
    for (std::size_t i = 1; i < null_vec.size(); ++i)
        if (std::abs(null_vec[i]) > std::abs(null_vec[imax])) imax = i;
    const Complex phase = null_vec[imax] / std::abs(null_vec[imax]);
    for (auto& v : null_vec) v /= phase;
    const Basis bs = make_basis(p, kappa);
    if (p.epsilon == 0.0) {
        d.A = null_vec[0];
        d.D = null_vec[1];
        d.B = d.C = Complex(0.0, 0.0);
        d.trace_psi0 = 0.5 * (d.A * bs.uI(p.R) + d.D * bs.uK(p.R));
        d.trace_dn_plus = d.D * bs.duK(p.R);
        d.trace_dn_minus = -d.A * bs.duI(p.R);
    } else {
        d.A = null_vec[0];
        d.B = null_vec[1];
        d.C = null_vec[2];
        d.D = null_vec[3];
        d.trace_psi0 = d.B * bs.uI(p.R) + d.C * bs.uK(p.R);
        const Complex du = d.B * bs.duI(p.R) + d.C * bs.duK(p.R);
        d.trace_dn_plus = du;
        d.trace_dn_minus = -du;
    }
    d.norm_sq = radial_norm(p, d) * angular_factor(p, d.angular);
    if (std::abs(d.norm_sq) < 1e-300)
        throw NormalizationError("solve_eigenvalue: zero volume norm");
    return d;
}

Complex radial_value(const RadialProblem& p, const RadialEigenData& d, double r) {
    const Basis bs = make_basis(p, d.kappa);
    const double a = p.R - p.epsilon;
    const double b = p.R + p.epsilon;
    if (p.epsilon == 0.0) return r <= p.R ? d.A * bs.uI(r) : d.D * bs.uK(r);
    if (r < a) return d.A * bs.uI(r);
    if (r > b) return d.D * bs.uK(r);
    return d.B * bs.uI(r) + d.C * bs.uK(r);
}

Complex radial_derivative(const RadialProblem& p, const RadialEigenData& d, double r,
                          bool from_inside) {
    const Basis bs = make_basis(p, d.kappa);
    const double a = p.R - p.epsilon;
    const double b = p.R + p.epsilon;
    if (p.epsilon == 0.0) {
        if (r < p.R || (r == p.R && from_inside)) return d.A * bs.duI(r);
        return d.D * bs.duK(r);
    }
    if (r < a || (r == a && from_inside)) return d.A * bs.duI(r);
    if (r < b || (r == b && from_inside)) return d.B * bs.duI(r) + d.C * bs.duK(r);
    return d.D * bs.duK(r);
}

double jump_residual(const RadialProblem& p, const RadialEigenData& d) {
    const double scale = std::max(std::abs(d.trace_psi0), 1e-300);
    double worst = 0.0;
    auto at_shell = [&](double r, Complex alpha) {
        const Complex v_in = radial_value(p, d, r - 1e-13 * p.R);
        const Complex v_out = radial_value(p, d, r + 1e-13 * p.R);
        const Complex v = radial_value(p, d, r);
        worst = std::max(worst, std::abs(v_in - v_out) / scale);
        const Complex jump =
            radial_derivative(p, d, r, false) - radial_derivative(p, d, r, true);
        worst = std::max(worst, std::abs(jump - alpha * v) / (std::max(1.0, std::abs(alpha)) * scale));
    };
    if (p.epsilon == 0.0) {
        at_shell(p.R, p.coupling.sum());
    } else {
        at_shell(p.R - p.epsilon, p.coupling.alpha_minus);
        at_shell(p.R + p.epsilon, p.coupling.alpha_plus);
    }
    return worst;
}

asymptotics::TraceBundle to_trace_bundle(const RadialProblem& p, const RadialEigenData& d,
                                         int nodes) {
    if (p.epsilon != 0.0)
        throw DomainError("to_trace_bundle: boundary data of the limit problem requires eps = 0");
    asymptotics::TraceBundle t;
    t.dimension = p.dimension;
    t.norm_sq = d.norm_sq;

    if (p.dimension == 3) {
        if (p.angular_index != 0)
            throw DomainError("to_trace_bundle: d = 3 implemented for l = 0 only");
        t.psi0 = {d.trace_psi0};
        t.dn_plus = {d.trace_dn_plus};
        t.dn_minus = {d.trace_dn_minus};
        t.K1 = {-1.0 / p.R};
        t.weight = {4.0 * kPi * p.R * p.R};
        return t;
    }

    if (nodes < 4) throw DomainError("to_trace_bundle: need at least 4 nodes");
    t.psi0.resize(nodes);
    t.dn_plus.resize(nodes);
    t.dn_minus.resize(nodes);
    t.K1.assign(nodes, -1.0 / p.R);
    t.weight.assign(nodes, 2.0 * kPi * p.R / nodes);
    for (int i = 0; i < nodes; ++i) {
        const double theta = 2.0 * kPi * i / nodes;
        double ang = 1.0;
        if (d.angular == AngularBasis::Cosine) ang = std::cos(p.angular_index * theta);
        if (d.angular == AngularBasis::Sine) ang = std::sin(p.angular_index * theta);
        t.psi0[i] = d.trace_psi0 * ang;
        t.dn_plus[i] = d.trace_dn_plus * ang;
        t.dn_minus[i] = d.trace_dn_minus * ang;
    }
    return t;
}

Complex predicted_slope(const RadialProblem& p, Complex seed) {
    if (p.epsilon != 0.0) throw DomainError("predicted_slope: requires the eps = 0 problem");
    const RadialEigenData d = solve_eigenvalue(p, seed);
    const int nodes = p.dimension == 2 ? 256 : 1;
    return asymptotics::slope_simple(to_trace_bundle(p, d, nodes), p.coupling);
}

std::pair<RadialEigenData, RadialEigenData> degenerate_pair(const RadialProblem& p, Complex seed) {
    p.validate();
    if (p.dimension != 2 || p.angular_index < 1)
        throw DomainError("degenerate_pair: d = 2 with m >= 1 required");

    RadialEigenData base = solve_eigenvalue(p, seed);
    // biorthonormalise: volume pairing of the cos (or sin) member with itself
    const Complex s = 1.0 / std::sqrt(base.norm_sq);
    for (Complex* c : {&base.A, &base.B, &base.C, &base.D, &base.trace_psi0, &base.trace_dn_plus,
                       &base.trace_dn_minus})
        *c *= s;
    base.norm_sq = Complex(1.0, 0.0);

    RadialEigenData cosine = base;
    cosine.angular = AngularBasis::Cosine;
    RadialEigenData sine = base;
    sine.angular = AngularBasis::Sine;
    return {cosine, sine};
}

} // namespace deltashell::radial

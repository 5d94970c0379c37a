#include "deltashell/onedim/onedim.hpp"

#include "deltashell/errors.hpp"
#include "deltashell/numerics/roots.hpp"

#include <cmath>
#include <vector>

namespace deltashell::onedim {

namespace {

struct ExpTerm {
    Complex coeff;
    Complex rate; // coeff * exp(rate * x)
};

using ExpSum = std::vector<ExpTerm>;

// int_a^b e^{r x} dx with the small-|r (b-a)| limit handled by series.
Complex exp_integral(Complex r, double a, double b) {
    const double len = b - a;
    if (std::abs(r) * len < 1e-8) {
        const Complex u = r * len;
        return std::exp(r * a) * len * (1.0 + u * (0.5 + u / 6.0));
    }
    return (std::exp(r * b) - std::exp(r * a)) / r;
}

// int_a^inf e^{r x} dx, Re r < 0.
Complex exp_integral_tail(Complex r, double a) {
    if (!(r.real() < 0.0)) throw RangeError("exp_integral_tail: divergent integral");
    return -std::exp(r * a) / r;
}

Complex product_integral(const ExpSum& f, const ExpSum& g, double a, double b) {
    Complex acc(0.0, 0.0);
    for (const auto& tf : f)
        for (const auto& tg : g) acc += tf.coeff * tg.coeff * exp_integral(tf.rate + tg.rate, a, b);
    return acc;
}

Complex product_integral_tail(const ExpSum& f, const ExpSum& g, double a) {
    Complex acc(0.0, 0.0);
    for (const auto& tf : f)
        for (const auto& tg : g)
            acc += tf.coeff * tg.coeff * exp_integral_tail(tf.rate + tg.rate, a);
    return acc;
}

// ... and the mirrored tail int_{-inf}^b, Re r > 0.
Complex product_integral_left_tail(const ExpSum& f, const ExpSum& g, double b) {
    Complex acc(0.0, 0.0);
    for (const auto& tf : f)
        for (const auto& tg : g) {
            const Complex r = tf.rate + tg.rate;
            if (!(r.real() > 0.0)) throw RangeError("exp integral: divergent integral");
            acc += tf.coeff * tg.coeff * std::exp(r * b) / r;
        }
    return acc;
}

ExpSum differentiate(const ExpSum& f) {
    ExpSum d;
    d.reserve(f.size());
    for (const auto& t : f) d.push_back({t.coeff * t.rate, t.rate});
    return d;
}

ExpSum conjugate(const ExpSum& f) {
    ExpSum c;
    c.reserve(f.size());
    for (const auto& t : f) c.push_back({std::conj(t.coeff), std::conj(t.rate)});
    return c;
}

ExpSum scale(const ExpSum& f, Complex s) {
    ExpSum r = f;
    for (auto& t : r) t.coeff *= s;
    return r;
}

ExpSum combine(const ExpSum& f, const ExpSum& g) {
    ExpSum r = f;
    r.insert(r.end(), g.begin(), g.end());
    return r;
}

void require_bound_state(const Coupling& c) {
    if (!(c.sum().real() < 0.0))
        throw SolverError("onedim: no bound state, Re(alpha_+ + alpha_-) must be negative");
}

Complex limit_kappa(const Coupling& c) { return -0.5 * c.sum(); }

// Four intervals split at -eps, 0, eps; evaluators for both eigenfunctions
// as exponential sums per interval.
struct PieceTable {
    std::vector<ExpSum> pieces; // (-inf,-eps], [-eps,0], [0,eps], [eps,inf)
};

PieceTable pieces_of(const PiecewiseEigenfunction& ef, Complex norm_scale) {
    const Complex k = ef.kappa();
    PieceTable t;
    const ExpSum left = {{norm_scale, k}};
    const ExpSum mid = {{norm_scale * ef.c1(), -k}, {norm_scale * ef.c2(), k}};
    const ExpSum right = {{norm_scale * ef.c3(), -k}};
    if (ef.epsilon() == 0.0) {
        t.pieces = {left, left, right, right};
    } else {
        t.pieces = {left, mid, mid, right};
    }
    return t;
}

} // namespace

PiecewiseEigenfunction::PiecewiseEigenfunction(Complex kappa, double eps, const Coupling& c)
    : kappa_(kappa), eps_(eps) {
    const Complex am = c.alpha_minus;
    const Complex e2 = std::exp(2.0 * kappa_ * eps_);
    const Complex em2 = std::exp(-2.0 * kappa_ * eps_);
    c1_ = -am * em2 / (2.0 * kappa_);
    c2_ = (am + 2.0 * kappa_) / (2.0 * kappa_);
    c3_ = e2 + am / (2.0 * kappa_) * (e2 - em2);

    const Complex two_k = 2.0 * kappa_;
    const Complex sinh_term = (e2 - em2) / two_k;
    raw_norm_ = em2 / two_k                      // left tail
                + c1_ * c1_ * sinh_term          // middle, e^{-2kx}
                + 4.0 * c1_ * c2_ * eps_         // middle, cross
                + c2_ * c2_ * sinh_term          // middle, e^{+2kx}
                + c3_ * c3_ * em2 / two_k;       // right tail
    if (std::abs(raw_norm_) < 1e-14)
        throw NormalizationError("onedim: self-orthogonal eigenfunction, int psi^2 = 0");
    scale_ = 1.0 / std::sqrt(raw_norm_);
}

int PiecewiseEigenfunction::piece_of(double x, bool from_left) const {
    if (x < -eps_ || (x == -eps_ && from_left)) return 0;
    if (x < eps_ || (x == eps_ && from_left)) return 1;
    return 2;
}

Complex PiecewiseEigenfunction::piece_value(double x, int piece) const {
    switch (piece) {
    case 0: return std::exp(kappa_ * x);
    case 1: return c1_ * std::exp(-kappa_ * x) + c2_ * std::exp(kappa_ * x);
    default: return c3_ * std::exp(-kappa_ * x);
    }
}

Complex PiecewiseEigenfunction::piece_derivative(double x, int piece) const {
    switch (piece) {
    case 0: return kappa_ * std::exp(kappa_ * x);
    case 1: return kappa_ * (-c1_ * std::exp(-kappa_ * x) + c2_ * std::exp(kappa_ * x));
    default: return -kappa_ * c3_ * std::exp(-kappa_ * x);
    }
}

Complex PiecewiseEigenfunction::value(double x) const {
    return scale_ * piece_value(x, piece_of(x, false));
}

Complex PiecewiseEigenfunction::derivative(double x, bool from_left) const {
    return scale_ * piece_derivative(x, piece_of(x, from_left));
}

Complex limit_eigenvalue(const Coupling& c) {
    require_bound_state(c);
    const Complex s = c.sum();
    return -0.25 * s * s;
}

Complex secular_residual(Complex kappa, double eps, const Coupling& c) {
    return (c.alpha_plus + 2.0 * kappa) * (c.alpha_minus + 2.0 * kappa) -
           c.product() * std::exp(-4.0 * kappa * eps);
}

Complex solve_kappa(double eps, const Coupling& c) {
    require_bound_state(c);
    if (!(eps > 0.0)) throw DomainError("solve_kappa: eps must be positive");
    // seeded-basin guard; the residual postcondition certifies the root
    const Complex k0 = limit_kappa(c);
    if (eps * std::abs(c.product()) > 0.25 * std::abs(k0))
        throw SolverError("solve_kappa: eps outside the verified Newton basin");

    const auto residual = [&](Complex k) { return secular_residual(k, eps, c); };
    const Complex seed = k0 - c.product() * eps;
    Complex kappa = numerics::find_root_complex(residual, seed, 1e-13);
    if (std::abs(kappa) < 1e-8 * std::abs(k0)) {
        // kappa = 0 solves the secular equation but is not a bound state
        kappa = numerics::find_root_complex(residual, 1.5 * seed, 1e-13);
    }
    if (!(kappa.real() > 0.0)) throw SolverError("solve_kappa: converged to Re kappa <= 0");
    return kappa;
}

Complex eigenvalue(double eps, const Coupling& c) {
    if (eps == 0.0) return limit_eigenvalue(c);
    const Complex k = solve_kappa(eps, c);
    return -k * k;
}

PiecewiseEigenfunction eigenfunction(double eps, const Coupling& c) {
    require_bound_state(c);
    const Complex k = (eps == 0.0) ? limit_kappa(c) : solve_kappa(eps, c);
    return PiecewiseEigenfunction(k, eps, c);
}

Complex first_order_coefficient(const Coupling& c) {
    require_bound_state(c);
    const Complex direct = -c.sum() * c.product();

    // trace form of the same coefficient, from the limit eigenfunction
    const PiecewiseEigenfunction psi0 = eigenfunction(0.0, c);
    const Complex v0 = psi0.value(0.0);
    const Complex dplus = 2.0 * v0 * psi0.derivative(0.0, false);  // {psi^2}'(0+)
    const Complex dminus = 2.0 * v0 * psi0.derivative(0.0, true);  // {psi^2}'(0-)
    const Complex a2 = c.alpha_plus * c.alpha_plus + c.alpha_minus * c.alpha_minus;
    const Complex trace_form = c.alpha_plus * dplus - c.alpha_minus * dminus - a2 * v0 * v0;

    if (std::abs(trace_form - direct) > 1e-10 * std::max(1.0, std::abs(direct)))
        throw SolverError("first_order_coefficient: trace form disagrees with the product form");
    return direct;
}

CorrectionDecomposition correction_decomposition(double eps, const Coupling& c) {
    if (!(eps > 0.0)) throw DomainError("correction_decomposition: eps must be positive");
    const PiecewiseEigenfunction psi0 = eigenfunction(0.0, c);
    const PiecewiseEigenfunction psi_eps = eigenfunction(eps, c);

    CorrectionDecomposition out;

    const Complex p0 = psi0.value(0.0);
    const Complex pp = psi0.value(eps);
    const Complex pm = psi0.value(-eps);
    out.form_difference = c.alpha_plus * pp * pp + c.alpha_minus * pm * pm - c.sum() * p0 * p0;

    // omega = psi_0 - (psi_eps, psi_0) psi_eps with the bilinear pairing
    const Complex n0 = psi0.normalization();
    const Complex ne = psi_eps.normalization();
    const PieceTable t0 = pieces_of(psi0, 1.0 / std::sqrt(n0));
    const PieceTable te = pieces_of(psi_eps, 1.0 / std::sqrt(ne));

    const double bp[3] = {-eps, 0.0, eps};
    Complex pairing(0.0, 0.0);
    pairing += product_integral_left_tail(te.pieces[0], t0.pieces[0], bp[0]);
    pairing += product_integral(te.pieces[1], t0.pieces[1], bp[0], bp[1]);
    pairing += product_integral(te.pieces[2], t0.pieces[2], bp[1], bp[2]);
    pairing += product_integral_tail(te.pieces[3], t0.pieces[3], bp[2]);

    std::vector<ExpSum> omega(4);
    for (int i = 0; i < 4; ++i) omega[i] = combine(t0.pieces[i], scale(te.pieces[i], -pairing));

    Complex grad(0.0, 0.0);
    {
        const ExpSum d0 = differentiate(omega[0]);
        const ExpSum d1 = differentiate(omega[1]);
        const ExpSum d2 = differentiate(omega[2]);
        const ExpSum d3 = differentiate(omega[3]);
        grad += product_integral_left_tail(d0, d0, bp[0]);
        grad += product_integral(d1, d1, bp[0], bp[1]);
        grad += product_integral(d2, d2, bp[1], bp[2]);
        grad += product_integral_tail(d3, d3, bp[2]);
    }
    auto eval_sum = [](const ExpSum& f, double x) {
        Complex v(0.0, 0.0);
        for (const auto& t : f) v += t.coeff * std::exp(t.rate * x);
        return v;
    };
    const Complex om_plus = eval_sum(omega[3], eps);
    const Complex om_minus = eval_sum(omega[0], -eps);
    out.omega_energy = grad + c.alpha_plus * om_plus * om_plus + c.alpha_minus * om_minus * om_minus;

    Complex l2(0.0, 0.0);
    for (int i = 0; i < 4; ++i) {
        const ExpSum cj = conjugate(omega[i]);
        switch (i) {
        case 0: l2 += product_integral_left_tail(omega[i], cj, bp[0]); break;
        case 1: l2 += product_integral(omega[i], cj, bp[0], bp[1]); break;
        case 2: l2 += product_integral(omega[i], cj, bp[1], bp[2]); break;
        default: l2 += product_integral_tail(omega[i], cj, bp[2]); break;
        }
    }
    out.projector_norm = std::sqrt(std::abs(l2));
    return out;
}

double uniform_difference(double eps, const Coupling& c) {
    if (eps == 0.0) return 0.0;
    const PiecewiseEigenfunction psi0 = eigenfunction(0.0, c);
    const PiecewiseEigenfunction psi_eps = eigenfunction(eps, c);
    const double dp = std::abs(psi_eps.value(eps) - psi0.value(eps));
    const double dm = std::abs(psi_eps.value(-eps) - psi0.value(-eps));
    return std::max(dp, dm);
}

} // namespace deltashell::onedim

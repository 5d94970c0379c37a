#include "deltashell/onedim/onedim.hpp"

#include "deltashell/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace deltashell::onedim;
using deltashell::Coupling;

namespace {
const Coupling kEqual{{-1.0, 0.0}, {-1.0, 0.0}};
const Coupling kSkew{{-1.0, 0.0}, {-3.0, 0.0}};
const Coupling kComplex{{-1.0, 0.5}, {-2.0, 0.0}};
} // namespace

TEST_CASE("limit_eigenvalue substitutions") {
    CHECK(std::abs(limit_eigenvalue(kEqual) - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(limit_eigenvalue(kSkew) - Complex(-4.0, 0.0)) < 1e-15);
    CHECK(std::abs(limit_eigenvalue(kComplex) - Complex(-2.1875, 0.75)) < 1e-14);
    CHECK_THROWS_AS(limit_eigenvalue(Coupling{{1.0, 0.0}, {0.5, 0.0}}), deltashell::SolverError);
}

TEST_CASE("secular_residual closed-form points") {
    // eps = 0 factorisation root at kappa = -(a+ + a-)/2
    CHECK(std::abs(secular_residual(-0.5 * kSkew.sum(), 0.0, kSkew)) < 1e-14);
    // kappa = 0 is always a root
    CHECK(std::abs(secular_residual({0.0, 0.0}, 0.37, kSkew)) < 1e-14);
    // equal couplings at kappa = 1, eps = 0.1: 1 - e^{-0.4}
    const Complex r = secular_residual({1.0, 0.0}, 0.1, kEqual);
    CHECK(std::abs(r - (1.0 - std::exp(-0.4))) < 1e-15);
    CHECK(std::abs(r.real() - 0.329680) < 1e-6);
}

TEST_CASE("solve_kappa agrees with the real bisection oracle") {
    const auto g = [](double k) { return (2.0 * k - 1.0) * (2.0 * k - 1.0) - std::exp(-0.2 * k); };
    const double k_ref = oracles::bisect(g, 0.5, 1.5, 1e-14);
    const Complex k = solve_kappa(0.05, kEqual);
    CHECK(std::abs(k - k_ref) < 1e-11);
    CHECK(std::abs(secular_residual(k, 0.05, kEqual)) <= 1e-12);
}

TEST_CASE("solve_kappa limit and complex-coupling residual certification") {
    // kappa -> kappa_0 = 2 as eps -> 0 for (-1, -3)
    double prev_gap = 1.0;
    for (double e : {1e-2, 1e-3, 1e-4}) {
        const double gap = std::abs(solve_kappa(e, kSkew) - Complex(2.0, 0.0));
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);

    const Complex kc = solve_kappa(0.01, kComplex);
    CHECK(std::abs(secular_residual(kc, 0.01, kComplex)) <= 1e-12);
    CHECK(kc.real() > 0.0);
}

TEST_CASE("secular residual of the solved root is small for all admissible couplings (property)") {
    for (const Coupling& c : {kEqual, kSkew, kComplex, Coupling{{-0.5, -0.3}, {-1.5, 0.2}}}) {
        for (double e : {1e-2, 3e-3, 1e-3}) {
            const Complex k = solve_kappa(e, c);
            CHECK(std::abs(secular_residual(k, e, c)) <= 1e-12);
        }
    }
}

TEST_CASE("eigenvalue expansion against the closed-form coefficients") {
    CHECK(std::abs(eigenvalue(0.0, kEqual) - Complex(-1.0, 0.0)) < 1e-15);

    // lambda = -1 + 2 eps + O(eps^2): the remainder must shrink quadratically
    for (double e : {1e-3, 5e-4}) {
        const Complex rem = eigenvalue(e, kEqual) - (-1.0 + 2.0 * e);
        CHECK(std::abs(rem) < 6.0 * e * e);
    }
    for (double e : {1e-3, 5e-4}) {
        const Complex rem = eigenvalue(e, kSkew) - (-4.0 + 12.0 * e);
        CHECK(std::abs(rem) < 60.0 * e * e);
    }
}

TEST_CASE("swap symmetry of the eigenvalue") {
    const Coupling swapped{kSkew.alpha_minus, kSkew.alpha_plus};
    for (double e : {1e-2, 2.5e-3}) {
        CHECK(std::abs(eigenvalue(e, kSkew) - eigenvalue(e, swapped)) < 1e-12);
    }
    const Coupling cswap{kComplex.alpha_minus, kComplex.alpha_plus};
    CHECK(std::abs(eigenvalue(1e-3, kComplex) - eigenvalue(1e-3, cswap)) < 1e-12);
}

TEST_CASE("eigenfunction satisfies continuity and both jump conditions") {
    for (const Coupling& c : {kEqual, kSkew, kComplex}) {
        for (double e : {0.07, 0.01}) {
            const PiecewiseEigenfunction f = eigenfunction(e, c);
            const Complex k = f.kappa();

            // independent pointwise evaluation of the raw pieces
            const auto left = [&](double x) { return std::exp(k * x); };
            const auto mid = [&](double x) {
                return f.c1() * std::exp(-k * x) + f.c2() * std::exp(k * x);
            };
            const auto right = [&](double x) { return f.c3() * std::exp(-k * x); };

            CHECK(std::abs(left(-e) - mid(-e)) <= 1e-10 * std::abs(left(-e)));
            CHECK(std::abs(mid(e) - right(e)) <= 1e-10 * std::abs(right(e)));

            const Complex dmid_m = k * (-f.c1() * std::exp(k * e) + f.c2() * std::exp(-k * e));
            const Complex dleft = k * std::exp(-k * e);
            CHECK(std::abs((dmid_m - dleft) - c.alpha_minus * left(-e)) <=
                  1e-10 * std::abs(left(-e)));

            const Complex dright = -k * f.c3() * std::exp(-k * e);
            const Complex dmid_p = k * (-f.c1() * std::exp(-k * e) + f.c2() * std::exp(k * e));
            CHECK(std::abs((dright - dmid_p) - c.alpha_plus * right(e)) <=
                  1e-10 * std::abs(right(e)));
        }
    }
}

TEST_CASE("eigenfunction constants: c3 matches the printed form, c1 its eps -> 0 limit") {
    const PiecewiseEigenfunction f = eigenfunction(0.1, kEqual);
    const Complex k = f.kappa();
    const Complex am = kEqual.alpha_minus;
    const Complex e2 = std::exp(2.0 * k * 0.1), em2 = std::exp(-2.0 * k * 0.1);
    CHECK(std::abs(f.c3() - (e2 + am / (2.0 * k) * (e2 - em2))) < 1e-13);
    CHECK(std::abs(f.c2() - (am + 2.0 * k) / (2.0 * k)) < 1e-14);
    // continuity forces c1 = -alpha_- e^{-2 kappa eps} / (2 kappa); the
    // eps -> 0 limit recovers -alpha_-/(2 kappa)
    CHECK(std::abs(f.c1() - (-am * em2 / (2.0 * k))) < 1e-14);
    const PiecewiseEigenfunction f0 = eigenfunction(1e-8, kEqual);
    CHECK(std::abs(f0.c1() - (-am / (2.0 * f0.kappa()))) < 1e-7);

    // c3 -> 1 linearly in eps
    CHECK(std::abs(f0.c3() - 1.0) < 1e-7);
    CHECK(std::abs(eigenfunction(0.01, kSkew).c3() - 1.0) < 0.1);
}

TEST_CASE("limit eigenfunction is the symmetric exponential") {
    const Coupling c{{-2.0, 0.0}, {-2.0, 0.0}};
    const PiecewiseEigenfunction f = eigenfunction(0.0, c);
    // psi0 propto e^{-2|x|}, normalised so int psi^2 = 1: psi0 = sqrt(2) e^{-2|x|}
    for (double x : {-1.0, -0.2, 0.0, 0.4, 2.0}) {
        const double want = std::sqrt(2.0) * std::exp(-2.0 * std::abs(x));
        CHECK(std::abs(f.value(x) - want) < 1e-12);
    }
    CHECK(std::abs(f.normalization() - Complex(0.5, 0.0)) < 1e-14);
}

TEST_CASE("eigenfunction normalisation integrates to one (quadrature oracle)") {
    const PiecewiseEigenfunction f = eigenfunction(0.03, kSkew);
    const auto sq = [&](double x) {
        const Complex v = f.value(x);
        return (v * v).real();
    };
    const double total = oracles::integrate(sq, -12.0, 12.0, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("first_order_coefficient: both routes agree") {
    CHECK(std::abs(first_order_coefficient(kEqual) - Complex(2.0, 0.0)) < 1e-12);
    CHECK(std::abs(first_order_coefficient(kSkew) - Complex(12.0, 0.0)) < 1e-12);
    // complex case: -(a+ + a-) a+ a- computed by both internal forms
    const Complex want = -kComplex.sum() * kComplex.product();
    CHECK(std::abs(first_order_coefficient(kComplex) - want) < 1e-12);
    CHECK(std::abs(want - Complex(5.5, -4.0)) < 1e-14);
}

TEST_CASE("correction decomposition tracks the projected-out energy") {
    // equal couplings: psi0^2(0) = 1, so omega_energy / eps -> a+^2 + a-^2 = 2
    for (double e : {1e-3, 5e-4, 2.5e-4}) {
        const auto dec = correction_decomposition(e, kEqual);
        CHECK(std::abs(dec.omega_energy / e - 2.0) < 12.0 * e);
        CHECK(dec.projector_norm < 10.0 * e);
    }

    // (-1, -3): the energy carries the trace weight psi0^2(0) = kappa_0 = 2,
    // so the limit is (a+^2 + a-^2) psi0^2(0) = 20
    for (double e : {1e-3, 2.5e-4}) {
        const auto dec = correction_decomposition(e, kSkew);
        CHECK(std::abs(dec.omega_energy / e - 20.0) < 300.0 * e);
    }

    // form difference: (h_eps - h_0)(psi0) -> eps [a+ {psi0^2}'(0+) - a- {psi0^2}'(0-)]
    // with {psi0^2}'(0+-) = -+2 kappa_0^2 psi0^2(0)... evaluated for (-1,-1):
    // a+ (-2) - a- (+2) = 4
    for (double e : {1e-3, 2.5e-4}) {
        const auto dec = correction_decomposition(e, kEqual);
        CHECK(std::abs(dec.form_difference / e - 4.0) < 20.0 * e);
    }
}

TEST_CASE("uniform difference decays linearly") {
    CHECK(uniform_difference(0.0, kSkew) == 0.0);
    const double d1 = uniform_difference(1e-2, kSkew);
    const double d2 = uniform_difference(5e-3, kSkew);
    const double d4 = uniform_difference(2.5e-3, kSkew);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.08));
    CHECK(d2 / d4 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(uniform_difference(1e-2, kEqual) < 0.1);
    CHECK(uniform_difference(1e-2, kEqual) > 0.0);
}

TEST_CASE("basin guard rejects overlarge eps") {
    CHECK_THROWS_AS(solve_kappa(0.5, kSkew), deltashell::SolverError);
}

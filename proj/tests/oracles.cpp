#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {
using CL = std::complex<long double>;
constexpr long double kPi = 3.14159265358979323846264338327950288L;
} // namespace

Complex bessel_i_series(double nu, Complex z) {
    const CL zl(z.real(), z.imag());
    const CL q = 0.25L * zl * zl;
    CL term = std::exp(-std::lgammal(static_cast<long double>(nu) + 1.0L));
    CL sum = term;
    for (int k = 1; k < 600; ++k) {
        term *= q / (static_cast<long double>(k) * (static_cast<long double>(nu) + k));
        sum += term;
        if (std::abs(term) < 1e-25L * std::abs(sum) && k > 6) break;
    }
    const CL val = std::exp(static_cast<long double>(nu) * std::log(0.5L * zl)) * sum;
    return {static_cast<double>(val.real()), static_cast<double>(val.imag())};
}

namespace {

CL k_order_integral(int n, CL z) {
    // t = v^2 substitution: integral becomes 2 int_0^inf e^{-v^2} v^{2 nu}
    // (1 + v^2/(2z))^{nu - 1/2} dv with nu = n + 1/2 - 1/2 ... done directly
    // for nu = n: weight v^{2n} e^{-v^2}.
    const long double h = 0.002L;
    const long double vmax = 9.5L;
    CL acc(0.0L, 0.0L);
    const long double nu = static_cast<long double>(n);
    for (long double v = 0.5L * h; v < vmax; v += h) {
        const long double t = v * v;
        const CL base = 1.0L + t / (2.0L * z);
        const CL pw = std::exp((nu - 0.5L) * std::log(base));
        acc += std::exp(-t) * std::pow(v, 2.0L * nu) * pw * 2.0L * h;
    }
    const CL pref = std::sqrt(kPi / (2.0L * z)) * std::exp(-z) /
                    std::exp(std::lgammal(nu + 0.5L));
    return pref * acc;
}

} // namespace

Complex bessel_k_integral(int n, Complex z) {
    const CL zl(z.real(), z.imag());
    CL k0 = k_order_integral(0, zl);
    if (n == 0) return {static_cast<double>(k0.real()), static_cast<double>(k0.imag())};
    CL k1 = k_order_integral(1, zl);
    for (int m = 1; m < n; ++m) {
        const CL next = k0 + (2.0L * m / zl) * k1;
        k0 = k1;
        k1 = next;
    }
    return {static_cast<double>(k1.real()), static_cast<double>(k1.imag())};
}

double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::runtime_error("bisect: no sign change");
    for (int i = 0; i < 400 && (b - a) > tol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

double ellipse_perimeter(double a, double b) {
    if (b > a) std::swap(a, b);
    const long double m = 1.0L - static_cast<long double>(b) * b / (static_cast<long double>(a) * a);
    long double an = 1.0L, bn = std::sqrt(1.0L - m), cn = std::sqrt(m);
    long double sum = 0.5L * cn * cn;
    long double pow2 = 1.0L;
    for (int i = 0; i < 60 && cn > 1e-20L; ++i) {
        const long double a_next = 0.5L * (an + bn);
        const long double b_next = std::sqrt(an * bn);
        cn = 0.5L * (an - bn);
        an = a_next;
        bn = b_next;
        pow2 *= 2.0L;
        sum += pow2 * 0.5L * cn * cn;
    }
    const long double big_k = kPi / (2.0L * an);
    const long double big_e = big_k * (1.0L - sum);
    return static_cast<double>(4.0L * a * big_e);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace oracles

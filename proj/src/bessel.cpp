#include "deltashell/numerics/bessel.hpp"

#include "deltashell/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace deltashell::numerics {

namespace {

using CL = std::complex<long double>;

constexpr long double kPi = 3.14159265358979323846264338327950288L;
constexpr long double kEulerGamma = 0.57721566490153286060651209008240243L;
constexpr double kOverflowBound = 600.0;
constexpr double kSeriesRadius = 17.0; // large-argument expansions take over beyond this

enum class OrderKind { Integer, HalfInteger };

OrderKind classify_order(double order) {
    if (!(order >= 0.0)) throw DomainError("bessel: order must be >= 0");
    const double doubled = 2.0 * order;
    const long long n2 = std::llround(doubled);
    if (std::abs(doubled - static_cast<double>(n2)) > 1e-12 || n2 < 0)
        throw DomainError("bessel: order must be integer or half-integer");
    return (n2 % 2 == 0) ? OrderKind::Integer : OrderKind::HalfInteger;
}

void check_argument(Complex z) {
    if (!(z.real() > 0.0)) throw DomainError("bessel: Re z must be positive");
    if (std::abs(z) > kOverflowBound)
        throw RangeError("bessel: |z| exceeds the overflow bound");
}

long double harmonic(int k) {
    long double h = 0.0L;
    for (int j = 1; j <= k; ++j) h += 1.0L / j;
    return h;
}

// Ascending series I_nu(z) = (z/2)^nu sum_k (z^2/4)^k / (k! Gamma(nu+k+1)),
// accumulated in long double; partial cancellation for oscillatory z is
// bounded by e^{|z|-Re z}, small on the supported strip.
CL series_i(long double order, CL z) {
    const CL q = 0.25L * z * z;
    CL term = std::exp(-std::lgammal(order + 1.0L));
    CL sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<long double>(k) * (order + k));
        sum += term;
        if (std::abs(term) < 1e-24L * std::abs(sum) && k > 4) break;
    }
    return std::exp(order * std::log(0.5L * z)) * sum;
}

// a_k(nu) coefficients of the large-argument expansions.
std::vector<CL> asymptotic_coeffs(long double order, int count) {
    std::vector<CL> a(count);
    a[0] = 1.0L;
    const long double mu = 4.0L * order * order;
    for (int k = 1; k < count; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        a[k] = a[k - 1] * (mu - odd * odd) / (8.0L * k);
    }
    return a;
}

CL asymptotic_i(long double order, CL z) {
    const auto a = asymptotic_coeffs(order, 40);
    CL s_grow = 0.0L, s_decay = 0.0L;
    CL zk = 1.0L;
    long double prev = 1e400L;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const CL term = a[k] / zk;
        if (std::abs(term) > prev) break; // past optimal truncation
        prev = std::abs(term);
        s_grow += (k % 2 == 0 ? term : -term);
        s_decay += term;
        zk *= z;
    }
    const CL pref = 1.0L / std::sqrt(2.0L * kPi * z);
    // Reflected exponential with the half-plane-dependent phase; negligible
    // on the real axis but kept for small Re z.
    const long double sign = (z.imag() >= 0.0L) ? 1.0L : -1.0L;
    const CL phase = std::exp(CL(0.0L, sign * kPi * (order + 0.5L)));
    return pref * (std::exp(z) * s_grow + phase * std::exp(-z) * s_decay);
}

CL asymptotic_k(long double order, CL z) {
    const auto a = asymptotic_coeffs(order, 40);
    CL sum = 0.0L, zk = 1.0L;
    long double prev = 1e400L;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const CL term = a[k] / zk;
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        sum += term;
        zk *= z;
    }
    return std::sqrt(kPi / (2.0L * z)) * std::exp(-z) * sum;
}

// K0 and K1 by the logarithmic ascending series.
void series_k01(CL z, CL& k0, CL& k1) {
    const CL lg = std::log(0.5L * z);
    const CL q = 0.25L * z * z;

    CL term = 1.0L, i0 = 1.0L, s0 = 0.0L;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        i0 += term;
        s0 += term * harmonic(k);
        if (std::abs(term) < 1e-26L * std::abs(i0) && k > 4) break;
    }
    k0 = -(lg + kEulerGamma) * i0 + s0;

    // I1 and the psi-weighted companion series for K1.
    CL t1 = 0.5L * z, i1 = t1, s1 = 0.0L;
    // sum_k [psi(k+1)+psi(k+2)] (z^2/4)^k / (k! (k+1)!)
    CL u = 1.0L;
    s1 = (-2.0L * kEulerGamma + 1.0L) * u; // k=0: psi(1)+psi(2) = -2g+1
    for (int k = 1; k < 400; ++k) {
        t1 *= q / (static_cast<long double>(k) * (k + 1));
        i1 += t1;
        u *= q / (static_cast<long double>(k) * (k + 1));
        const long double psis = -2.0L * kEulerGamma + harmonic(k) + harmonic(k + 1);
        s1 += psis * u;
        if (std::abs(t1) < 1e-26L * std::abs(i1) && k > 4) break;
    }
    k1 = 1.0L / z + lg * i1 - 0.25L * z * s1;
}

// Thompson-Barnett continued fraction for K_0, K_1; valid in the right
// half-plane away from the imaginary axis.
bool cf2_k01(CL z, CL& k0, CL& k1) {
    const long double eps = 1e-18L;
    const int max_iter = 40000;
    CL b = 2.0L * (1.0L + z);
    CL d = 1.0L / b;
    CL h = d, delh = d;
    CL q1 = 0.0L, q2 = 1.0L;
    const long double a1 = 0.25L; // 1/4 - mu^2 with mu = 0
    CL q = a1, c = a1;
    long double a = -a1;
    CL s = 1.0L + q * delh;
    bool converged = false;
    for (int i = 2; i <= max_iter; ++i) {
        a -= 2.0L * (i - 1);
        c = -a * c / static_cast<long double>(i);
        const CL qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0L;
        d = 1.0L / (b + a * d);
        delh = (b * d - 1.0L) * delh;
        h += delh;
        const CL dels = q * delh;
        s += dels;
        if (std::abs(dels) <= eps * std::abs(s)) {
            converged = true;
            break;
        }
    }
    if (!converged) return false;
    h = a1 * h;
    k0 = std::sqrt(kPi / (2.0L * z)) * std::exp(-z) / s;
    k1 = k0 * (z + 0.5L - h) / z;
    return true;
}

void eval_k01(CL z, CL& k0, CL& k1) {
    const long double az = std::abs(z);
    if (az <= 2.0L) {
        series_k01(z, k0, k1);
        return;
    }
    if (z.real() >= 0.25L * az || az > 9.0L) {
        if (cf2_k01(z, k0, k1)) return;
        if (az >= 15.0L) {
            k0 = asymptotic_k(0.0L, z);
            k1 = asymptotic_k(1.0L, z);
            return;
        }
    }
    if (az <= 9.0L) {
        series_k01(z, k0, k1);
        return;
    }
    throw RangeError("bessel_k: argument outside the supported accuracy region");
}

CL integer_k(int n, CL z) {
    CL k0, k1;
    eval_k01(z, k0, k1);
    if (n == 0) return k0;
    if (n == 1) return k1;
    CL prev = k0, cur = k1;
    for (int m = 1; m < n; ++m) {
        const CL next = prev + (2.0L * m / z) * cur;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Downward Miller recurrence for integer-order I, normalised against the
// ascending-series I0.
CL integer_i_miller(int n, CL z) {
    const int start = n + 22 + static_cast<int>(1.2 * std::abs(std::complex<double>(z)));
    CL p_up = 0.0L, p_cur = 1e-280L;
    CL at_n = 0.0L, at_0 = 0.0L;
    for (int k = start; k >= 1; --k) {
        const CL p_down = p_up + (2.0L * k / z) * p_cur;
        p_up = p_cur;
        p_cur = p_down;
        if (k - 1 == n) at_n = p_cur;
        if (std::abs(p_cur) > 1e260L) { // rescale to dodge overflow
            p_cur *= 1e-260L;
            p_up *= 1e-260L;
            at_n *= 1e-260L;
        }
    }
    at_0 = p_cur;
    return series_i(0.0L, z) * at_n / at_0;
}

CL integer_i(int n, CL z) {
    if (std::abs(z) > kSeriesRadius) return asymptotic_i(static_cast<long double>(n), z);
    if (n == 0) return series_i(0.0L, z);
    if (n == 1) return series_i(1.0L, z);
    return integer_i_miller(n, z);
}

// Half-integer orders. n2 = 2*nu is odd; nu may be -1/2 internally.
CL half_integer_i(int n2, CL z) {
    const long double nu = 0.5L * n2;
    if (std::abs(z) <= kSeriesRadius) return series_i(nu, z);
    const CL pref = std::sqrt(2.0L / (kPi * z));
    CL lower = pref * std::cosh(z); // I_{-1/2}
    CL cur = pref * std::sinh(z);   // I_{+1/2}
    if (n2 == -1) return lower;
    long double m = 0.5L;
    for (int k = 1; k < (n2 + 1) / 2 + 1 && 2 * m < n2; ++k) {
        const CL next = lower - (2.0L * m / z) * cur;
        lower = cur;
        cur = next;
        m += 1.0L;
    }
    return cur;
}

CL half_integer_k(int n2, CL z) {
    const int n = (std::abs(n2) - 1) / 2; // K_{-nu} = K_nu
    CL sum = 0.0L;
    long double coeff = 1.0L; // (n+k)! / (k! (n-k)!)
    CL zpow = 1.0L;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            coeff *= static_cast<long double>((n + k) * (n - k + 1)) / (2.0L * k);
            zpow *= z;
        }
        sum += coeff / zpow;
    }
    // coeff update above folds the 2^k of (2z)^k into the factorial ratio
    return std::sqrt(kPi / (2.0L * z)) * std::exp(-z) * sum;
}

CL eval_i(double order, CL z) {
    const long long n2 = std::llround(2.0 * order);
    if (n2 % 2 == 0) return integer_i(static_cast<int>(n2 / 2), z);
    return half_integer_i(static_cast<int>(n2), z);
}

CL eval_k(double order, CL z) {
    const long long n2 = std::llround(2.0 * order);
    if (n2 % 2 == 0) return integer_k(static_cast<int>(n2 / 2), z);
    return half_integer_k(static_cast<int>(n2), z);
}

Complex to_double(CL v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

} // namespace

double bessel_overflow_bound() { return kOverflowBound; }

Complex bessel_i(double order, Complex z) {
    classify_order(order);
    check_argument(z);
    return to_double(eval_i(order, CL(z.real(), z.imag())));
}

Complex bessel_k(double order, Complex z) {
    classify_order(order);
    check_argument(z);
    if (std::abs(z) < 1e-12)
        throw RangeError("bessel_k: argument below the small-|z| cutoff");
    return to_double(eval_k(order, CL(z.real(), z.imag())));
}

Complex bessel_i_prime(double order, Complex z) {
    classify_order(order);
    check_argument(z);
    const CL zl(z.real(), z.imag());
    const long long n2 = std::llround(2.0 * order);
    if (n2 == 0) return to_double(eval_i(1.0, zl));
    CL lower;
    if (n2 % 2 == 0) {
        lower = integer_i(static_cast<int>(n2 / 2) - 1, zl);
    } else {
        lower = half_integer_i(static_cast<int>(n2) - 2, zl);
    }
    const CL upper = eval_i(order + 1.0, zl);
    return to_double(0.5L * (lower + upper));
}

Complex bessel_k_prime(double order, Complex z) {
    classify_order(order);
    check_argument(z);
    if (std::abs(z) < 1e-12)
        throw RangeError("bessel_k: argument below the small-|z| cutoff");
    const CL zl(z.real(), z.imag());
    const long long n2 = std::llround(2.0 * order);
    CL lower;
    if (n2 == 0) {
        lower = integer_k(1, zl);
        return to_double(-lower);
    }
    if (n2 % 2 == 0) {
        lower = integer_k(static_cast<int>(n2 / 2) - 1, zl);
    } else {
        lower = half_integer_k(static_cast<int>(n2) - 2, zl);
    }
    const CL upper = eval_k(order + 1.0, zl);
    return to_double(-0.5L * (lower + upper));
}

} // namespace deltashell::numerics

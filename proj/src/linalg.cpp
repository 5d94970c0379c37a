#include "deltashell/numerics/linalg.hpp"

#include "deltashell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deltashell::numerics {

namespace {

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

void scale(std::vector<Complex>& v, double f) {
    for (auto& x : v) x *= f;
}

// fixed scrambled start vector for the iterative singular-value estimates
std::vector<Complex> seed_vector(std::size_t n) {
    std::vector<Complex> v(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double a = static_cast<double>((state >> 11) & 0x3fffff) / double(0x3fffff) - 0.5;
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double b = static_cast<double>((state >> 11) & 0x3fffff) / double(0x3fffff) - 0.5;
        v[i] = Complex(1.0 + a, b);
    }
    return v;
}

} // namespace

double Matrix::max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            const Complex* brow = b.row(k);
            Complex* crow = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

std::vector<Complex> mat_vec(const Matrix& a, const std::vector<Complex>& x) {
    std::vector<Complex> y(a.rows(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const Complex* arow = a.row(i);
        Complex s(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) s += arow[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<Complex> mat_vec_adjoint(const Matrix& a, const std::vector<Complex>& x) {
    std::vector<Complex> y(a.cols(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const Complex* arow = a.row(i);
        const Complex xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += std::conj(arow[j]) * xi;
    }
    return y;
}

LuDecomposition::LuDecomposition(Matrix a, double rank_floor_factor) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols()) throw DomainError("LU: matrix must be square");
    const std::size_t n = lu_.rows();
    pivots_.resize(n);
    const double scale = std::max(lu_.max_abs(), 1e-300);
    const double singular_floor = rank_floor_factor * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        pivots_[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            parity_ = -parity_;
        }
        if (best <= singular_floor) {
            if (rank_floor_factor > 0.0) {
                singular_ = true;
                continue;
            }
            // substituted pivot keeps the factorisation usable for inverse
            // iteration against a numerically singular matrix
            lu_(k, k) = std::numeric_limits<double>::epsilon() * scale;
        }
        const Complex inv_piv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu_(i, k) * inv_piv;
            lu_(i, k) = f;
            if (f == Complex(0.0, 0.0)) continue;
            const Complex* krow = lu_.row(k);
            Complex* irow = lu_.row(i);
            for (std::size_t j = k + 1; j < n; ++j) irow[j] -= f * krow[j];
        }
    }
}

Complex LuDecomposition::log_det() const {
    if (singular_) throw RangeError("LU: log_det of a singular matrix");
    Complex s(0.0, 0.0);
    for (std::size_t k = 0; k < lu_.rows(); ++k) s += std::log(lu_(k, k));
    if (parity_ < 0) s += Complex(0.0, 3.14159265358979323846);
    return s;
}

std::vector<Complex> LuDecomposition::solve(std::vector<Complex> b) const {
    if (singular_) throw RangeError("LU: solve with a singular matrix");
    const std::size_t n = lu_.rows();
    for (std::size_t k = 0; k < n; ++k)
        if (pivots_[k] != k) std::swap(b[k], b[pivots_[k]]);
    for (std::size_t i = 1; i < n; ++i) {
        Complex s = b[i];
        const Complex* irow = lu_.row(i);
        for (std::size_t j = 0; j < i; ++j) s -= irow[j] * b[j];
        b[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        Complex s = b[ii];
        const Complex* irow = lu_.row(ii);
        for (std::size_t j = ii + 1; j < n; ++j) s -= irow[j] * b[j];
        b[ii] = s / irow[ii];
    }
    return b;
}

std::vector<Complex> LuDecomposition::solve_adjoint(std::vector<Complex> b) const {
    if (singular_) throw RangeError("LU: solve with a singular matrix");
    const std::size_t n = lu_.rows();
    // A^H = U^H L^H P with P the accumulated row swaps: forward substitution
    // with U^H, back substitution with unit-diagonal L^H, then undo the swaps.
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= std::conj(lu_(j, i)) * b[j];
        b[i] = s / std::conj(lu_(i, i));
    }
    for (std::size_t ii = n; ii-- > 0;) {
        Complex s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(lu_(j, ii)) * b[j];
        b[ii] = s;
    }
    for (std::size_t kk = n; kk-- > 0;)
        if (pivots_[kk] != kk) std::swap(b[kk], b[pivots_[kk]]);
    return b;
}

namespace {

struct InverseIterationResult {
    double sigma_min;
    std::vector<Complex> vec;
};

InverseIterationResult inverse_iteration(const Matrix& m, const LuDecomposition& lu) {
    std::vector<Complex> v = seed_vector(m.rows());
    scale(v, 1.0 / norm2(v));
    double mu_prev = 0.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<Complex> u = lu.solve_adjoint(v);
        std::vector<Complex> w = lu.solve(std::move(u));
        const double mu = norm2(w); // -> 1/sigma_min^2
        scale(w, 1.0 / mu);
        v = std::move(w);
        if (it > 2 && std::abs(mu - mu_prev) <= 1e-11 * mu) {
            mu_prev = mu;
            break;
        }
        mu_prev = mu;
    }
    return {1.0 / std::sqrt(mu_prev), std::move(v)};
}

} // namespace

SingularEstimate smallest_singular(const Matrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) throw DomainError("smallest_singular: square matrix required");
    LuDecomposition lu(m);
    if (lu.singular()) return {0.0, true};
    return {inverse_iteration(m, lu).sigma_min, false};
}

std::vector<Complex> smallest_singular_vector(const Matrix& m) {
    LuDecomposition lu(m, 0.0);
    return inverse_iteration(m, lu).vec;
}

std::pair<std::vector<Complex>, std::vector<Complex>> smallest_singular_pair(const Matrix& m) {
    LuDecomposition lu(m, 0.0);
    auto first = inverse_iteration(m, lu).vec;
    // deflated second vector: iterate in the orthogonal complement of the first
    std::vector<Complex> v = seed_vector(m.rows());
    for (int it = 0; it < 500; ++it) {
        Complex proj(0.0, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) proj += std::conj(first[i]) * v[i];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * first[i];
        scale(v, 1.0 / norm2(v));
        std::vector<Complex> u = lu.solve_adjoint(v);
        std::vector<Complex> w = lu.solve(std::move(u));
        const double mu = norm2(w);
        scale(w, 1.0 / mu);
        const double drift = [&] {
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(w[i] - v[i]);
            return std::sqrt(s);
        }();
        v = std::move(w);
        if (it > 3 && drift < 1e-10) break;
    }
    Complex proj(0.0, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) proj += std::conj(first[i]) * v[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * first[i];
    scale(v, 1.0 / norm2(v));
    return {std::move(first), std::move(v)};
}

double largest_singular(const Matrix& m) {
    std::vector<Complex> v = seed_vector(m.cols());
    scale(v, 1.0 / norm2(v));
    double s_prev = 0.0;
    for (int it = 0; it < 300; ++it) {
        std::vector<Complex> w = mat_vec_adjoint(m, mat_vec(m, v));
        const double s = norm2(w);
        scale(w, 1.0 / s);
        v = std::move(w);
        if (it > 2 && std::abs(s - s_prev) <= 1e-9 * s) return std::sqrt(s);
        s_prev = s;
    }
    return std::sqrt(s_prev);
}

std::vector<Complex> durand_kerner(const std::vector<Complex>& monic_tail) {
    const std::size_t n = monic_tail.size();
    auto eval = [&](Complex z) {
        Complex p(1.0, 0.0);
        for (const auto& c : monic_tail) p = p * z + c;
        return p;
    };
    double radius = 0.0;
    for (const auto& c : monic_tail) radius = std::max(radius, std::abs(c));
    radius = 1.0 + radius;

    std::vector<Complex> z(n);
    const Complex g(0.4, 0.9);
    Complex gk(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        gk *= g;
        z[i] = radius * gk;
    }

    double last_step = 0.0;
    for (int it = 0; it < 1000; ++it) {
        double step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (denom == Complex(0.0, 0.0)) {
                z[i] += Complex(1e-8 * radius, 1e-8 * radius);
                continue;
            }
            const Complex dz = eval(z[i]) / denom;
            z[i] -= dz;
            step = std::max(step, std::abs(dz));
        }
        last_step = step;
        if (step < 1e-14 * radius) return z;
    }
    double resid = 0.0;
    for (const auto& zi : z) resid = std::max(resid, std::abs(eval(zi)));
    if (resid > 1e-8 * radius)
        throw NoConvergenceError("durand_kerner: no convergence", z.empty() ? Complex(0, 0) : z[0],
                                 std::max(resid, last_step));
    return z;
}

std::vector<Complex> eigenvalues_small(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("eigenvalues_small: square matrix required");
    const std::size_t k = m.rows();
    if (k > 16) throw DomainError("eigenvalues_small: k must be <= 16");

    std::vector<Complex> ev;
    if (k == 1) {
        ev = {m(0, 0)};
    } else if (k == 2) {
        // direct stable quadratic; keeps near-double roots paired to full
        // precision instead of the sqrt(eps) splitting of the generic path
        const Complex half_tr = 0.5 * (m(0, 0) + m(1, 1));
        const Complex half_diff = 0.5 * (m(0, 0) - m(1, 1));
        const Complex disc = std::sqrt(half_diff * half_diff + m(0, 1) * m(1, 0));
        ev = {half_tr + disc, half_tr - disc};
    } else {
        const double s = std::max(m.max_abs(), 1e-300);
        Matrix a(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) a(i, j) = m(i, j) / s;

        // Faddeev-LeVerrier: M_1 = A, c_j = -tr(M_j)/j, M_{j+1} = A(M_j + c_j I)
        std::vector<Complex> coeff(k);
        Matrix mj = a;
        for (std::size_t j = 1; j <= k; ++j) {
            Complex tr(0.0, 0.0);
            for (std::size_t i = 0; i < k; ++i) tr += mj(i, i);
            coeff[j - 1] = -tr / static_cast<double>(j);
            if (j == k) break;
            Matrix tmp = mj;
            for (std::size_t i = 0; i < k; ++i) tmp(i, i) += coeff[j - 1];
            mj = mat_mul(a, tmp);
        }
        ev = durand_kerner(coeff);
        for (auto& z : ev) z *= s;
    }
    std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

std::vector<Complex> least_squares(const Matrix& a, const std::vector<Complex>& b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) throw DomainError("least_squares: need rows >= cols");
    if (b.size() != m) throw DomainError("least_squares: rhs size mismatch");
    Matrix r = a;
    std::vector<Complex> rhs = b;

    for (std::size_t k = 0; k < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k; i < m; ++i) xnorm += std::norm(r(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) throw RangeError("least_squares: rank-deficient design matrix");

        const Complex akk = r(k, k);
        const double aa = std::abs(akk);
        const Complex phase = (aa == 0.0) ? Complex(1.0, 0.0) : akk / aa;
        const Complex alpha = -phase * xnorm;

        std::vector<Complex> v(m - k);
        v[0] = akk - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = r(i, k);
        double vnorm2 = 0.0;
        for (const auto& x : v) vnorm2 += std::norm(x);
        if (vnorm2 == 0.0) continue;

        for (std::size_t j = k; j < n; ++j) {
            Complex dot(0.0, 0.0);
            for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * r(i, j);
            const Complex f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) r(i, j) -= f * v[i - k];
        }
        Complex dot(0.0, 0.0);
        for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * rhs[i];
        const Complex f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) rhs[i] -= f * v[i - k];
    }

    std::vector<Complex> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Complex s = rhs[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * x[j];
        x[ii] = s / r(ii, ii);
    }
    return x;
}

} // namespace deltashell::numerics

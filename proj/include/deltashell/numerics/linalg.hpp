#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace deltashell::numerics {

using Complex = std::complex<double>;

/// Dense row-major complex matrix, sized for boundary-integral systems
/// (a few thousand rows at most).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Complex* row(std::size_t i) { return data_.data() + i * cols_; }
    const Complex* row(std::size_t i) const { return data_.data() + i * cols_; }

    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
std::vector<Complex> mat_vec(const Matrix& a, const std::vector<Complex>& x);
std::vector<Complex> mat_vec_adjoint(const Matrix& a, const std::vector<Complex>& x);

/// LU with partial pivoting. Keeps the factorisation for repeated solves and
/// for the log-determinant used in secular-root tracking.
///
/// `rank_floor_factor` controls when a pivot counts as rank deficiency
/// (factor * eps * max|a|). A zero factor keeps factorising with a
/// substituted tiny pivot, which is exactly what inverse iteration against a
/// numerically singular matrix wants.
class LuDecomposition {
public:
    explicit LuDecomposition(Matrix a, double rank_floor_factor = 64.0);

    bool singular() const { return singular_; }

    /// log det A modulo 2*pi*i (sum of principal logs of the pivots plus the
    /// permutation parity); exp of a difference of two of these is exact.
    Complex log_det() const;

    std::vector<Complex> solve(std::vector<Complex> b) const;
    std::vector<Complex> solve_adjoint(std::vector<Complex> b) const;

private:
    Matrix lu_;
    std::vector<std::size_t> pivots_;
    int parity_ = 1;
    bool singular_ = false;
};

struct SingularEstimate {
    double value = 0.0;
    bool exactly_singular = false;
};

/// sigma_min via inverse iteration on M^H M with LU-based solves;
/// rank deficiency detected during factorisation is flagged and reported as 0.
SingularEstimate smallest_singular(const Matrix& m);

/// Right singular vector belonging to sigma_min (the null density at a
/// certified kernel point).
std::vector<Complex> smallest_singular_vector(const Matrix& m);

/// The two right singular vectors with smallest singular values (degenerate
/// null spaces of symmetric problems).
std::pair<std::vector<Complex>, std::vector<Complex>> smallest_singular_pair(const Matrix& m);

/// sigma_max via power iteration on M^H M (modest accuracy, used in
/// certification ratios only).
double largest_singular(const Matrix& m);

/// Eigenvalues of a small (k <= 16) dense matrix with algebraic multiplicity,
/// sorted lexicographically by (Re, Im). Faddeev-LeVerrier characteristic
/// polynomial + Durand-Kerner; k <= 2 handled in closed form.
std::vector<Complex> eigenvalues_small(const Matrix& m);

/// Roots of a monic polynomial z^n + c[0] z^{n-1} + ... + c[n-1] by
/// Durand-Kerner, unsorted.
std::vector<Complex> durand_kerner(const std::vector<Complex>& monic_tail);

/// Least-squares solution of A x ~= b (rows >= cols) via Householder QR.
std::vector<Complex> least_squares(const Matrix& a, const std::vector<Complex>& b);

} // namespace deltashell::numerics

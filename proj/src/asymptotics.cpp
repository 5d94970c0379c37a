#include "deltashell/asymptotics/asymptotics.hpp"

#include "deltashell/errors.hpp"

#include <cmath>

namespace deltashell::asymptotics {

void TraceBundle::validate() const {
    const std::size_t n = psi0.size();
    if (n == 0) throw DomainError("TraceBundle: empty node set");
    if (dn_plus.size() != n || dn_minus.size() != n || K1.size() != n || weight.size() != n)
        throw DomainError("TraceBundle: node arrays are not aligned");
    if (std::abs(norm_sq) == 0.0) throw NormalizationError("TraceBundle: norm_sq = 0");
}

Complex TraceBundle::surface_sum(const std::vector<Complex>& values) const {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) acc += weight[i] * values[i];
    return acc;
}

namespace {

// numerator of the slope formula for the (possibly distinct) pair (u, v):
//   a+ S(dn+(uv)) + a- S(dn-(uv)) - S([a+^2 + a-^2 + (a+ - a-)(d-1) K1] uv)
Complex pair_entry(const TraceBundle& u, const TraceBundle& v, const Coupling& c) {
    const std::size_t n = u.psi0.size();
    const Complex a2 = c.alpha_plus * c.alpha_plus + c.alpha_minus * c.alpha_minus;
    const Complex geom = (c.alpha_plus - c.alpha_minus) * static_cast<double>(u.dimension - 1);
    std::vector<Complex> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex dplus = u.psi0[i] * v.dn_plus[i] + v.psi0[i] * u.dn_plus[i];
        const Complex dminus = u.psi0[i] * v.dn_minus[i] + v.psi0[i] * u.dn_minus[i];
        const Complex uv = u.psi0[i] * v.psi0[i];
        integrand[i] = c.alpha_plus * dplus + c.alpha_minus * dminus - (a2 + geom * u.K1[i]) * uv;
    }
    return u.surface_sum(integrand);
}

void scale_bundle(TraceBundle& b, Complex s) {
    for (auto& v : b.psi0) v *= s;
    for (auto& v : b.dn_plus) v *= s;
    for (auto& v : b.dn_minus) v *= s;
    b.norm_sq *= s * s;
}

void axpy_bundle(TraceBundle& y, Complex a, const TraceBundle& x) {
    for (std::size_t i = 0; i < y.psi0.size(); ++i) {
        y.psi0[i] += a * x.psi0[i];
        y.dn_plus[i] += a * x.dn_plus[i];
        y.dn_minus[i] += a * x.dn_minus[i];
    }
}

} // namespace

Complex slope_simple(const TraceBundle& t, const Coupling& c) {
    t.validate();
    return pair_entry(t, t, c) / t.norm_sq;
}

SlopeMatrixResult slope_matrix(std::vector<TraceBundle> bundles, numerics::Matrix gram,
                               const Coupling& c) {
    const std::size_t k = bundles.size();
    if (k == 0) throw DomainError("slope_matrix: no bundles");
    if (gram.rows() != k || gram.cols() != k) throw DomainError("slope_matrix: Gram size mismatch");
    for (auto& b : bundles) b.validate();

    double dev = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            dev = std::max(dev, std::abs(gram(i, j) - (i == j ? Complex(1, 0) : Complex(0, 0))));

    if (dev > 1e-8) {
        // bilinear Gram-Schmidt: v_i <- (v_i - sum_{j<i} g_ij v_j) / sqrt(self pairing)
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const Complex g = gram(i, j);
                axpy_bundle(bundles[i], -g, bundles[j]);
                for (std::size_t l = 0; l < k; ++l)
                    gram(i, l) -= g * gram(j, l);
                for (std::size_t l = 0; l < k; ++l)
                    gram(l, i) -= g * gram(l, j);
            }
            const Complex self = gram(i, i);
            if (std::abs(self) < 1e-10)
                throw NormalizationError("slope_matrix: self-orthogonal combination in Gram-Schmidt");
            const Complex s = 1.0 / std::sqrt(self);
            scale_bundle(bundles[i], s);
            for (std::size_t l = 0; l < k; ++l) gram(i, l) *= s;
            for (std::size_t l = 0; l < k; ++l) gram(l, i) *= s;
        }
    } else {
        // already biorthonormal to tolerance; normalise exactly anyway
        for (std::size_t i = 0; i < k; ++i) {
            const Complex self = bundles[i].norm_sq;
            if (std::abs(self) < 1e-10)
                throw NormalizationError("slope_matrix: self-orthogonal bundle");
            scale_bundle(bundles[i], 1.0 / std::sqrt(self));
        }
    }

    SlopeMatrixResult out;
    out.S = numerics::Matrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out.S(i, j) = pair_entry(bundles[i], bundles[j], c);
    out.slopes = numerics::eigenvalues_small(out.S);
    return out;
}

} // namespace deltashell::asymptotics

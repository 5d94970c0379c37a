#include "deltashell/numerics/fit.hpp"

#include "deltashell/errors.hpp"
#include "deltashell/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace deltashell::numerics {

namespace {

// Fit in the rescaled variable tau = eps/eps_max so the Vandermonde columns
// are O(1), then undo the scaling on the coefficients.
std::vector<Complex> poly_fit(const std::vector<std::pair<double, Complex>>& pts, int degree) {
    double eps_max = 0.0;
    for (const auto& p : pts) eps_max = std::max(eps_max, std::abs(p.first));
    if (eps_max == 0.0) eps_max = 1.0;

    const std::size_t m = pts.size();
    const std::size_t n = static_cast<std::size_t>(degree) + 1;
    Matrix a(m, n);
    std::vector<Complex> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double tau = pts[i].first / eps_max;
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = p;
            p *= tau;
        }
        b[i] = pts[i].second;
    }
    std::vector<Complex> c = least_squares(a, b);
    double scale = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        c[j] /= scale;
        scale *= eps_max;
    }
    return c;
}

Complex poly_eval(const std::vector<Complex>& c, double eps) {
    Complex v(0.0, 0.0);
    for (std::size_t j = c.size(); j-- > 0;) v = v * eps + c[j];
    return v;
}

} // namespace

FitResult fit_expansion(const std::vector<std::pair<double, Complex>>& points, int degree) {
    if (degree < 0) throw DomainError("fit_expansion: degree must be >= 0");
    if (points.size() < static_cast<std::size_t>(degree) + 2)
        throw DomainError("fit_expansion: need at least degree + 2 points");
    std::set<double> distinct;
    for (const auto& p : points) {
        if (!(p.first > 0.0)) throw DomainError("fit_expansion: eps values must be positive");
        distinct.insert(p.first);
    }
    if (distinct.size() != points.size())
        throw DomainError("fit_expansion: repeated eps values");

    FitResult result;
    result.coefficients = poly_fit(points, degree);

    double r2 = 0.0;
    for (const auto& p : points) r2 += std::norm(p.second - poly_eval(result.coefficients, p.first));
    result.residual_norm = std::sqrt(r2);

    // Remainder order: remove the constant+linear part of a fit rich enough
    // to absorb the quadratic term, then read the log-log slope.
    const int probe_degree = std::max(degree, 2);
    std::vector<Complex> probe = result.coefficients;
    if (probe_degree != degree && points.size() >= static_cast<std::size_t>(probe_degree) + 1)
        probe = poly_fit(points, probe_degree);
    if (probe.size() < 2) probe.resize(2, Complex(0.0, 0.0));

    double y_scale = 0.0;
    for (const auto& p : points) y_scale = std::max(y_scale, std::abs(p.second));
    const double floor = 1e-13 * std::max(y_scale, 1e-300);

    std::vector<std::pair<double, double>> logs;
    for (const auto& p : points) {
        const Complex rem = p.second - (probe[0] + probe[1] * p.first);
        if (std::abs(rem) > floor) logs.emplace_back(std::log(p.first), std::log(std::abs(rem)));
    }
    if (logs.size() < 2) {
        result.order_estimate = std::numeric_limits<double>::infinity();
        return result;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(logs.size());
    result.order_estimate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return result;
}

} // namespace deltashell::numerics

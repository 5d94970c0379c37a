#include "deltashell/numerics/roots.hpp"

#include "deltashell/errors.hpp"

#include <cmath>

namespace deltashell::numerics {

namespace {

Complex muller_step(Complex x0, Complex x1, Complex x2, Complex f0, Complex f1, Complex f2) {
    const Complex d21 = (f1 - f2) / (x1 - x2);
    const Complex d20 = (f0 - f2) / (x0 - x2);
    const Complex d10 = (f0 - f1) / (x0 - x1);
    const Complex w = d21 + d20 - d10;
    const Complex second = (d10 - d21) / (x0 - x2);
    Complex r = std::sqrt(w * w - 4.0 * f2 * second);
    // larger-magnitude denominator picks the nearer quadratic root
    if (std::abs(w - r) > std::abs(w + r)) r = -r;
    const Complex denom = w + r;
    if (denom == Complex(0.0, 0.0)) return x2;
    return x2 - 2.0 * f2 / denom;
}

} // namespace

Complex find_root_complex(const ComplexFunction& f, Complex seed, double tol) {
    RootOptions opts;
    opts.tol = tol;
    return find_root_complex(f, seed, opts);
}

Complex find_root_complex(const ComplexFunction& f, Complex seed, const RootOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("find_root_complex: tol must be positive");

    Complex z = seed;
    Complex fz = f(z);
    double best = std::abs(fz);
    int stall = 0;

    // history for Muller restarts
    Complex hx[3] = {z, z + Complex(1e-4, 0.0), z + Complex(0.0, 1e-4)};
    Complex hf[3] = {fz, f(hx[1]), f(hx[2])};

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (std::abs(fz) <= opts.tol) {
            // converged residual; confirm the step size criterion with one
            // more Newton correction
            const double h = 1e-7 * std::max(1.0, std::abs(z));
            const Complex deriv = (f(z + h) - f(z - h)) / (2.0 * h);
            if (deriv != Complex(0.0, 0.0)) {
                const Complex dz = fz / deriv;
                if (std::abs(dz) <= opts.tol) return z - dz;
            } else {
                return z;
            }
        }

        Complex z_next;
        const double h = 1e-7 * std::max(1.0, std::abs(z));
        const Complex deriv = (f(z + h) - f(z - h)) / (2.0 * h);
        const bool newton_ok = deriv != Complex(0.0, 0.0) && std::isfinite(std::abs(deriv));
        if (newton_ok && stall < 5) {
            z_next = z - fz / deriv;
        } else {
            const bool distinct = hx[0] != hx[1] && hx[1] != hx[2] && hx[0] != hx[2];
            if (distinct) {
                z_next = muller_step(hx[0], hx[1], hx[2], hf[0], hf[1], hf[2]);
            } else if (newton_ok) {
                // damped step off the real line breaks period-two cycles
                z_next = z - 0.5 * fz / deriv + Complex(0.0, std::abs(z - hx[1]) * 0.25 + h);
            } else {
                z_next = z + Complex(h, h);
            }
            if (z_next == z || !std::isfinite(std::abs(z_next))) z_next = z + Complex(h, h);
            stall = 0;
        }

        const Complex f_next = f(z_next);
        hx[0] = hx[1];
        hx[1] = hx[2];
        hx[2] = z_next;
        hf[0] = hf[1];
        hf[1] = hf[2];
        hf[2] = f_next;

        const double step = std::abs(z_next - z);
        z = z_next;
        fz = f_next;

        if (std::abs(fz) < 0.7 * best) {
            best = std::abs(fz);
            stall = 0;
        } else {
            ++stall;
        }

        if (std::abs(fz) <= opts.tol && step <= opts.tol) return z;
    }
    throw NoConvergenceError("find_root_complex: iteration cap exceeded", z, std::abs(fz));
}

} // namespace deltashell::numerics

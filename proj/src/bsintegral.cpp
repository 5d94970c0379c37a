#include "deltashell/bsintegral/bsintegral.hpp"

#include "deltashell/errors.hpp"
#include "deltashell/numerics/bessel.hpp"
#include "deltashell/numerics/roots.hpp"

#include <cmath>
#include <functional>

namespace deltashell::bsintegral {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

using numerics::bessel_i;
using numerics::bessel_k;
using numerics::Matrix;

// 16-point Gauss-Legendre rule on [-1, 1]
constexpr int kGl = 16;
constexpr double kGlX[kGl] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGlW[kGl] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double dist(const geometry::Point& a, const geometry::Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Martensen weights R_d for the log-singular quadrature on an even N grid:
// int ln(4 sin^2((t-s)/2)) f(s) ds ~= sum_j R_{|i-j|} f(s_j).
std::vector<double> kress_weights(int N) {
    std::vector<double> r(N);
    for (int d = 0; d < N; ++d) {
        double acc = 0.0;
        const double td = kTwoPi * d / N;
        for (int m = 1; m < N / 2; ++m) acc += std::cos(m * td) / m;
        r[d] = -(4.0 * kPi / N) * acc - (4.0 * kPi / (N * N)) * std::cos(0.5 * N * td);
    }
    return r;
}

// entire part of K_1: U(z) = K_1(z) - 1/z - ln(z/2) I_1(z)
Complex k1_entire(Complex z) {
    return bessel_k(1.0, z) - 1.0 / z - std::log(0.5 * z) * bessel_i(1.0, z);
}

struct CurveCache {
    NystromGrid grid;
    std::vector<geometry::Point> normals;
    std::vector<double> signed_kappa;
};

CurveCache cache_curve(const ClosedCurve& curve) {
    CurveCache c;
    c.grid = make_grid(curve);
    const int n = c.grid.N;
    c.normals.resize(n);
    c.signed_kappa.resize(n);
    for (int i = 0; i < n; ++i) {
        c.normals[i] = curve.outward_normal(c.grid.params[i]);
        c.signed_kappa[i] = curve.signed_curvature(c.grid.params[i]);
    }
    return c;
}

// ---- self-interaction blocks (log splitting) -------------------------------

// single layer: (1/2pi) K_0(kappa r) |gamma'(s)|
Matrix self_single_layer(const CurveCache& c, Complex kappa) {
    const int n = c.grid.N;
    const double h = kTwoPi / n;
    const auto R = kress_weights(n);
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sp = c.grid.speeds[j];
            if (i == j) {
                const double m1 = -sp / (4.0 * kPi);
                const Complex m2 =
                    sp / kTwoPi * (-kEulerGamma - std::log(0.5 * kappa * c.grid.speeds[i]));
                s(i, j) = R[0] * m1 + h * m2;
                continue;
            }
            const double r = dist(c.grid.nodes[i], c.grid.nodes[j]);
            const double sinfac =
                2.0 * std::abs(std::sin(0.5 * (c.grid.params[i] - c.grid.params[j])));
            const Complex i0 = bessel_i(0.0, kappa * r);
            const Complex m1 = -sp / (4.0 * kPi) * i0;
            const Complex m2 =
                sp / kTwoPi * (bessel_k(0.0, kappa * r) + std::log(sinfac) * i0);
            s(i, j) = R[std::abs(i - j)] * m1 + h * m2;
        }
    }
    return s;
}

// adjoint double layer: (1/2pi) d/dn(x) K_0(kappa |x-y|) |gamma'(s)|
Matrix self_adjoint_double_layer(const CurveCache& c, Complex kappa) {
    const int n = c.grid.N;
    const double h = kTwoPi / n;
    const auto R = kress_weights(n);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sp = c.grid.speeds[j];
            if (i == j) {
                // (n . dx)/r^2 -> -kappa_signed/2 on the diagonal
                a(i, j) = h * sp * c.signed_kappa[i] / (4.0 * kPi);
                continue;
            }
            const double r = dist(c.grid.nodes[i], c.grid.nodes[j]);
            const double ndx = c.normals[i].x * (c.grid.nodes[i].x - c.grid.nodes[j].x) +
                               c.normals[i].y * (c.grid.nodes[i].y - c.grid.nodes[j].y);
            const double sinfac =
                2.0 * std::abs(std::sin(0.5 * (c.grid.params[i] - c.grid.params[j])));
            const double rt = r / sinfac;
            const Complex i1 = bessel_i(1.0, kappa * r);
            const Complex u = k1_entire(kappa * r);
            const Complex m1 = -sp / (4.0 * kPi) * kappa * (ndx / r) * i1;
            const Complex m2 = -sp / kTwoPi *
                               (ndx / (r * r) +
                                kappa * (ndx / r) * (std::log(0.5 * kappa * rt) * i1 + u));
            a(i, j) = R[std::abs(i - j)] * m1 + h * m2;
        }
    }
    return a;
}

// squared-resolvent kernel F(r) = r K_1(kappa r) / (4 pi kappa),
// the x-integral of G_kappa(x,a) G_kappa(x,b); |gamma'(s)| included
Matrix self_norm_kernel(const CurveCache& c, Complex kappa) {
    const int n = c.grid.N;
    const double h = kTwoPi / n;
    const auto R = kress_weights(n);
    const Complex k2 = kappa * kappa;
    Matrix f(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sp = c.grid.speeds[j];
            if (i == j) {
                f(i, j) = h * sp / (4.0 * kPi * k2);
                continue;
            }
            const double r = dist(c.grid.nodes[i], c.grid.nodes[j]);
            const double sinfac =
                2.0 * std::abs(std::sin(0.5 * (c.grid.params[i] - c.grid.params[j])));
            const double rt = r / sinfac;
            const Complex i1 = bessel_i(1.0, kappa * r);
            const Complex u = k1_entire(kappa * r);
            const Complex m1 = sp * r / (8.0 * kPi * kappa) * i1;
            const Complex m2 =
                sp * (1.0 / (4.0 * kPi * k2) +
                      r / (4.0 * kPi * kappa) * (std::log(0.5 * kappa * rt) * i1 + u));
            f(i, j) = R[std::abs(i - j)] * m1 + h * m2;
        }
    }
    return f;
}

// ---- shell-to-shell blocks (graded panels + trigonometric density) --------

// cardinal function of the even-N trigonometric interpolant
double trig_cardinal(int N, double u) {
    const double s = std::sin(0.5 * u);
    if (std::abs(s) < 1e-9) return 1.0;
    return std::sin(0.5 * N * u) / (N * std::tan(0.5 * u));
}

using PointKernel = std::function<Complex(const geometry::Point&, const geometry::Point&)>;

// S_AB[i][j] = int k(x_i, y(tau)) |gamma_B'(tau)| L_j(tau) dtau with panels
// graded towards tau = t_i (the near-approach parameter for parallel shells).
Matrix cross_block(const CurveCache& target, const ClosedCurve& source_curve,
                   const CurveCache& source, const PointKernel& kernel, double min_sep) {
    const int n = target.grid.N;
    Matrix s(n, n);

    double max_speed = 0.0;
    for (double v : source.grid.speeds) max_speed = std::max(max_speed, v);
    const double delta0 = std::max(min_sep / max_speed, 1e-7);

    // fast path: shells far enough apart for the plain periodic trapezoid
    if (static_cast<double>(n) * delta0 >= 40.0) {
        const double h = kTwoPi / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s(i, j) = h * kernel(target.grid.nodes[i], source.grid.nodes[j]) *
                          source.grid.speeds[j];
        return s;
    }

    // graded breakpoints 0 < delta0 < 2 delta0 < ... < pi on both sides
    std::vector<double> breaks{0.0};
    for (double d = delta0; d < kPi; d *= 2.0) breaks.push_back(d);
    breaks.push_back(kPi);

    std::vector<double> taus, wq;
    taus.reserve(2 * kGl * breaks.size());
    wq.reserve(2 * kGl * breaks.size());
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        for (int side = -1; side <= 1; side += 2) {
            const double lo = side * breaks[b], hi = side * breaks[b + 1];
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int q = 0; q < kGl; ++q) {
                taus.push_back(mid + half * kGlX[q]);
                wq.push_back(std::abs(half) * kGlW[q]);
            }
        }
    }

    std::vector<double> speed_at(taus.size());
    std::vector<geometry::Point> pos_at(taus.size());
    // offsets relative to the row parameter are shared across rows
    for (int i = 0; i < n; ++i) {
        const double ti = target.grid.params[i];
        for (std::size_t p = 0; p < taus.size(); ++p) {
            const double tau = ti + taus[p];
            pos_at[p] = source_curve.position(tau);
            speed_at[p] = source_curve.speed(tau);
        }
        for (std::size_t p = 0; p < taus.size(); ++p) {
            const Complex cp = wq[p] * kernel(target.grid.nodes[i], pos_at[p]) * speed_at[p];
            const double tau = ti + taus[p];
            for (int j = 0; j < n; ++j) {
                s(i, j) += cp * trig_cardinal(n, tau - source.grid.params[j]);
            }
        }
    }
    return s;
}

PointKernel single_layer_kernel(Complex kappa) {
    return [kappa](const geometry::Point& x, const geometry::Point& y) {
        return bessel_k(0.0, kappa * dist(x, y)) / kTwoPi;
    };
}

PointKernel norm_kernel(Complex kappa) {
    return [kappa](const geometry::Point& x, const geometry::Point& y) {
        const double r = dist(x, y);
        return r * bessel_k(1.0, kappa * r) / (4.0 * kPi * kappa);
    };
}

// canonical phase: the largest entry lands on the positive real axis, so
// real-coupling problems yield real densities and reruns are reproducible
void canonicalize_phase(std::vector<Complex>& v) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (std::abs(v[imax]) == 0.0) return;
    const Complex phase = v[imax] / std::abs(v[imax]);
    for (auto& x : v) x /= phase;
}

// same analytic curve with the requested node count
ClosedCurve resample(const ClosedCurve& curve, int N) {
    if (curve.sample_count() == N) return curve;
    switch (curve.kind()) {
    case ClosedCurve::Kind::Circle:
        return ClosedCurve::circle(curve.circle_radius(), N).with_offset(curve.offset_distance());
    case ClosedCurve::Kind::Ellipse:
        return ClosedCurve::ellipse(curve.ellipse_a(), curve.ellipse_b(), N)
            .with_offset(curve.offset_distance());
    default:
        throw DomainError("bsintegral: node count mismatch for fourier curve");
    }
}

Complex quadratic_form(const CurveCache& a, const std::vector<Complex>& mu_a, const Matrix& block,
                       const std::vector<Complex>& mu_b) {
    // sum_i h speed_i mu_a_i  *  (block mu_b)_i ; block already carries the
    // source-side weight
    const double h = kTwoPi / a.grid.N;
    const auto row = numerics::mat_vec(block, mu_b);
    Complex acc(0.0, 0.0);
    for (int i = 0; i < a.grid.N; ++i) acc += h * a.grid.speeds[i] * mu_a[i] * row[i];
    return acc;
}

} // namespace

NystromGrid make_grid(const ClosedCurve& curve) {
    NystromGrid g;
    g.N = curve.sample_count();
    if (g.N % 2 != 0) throw DomainError("bsintegral: node count must be even");
    if (g.N < 32) throw DomainError("bsintegral: need at least 32 nodes");
    g.nodes.resize(g.N);
    g.params.resize(g.N);
    g.speeds.resize(g.N);
    for (int i = 0; i < g.N; ++i) {
        g.params[i] = curve.node_parameter(i);
        g.nodes[i] = curve.position(g.params[i]);
        g.speeds[i] = curve.speed(g.params[i]);
    }
    return g;
}

numerics::Matrix single_layer_matrix(Complex kappa, const ClosedCurve& curve, int N) {
    return self_single_layer(cache_curve(resample(curve, N)), kappa);
}

BlockOperator build_block(Complex kappa, const ClosedCurve& sigma0, double eps, const Coupling& c,
                          int N) {
    if (!(kappa.real() > 0.0)) throw DomainError("build_block: Re kappa must be positive");
    if (eps < 0.0) throw DomainError("build_block: eps must be >= 0");

    BlockOperator op;
    op.kappa = kappa;
    op.nodes_per_curve = N;

    const ClosedCurve base = resample(sigma0, N);

    if (eps == 0.0) {
        op.two_curves = false;
        const CurveCache cache = cache_curve(base);
        Matrix s = self_single_layer(cache, kappa);
        const Complex beta = c.sum();
        Matrix m = Matrix::identity(N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) += s(i, j) * beta;
        op.matrix = std::move(m);
        return op;
    }

    op.two_curves = true;
    const ClosedCurve plus = parallel_offset(base, eps);
    const ClosedCurve minus = parallel_offset(base, -eps);
    const CurveCache cp = cache_curve(plus);
    const CurveCache cm = cache_curve(minus);

    const Matrix spp = self_single_layer(cp, kappa);
    const Matrix smm = self_single_layer(cm, kappa);
    const PointKernel sl = single_layer_kernel(kappa);
    const Matrix spm = cross_block(cp, minus, cm, sl, 2.0 * eps);
    const Matrix smp = cross_block(cm, plus, cp, sl, 2.0 * eps);

    Matrix m = Matrix::identity(2 * N);
    const Complex ap = c.alpha_plus, am = c.alpha_minus;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            m(i, j) += spp(i, j) * ap;
            m(i, N + j) += spm(i, j) * am;
            m(N + i, j) += smp(i, j) * ap;
            m(N + i, N + j) += smm(i, j) * am;
        }
    }
    op.matrix = std::move(m);
    return op;
}

EigenSolution find_eigenvalue(const ClosedCurve& sigma0, double eps, const Coupling& c,
                              Complex seed, int N) {
    if (!(seed.real() > 0.0)) throw DomainError("find_eigenvalue: Re seed must be positive");

    // Value of log det at kappa; absent when the factorisation hit an exact
    // rank drop, i.e. kappa already is a kernel point to machine precision.
    const auto log_det_at = [&](Complex kappa) -> std::pair<bool, Complex> {
        const BlockOperator op = build_block(kappa, sigma0, eps, c, N);
        numerics::LuDecomposition lu(op.matrix);
        if (lu.singular()) return {false, Complex(0.0, 0.0)};
        return {true, lu.log_det()};
    };

    // Newton on the determinant in the det/det' form: the step is
    // -1 / (d log det / d kappa), evaluated through the branch-free ratios
    // exp(ld(z +- h) - ld(z)), so neither the absolute determinant scale nor
    // the 2 pi i ambiguity of the pivot-log sum enters.
    Complex kappa = seed;
    bool converged = false;
    double last_step = 0.0;
    for (int it = 0; it < 200; ++it) {
        const auto [ok0, ld0] = log_det_at(kappa);
        if (!ok0) {
            converged = true;
            break;
        }
        const double h = 1e-7 * std::max(1.0, std::abs(kappa));
        const auto [okp, ldp] = log_det_at(kappa + h);
        const auto [okm, ldm] = log_det_at(kappa - h);
        if (!okp || !okm) {
            kappa += okp ? Complex(h, 0.0) : Complex(-h, 0.0);
            converged = true;
            break;
        }
        const Complex g = (std::exp(ldp - ld0) - std::exp(ldm - ld0)) / (2.0 * h);
        if (g == Complex(0.0, 0.0))
            throw SolverError("find_eigenvalue: flat determinant, no kernel point in basin");
        Complex step = -1.0 / g;
        const double cap = 0.25 * std::max(1.0, std::abs(kappa));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        kappa += step;
        last_step = std::abs(step);
        if (last_step <= 1e-12 * std::max(1.0, std::abs(kappa))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergenceError("find_eigenvalue: Newton on the determinant did not converge",
                                 kappa, last_step);
    if (!(kappa.real() > 0.0)) throw SolverError("find_eigenvalue: converged to Re kappa <= 0");

    const BlockOperator op = build_block(kappa, sigma0, eps, c, N);
    const auto smin = numerics::smallest_singular(op.matrix);
    const double smax = numerics::largest_singular(op.matrix);
    const double ratio = smin.exactly_singular ? 0.0 : smin.value / smax;
    if (ratio >= 1e-7)
        throw SolverError("find_eigenvalue: kernel point not certified (sigma ratio too large)");

    EigenSolution out;
    out.kappa = kappa;
    out.lambda = -kappa * kappa;
    out.sigma_ratio = ratio;
    return out;
}

EigenTraces eigen_traces(const ClosedCurve& sigma0, const Coupling& c, Complex kappa, int N) {
    const BlockOperator op = build_block(kappa, sigma0, 0.0, c, N);
    const CurveCache cache = cache_curve(resample(sigma0, N));

    std::vector<Complex> phi = numerics::smallest_singular_vector(op.matrix);
    canonicalize_phase(phi);
    const Complex beta = c.sum();
    std::vector<Complex> mu(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) mu[i] = beta * phi[i];

    // psi on the curve through the single-layer trace: -S mu = phi - M phi
    const auto mphi = numerics::mat_vec(op.matrix, phi);
    EigenTraces t;
    t.psi0.resize(N);
    for (int i = 0; i < N; ++i) t.psi0[i] = phi[i] - mphi[i];

    // jump-relation self-test: dn+ - dn- - beta psi must vanish identically
    // up to the kernel residual of phi
    double resid = 0.0, scale = 0.0;
    for (int i = 0; i < N; ++i) {
        resid = std::max(resid, std::abs(mu[i] - beta * t.psi0[i]));
        scale = std::max(scale, std::abs(t.psi0[i]));
    }
    if (resid > 1e-7 * std::abs(beta) * scale)
        throw SolverError("eigen_traces: jump-relation self-test failed (not at a kernel point)");

    const Matrix kp = self_adjoint_double_layer(cache, kappa);
    const auto kpmu = numerics::mat_vec(kp, mu);
    t.dn_plus.resize(N);
    t.dn_minus.resize(N);
    for (int i = 0; i < N; ++i) {
        // psi = -SL[mu]; the one-sided traces of d/dn SL are -+ mu/2 + K' mu
        t.dn_plus[i] = 0.5 * mu[i] - kpmu[i];
        t.dn_minus[i] = -0.5 * mu[i] - kpmu[i];
    }

    const Matrix fker = self_norm_kernel(cache, kappa);
    t.norm_sq = quadratic_form(cache, mu, fker, mu);
    return t;
}

ShellTraces shell_traces(const ClosedCurve& sigma0, double eps, const Coupling& c, Complex kappa,
                         int N) {
    if (!(eps > 0.0)) throw DomainError("shell_traces: eps must be positive");
    const BlockOperator op = build_block(kappa, sigma0, eps, c, N);

    const ClosedCurve base = resample(sigma0, N);
    const ClosedCurve plus = parallel_offset(base, eps);
    const ClosedCurve minus = parallel_offset(base, -eps);
    const CurveCache cp = cache_curve(plus);
    const CurveCache cm = cache_curve(minus);

    auto phi = numerics::smallest_singular_vector(op.matrix);
    canonicalize_phase(phi);
    std::vector<Complex> mu_p(N), mu_m(N), psi_p(N), psi_m(N);
    for (int i = 0; i < N; ++i) {
        psi_p[i] = phi[i];
        psi_m[i] = phi[N + i];
        mu_p[i] = c.alpha_plus * phi[i];
        mu_m[i] = c.alpha_minus * phi[N + i];
    }

    const Matrix fpp = self_norm_kernel(cp, kappa);
    const Matrix fmm = self_norm_kernel(cm, kappa);
    const PointKernel fk = norm_kernel(kappa);
    const Matrix fpm = cross_block(cp, minus, cm, fk, 2.0 * eps);
    const Matrix fmp = cross_block(cm, plus, cp, fk, 2.0 * eps);

    Complex norm(0.0, 0.0);
    norm += quadratic_form(cp, mu_p, fpp, mu_p);
    norm += quadratic_form(cm, mu_m, fmm, mu_m);
    norm += quadratic_form(cp, mu_p, fpm, mu_m);
    norm += quadratic_form(cm, mu_m, fmp, mu_p);

    if (std::abs(norm) < 1e-300) throw NormalizationError("shell_traces: zero volume norm");
    const Complex s = 1.0 / std::sqrt(norm);

    ShellTraces out;
    out.norm_sq = norm;
    out.outer.resize(N);
    out.inner.resize(N);
    for (int i = 0; i < N; ++i) {
        out.outer[i] = s * psi_p[i];
        out.inner[i] = s * psi_m[i];
    }
    return out;
}

asymptotics::TraceBundle to_trace_bundle(const ClosedCurve& sigma0, const EigenTraces& t) {
    const int n = static_cast<int>(t.psi0.size());
    const ClosedCurve base = resample(sigma0, n);
    asymptotics::TraceBundle b;
    b.dimension = 2;
    b.psi0 = t.psi0;
    b.dn_plus = t.dn_plus;
    b.dn_minus.resize(n);
    for (int i = 0; i < n; ++i) b.dn_minus[i] = -t.dn_minus[i]; // inward-derivative convention
    const geometry::CurvatureField cf = curvature(base);
    b.K1.assign(cf.K1.begin(), cf.K1.end());
    b.weight = surface_weights(base);
    b.norm_sq = t.norm_sq;
    return b;
}

} // namespace deltashell::bsintegral

#include "deltashell/asymptotics/asymptotics.hpp"

#include "deltashell/errors.hpp"
#include "deltashell/numerics/fit.hpp"
#include "deltashell/radial/radial.hpp"

#include <doctest.h>

#include <cmath>

using namespace deltashell::asymptotics;
using deltashell::Coupling;
using Complex = std::complex<double>;
namespace radial = deltashell::radial;

namespace {

TraceBundle circle_bundle(const Coupling& c, double R, int m, radial::AngularBasis basis,
                          int nodes = 128) {
    using namespace deltashell::radial;
    RadialProblem p;
    p.dimension = 2;
    p.R = R;
    p.epsilon = 0.0;
    p.coupling = c;
    p.angular_index = m;
    RadialEigenData d = solve_eigenvalue(p, default_seed(p));
    d.angular = m >= 1 ? basis : AngularBasis::Constant;
    return to_trace_bundle(p, d, nodes);
}

void rescale(TraceBundle& b, Complex s) {
    for (auto& v : b.psi0) v *= s;
    for (auto& v : b.dn_plus) v *= s;
    for (auto& v : b.dn_minus) v *= s;
    b.norm_sq *= s * s;
}

} // namespace

TEST_CASE("slope_simple is invariant under eigenfunction rescaling") {
    const Coupling c{{-3.0, 0.0}, {-2.0, 0.0}};
    const TraceBundle base = circle_bundle(c, 1.0, 0, radial::AngularBasis::Constant);
    const Complex ref = slope_simple(base, c);
    for (const Complex s : {Complex(2.0, 0.0), Complex(0.0, 1.0), Complex(1.0, 3.0)}) {
        TraceBundle b = base;
        rescale(b, s);
        CHECK(std::abs(slope_simple(b, c) - ref) < 1e-12 * std::abs(ref));
    }
}

TEST_CASE("slope_matrix with k = 1 reduces to slope_simple") {
    const Coupling c{{-3.0, 0.0}, {-2.0, 0.0}};
    const TraceBundle b = circle_bundle(c, 1.0, 0, radial::AngularBasis::Constant);
    deltashell::numerics::Matrix gram(1, 1);
    gram(0, 0) = b.norm_sq;
    const auto res = slope_matrix({b}, gram, c);
    CHECK(std::abs(res.slopes[0] - slope_simple(b, c)) < 1e-12 * std::abs(res.slopes[0]));
}

TEST_CASE("degenerate circle pair: S is a multiple of the identity") {
    const Coupling c{{-5.0, 0.0}, {-3.0, 0.0}};
    using namespace deltashell::radial;
    RadialProblem p;
    p.dimension = 2;
    p.R = 1.0;
    p.epsilon = 0.0;
    p.coupling = c;
    p.angular_index = 1;
    const auto [cosine, sine] = degenerate_pair(p, default_seed(p));
    const TraceBundle bc = to_trace_bundle(p, cosine, 256);
    const TraceBundle bs = to_trace_bundle(p, sine, 256);

    deltashell::numerics::Matrix gram = deltashell::numerics::Matrix::identity(2);
    const auto res = slope_matrix({bc, bs}, gram, c);
    CHECK(std::abs(res.S(0, 1)) < 1e-10 * std::abs(res.S(0, 0)));
    CHECK(std::abs(res.S(1, 0)) < 1e-10 * std::abs(res.S(0, 0)));
    CHECK(std::abs(res.S(0, 0) - res.S(1, 1)) < 1e-10 * std::abs(res.S(0, 0)));
    CHECK(std::abs(res.slopes[0] - res.slopes[1]) < 1e-8 * std::abs(res.slopes[0]));
    // each slope equals the per-sector simple slope
    CHECK(std::abs(res.slopes[0] - slope_simple(bc, c)) < 1e-8 * std::abs(res.slopes[0]));
}

TEST_CASE("slope_matrix eigenvalues are invariant under eigenspace rotation") {
    const Coupling c{{-5.0, 0.0}, {-3.0, 0.0}};
    using namespace deltashell::radial;
    RadialProblem p;
    p.dimension = 2;
    p.R = 1.0;
    p.epsilon = 0.0;
    p.coupling = c;
    p.angular_index = 1;
    const auto [cosine, sine] = degenerate_pair(p, default_seed(p));
    const TraceBundle b1 = to_trace_bundle(p, cosine, 256);
    const TraceBundle b2 = to_trace_bundle(p, sine, 256);

    deltashell::numerics::Matrix gram = deltashell::numerics::Matrix::identity(2);
    const auto ref = slope_matrix({b1, b2}, gram, c);

    const double phi = 0.7;
    TraceBundle u1 = b1, u2 = b2;
    for (std::size_t i = 0; i < b1.psi0.size(); ++i) {
        u1.psi0[i] = std::cos(phi) * b1.psi0[i] + std::sin(phi) * b2.psi0[i];
        u1.dn_plus[i] = std::cos(phi) * b1.dn_plus[i] + std::sin(phi) * b2.dn_plus[i];
        u1.dn_minus[i] = std::cos(phi) * b1.dn_minus[i] + std::sin(phi) * b2.dn_minus[i];
        u2.psi0[i] = -std::sin(phi) * b1.psi0[i] + std::cos(phi) * b2.psi0[i];
        u2.dn_plus[i] = -std::sin(phi) * b1.dn_plus[i] + std::cos(phi) * b2.dn_plus[i];
        u2.dn_minus[i] = -std::sin(phi) * b1.dn_minus[i] + std::cos(phi) * b2.dn_minus[i];
    }
    deltashell::numerics::Matrix gram2 = deltashell::numerics::Matrix::identity(2);
    const auto rot = slope_matrix({u1, u2}, gram2, c);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(rot.slopes[i] - ref.slopes[i]) < 1e-8 * std::abs(ref.slopes[i]));
}

TEST_CASE("slope_matrix re-biorthonormalises through the bilinear Gram-Schmidt") {
    const Coupling c{{-5.0, 0.0}, {-3.0, 0.0}};
    using namespace deltashell::radial;
    RadialProblem p;
    p.dimension = 2;
    p.R = 1.0;
    p.epsilon = 0.0;
    p.coupling = c;
    p.angular_index = 1;
    const auto [cosine, sine] = degenerate_pair(p, default_seed(p));
    const TraceBundle b1 = to_trace_bundle(p, cosine, 256);
    const TraceBundle b2 = to_trace_bundle(p, sine, 256);
    deltashell::numerics::Matrix gram_ref = deltashell::numerics::Matrix::identity(2);
    const auto ref = slope_matrix({b1, b2}, gram_ref, c);

    // skewed, non-normalised basis u1 = 2 b1, u2 = b1 + b2
    TraceBundle u1 = b1, u2 = b2;
    rescale(u1, {2.0, 0.0});
    for (std::size_t i = 0; i < b1.psi0.size(); ++i) {
        u2.psi0[i] = b1.psi0[i] + b2.psi0[i];
        u2.dn_plus[i] = b1.dn_plus[i] + b2.dn_plus[i];
        u2.dn_minus[i] = b1.dn_minus[i] + b2.dn_minus[i];
    }
    u2.norm_sq = {2.0, 0.0};
    deltashell::numerics::Matrix gram(2, 2);
    gram(0, 0) = {4.0, 0.0};
    gram(0, 1) = {2.0, 0.0};
    gram(1, 0) = {2.0, 0.0};
    gram(1, 1) = {2.0, 0.0};
    const auto skew = slope_matrix({u1, u2}, gram, c);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(skew.slopes[i] - ref.slopes[i]) < 1e-8 * std::abs(ref.slopes[i]));
}

TEST_CASE("bundle validation errors") {
    TraceBundle b;
    b.psi0 = {Complex(1.0, 0.0)};
    b.dn_plus = {Complex(1.0, 0.0)};
    b.dn_minus = {Complex(1.0, 0.0)};
    b.K1 = {0.0};
    b.weight = {1.0};
    b.norm_sq = {0.0, 0.0};
    const Coupling c{{-1.0, 0.0}, {-1.0, 0.0}};
    CHECK_THROWS_AS(slope_simple(b, c), deltashell::NormalizationError);
    b.norm_sq = {1.0, 0.0};
    b.K1 = {0.0, 0.0};
    CHECK_THROWS_AS(slope_simple(b, c), deltashell::DomainError);
}

#include "deltashell/geometry/curve.hpp"

#include "deltashell/errors.hpp"

#include <algorithm>
#include <cmath>

namespace deltashell::geometry {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;
constexpr double kTangentFloor = 1e-12;

} // namespace

ClosedCurve ClosedCurve::circle(double radius, int samples) {
    if (!(radius > 0.0)) throw GeometryError("circle: radius must be positive");
    if (samples < 4) throw GeometryError("curve: need at least 4 samples");
    ClosedCurve c;
    c.kind_ = Kind::Circle;
    c.radius_ = radius;
    c.samples_ = samples;
    return c;
}

ClosedCurve ClosedCurve::ellipse(double a, double b, int samples) {
    if (!(a > 0.0) || !(b > 0.0)) throw GeometryError("ellipse: semi-axes must be positive");
    if (samples < 4) throw GeometryError("curve: need at least 4 samples");
    ClosedCurve c;
    c.kind_ = Kind::Ellipse;
    c.ell_a_ = a;
    c.ell_b_ = b;
    c.samples_ = samples;
    return c;
}

ClosedCurve ClosedCurve::fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                                 int samples) {
    if (cos_coeffs.empty()) throw GeometryError("fourier: need at least the mean radius");
    if (samples < 4) throw GeometryError("curve: need at least 4 samples");
    ClosedCurve c;
    c.kind_ = Kind::Fourier;
    c.fc_ = std::move(cos_coeffs);
    c.fs_ = std::move(sin_coeffs);
    c.samples_ = samples;
    for (int i = 0; i < samples; ++i) {
        if (c.base_radius(c.node_parameter(i)) <= 0.0)
            throw GeometryError("fourier: radius must stay positive");
    }
    if (polyline_self_intersects(c.nodes()))
        throw GeometryError("fourier: curve self-intersects on the sample grid");
    return c;
}

double ClosedCurve::node_parameter(int i) const { return kTwoPi * i / samples_; }

double ClosedCurve::base_radius(double theta) const {
    double r = fc_[0];
    for (std::size_t k = 1; k < fc_.size(); ++k) r += fc_[k] * std::cos(k * theta);
    for (std::size_t k = 1; k <= fs_.size(); ++k) r += fs_[k - 1] * std::sin(k * theta);
    return r;
}

double ClosedCurve::base_radius_d1(double theta) const {
    double r = 0.0;
    for (std::size_t k = 1; k < fc_.size(); ++k) r -= fc_[k] * k * std::sin(k * theta);
    for (std::size_t k = 1; k <= fs_.size(); ++k) r += fs_[k - 1] * k * std::cos(k * theta);
    return r;
}

double ClosedCurve::base_radius_d2(double theta) const {
    double r = 0.0;
    for (std::size_t k = 1; k < fc_.size(); ++k) r -= fc_[k] * k * k * std::cos(k * theta);
    for (std::size_t k = 1; k <= fs_.size(); ++k) r -= fs_[k - 1] * k * k * std::sin(k * theta);
    return r;
}

void ClosedCurve::base_geometry(double theta, Point& p, Point& d1, Point& d2) const {
    const double c = std::cos(theta), s = std::sin(theta);
    switch (kind_) {
    case Kind::Circle:
        p = {radius_ * c, radius_ * s};
        d1 = {-radius_ * s, radius_ * c};
        d2 = {-radius_ * c, -radius_ * s};
        return;
    case Kind::Ellipse:
        p = {ell_a_ * c, ell_b_ * s};
        d1 = {-ell_a_ * s, ell_b_ * c};
        d2 = {-ell_a_ * c, -ell_b_ * s};
        return;
    case Kind::Fourier: {
        const double r = base_radius(theta);
        const double r1 = base_radius_d1(theta);
        const double r2 = base_radius_d2(theta);
        p = {r * c, r * s};
        d1 = {r1 * c - r * s, r1 * s + r * c};
        d2 = {r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s};
        return;
    }
    }
    throw GeometryError("curve: unknown kind");
}

double ClosedCurve::base_curvature(double theta) const {
    Point p, d1, d2;
    base_geometry(theta, p, d1, d2);
    const double sp = std::hypot(d1.x, d1.y);
    if (sp < kTangentFloor) throw GeometryError("curve: degenerate tangent");
    const double cross = d1.x * d2.y - d1.y * d2.x;
    return -cross / (sp * sp * sp); // L = -dn sign convention
}

Point ClosedCurve::position(double theta) const {
    Point p, d1, d2;
    base_geometry(theta, p, d1, d2);
    if (offset_ == 0.0) return p;
    const Point n = outward_normal(theta);
    return {p.x + offset_ * n.x, p.y + offset_ * n.y};
}

Point ClosedCurve::derivative(double theta) const {
    Point p, d1, d2;
    base_geometry(theta, p, d1, d2);
    if (offset_ == 0.0) return d1;
    // parallel curves: gamma_t' = gamma' (1 - t kappa)
    const double f = 1.0 - offset_ * base_curvature(theta);
    return {d1.x * f, d1.y * f};
}

double ClosedCurve::speed(double theta) const {
    const Point d = derivative(theta);
    const double sp = std::hypot(d.x, d.y);
    if (sp < kTangentFloor) throw GeometryError("curve: degenerate tangent");
    return sp;
}

Point ClosedCurve::outward_normal(double theta) const {
    Point p, d1, d2;
    base_geometry(theta, p, d1, d2);
    const double sp = std::hypot(d1.x, d1.y);
    if (sp < kTangentFloor) throw GeometryError("curve: degenerate tangent");
    return {d1.y / sp, -d1.x / sp};
}

double ClosedCurve::signed_curvature(double theta) const {
    const double k0 = base_curvature(theta);
    if (offset_ == 0.0) return k0;
    const double denom = 1.0 - offset_ * k0;
    if (denom <= 0.0) throw GeometryError("curve: offset beyond focal distance");
    return k0 / denom;
}

std::vector<Point> ClosedCurve::nodes() const {
    std::vector<Point> pts(samples_);
    for (int i = 0; i < samples_; ++i) pts[i] = position(node_parameter(i));
    return pts;
}

ClosedCurve ClosedCurve::with_offset(double extra) const {
    ClosedCurve c = *this;
    c.offset_ += extra;
    return c;
}

CurvatureField curvature(const ClosedCurve& curve) {
    CurvatureField f;
    f.dimension = 2;
    f.kappa.resize(curve.sample_count());
    for (int i = 0; i < curve.sample_count(); ++i)
        f.kappa[i] = curve.signed_curvature(curve.node_parameter(i));
    f.K1 = f.kappa; // d = 2: a single principal curvature
    return f;
}

CurvatureField sphere_curvature_field(double radius, int dimension, int nodes) {
    if (!(radius > 0.0)) throw GeometryError("sphere: radius must be positive");
    CurvatureField f;
    f.dimension = dimension;
    f.kappa.assign(nodes, -1.0 / radius);
    f.K1 = f.kappa;
    return f;
}

ClosedCurve parallel_offset(const ClosedCurve& curve, double t) {
    if (t != 0.0 && std::abs(t) >= max_parallel_range(curve))
        throw GeometryError("parallel_offset: |t| outside the admissible range");
    ClosedCurve shifted = curve.with_offset(t);
    if (polyline_self_intersects(shifted.nodes()))
        throw GeometryError("parallel_offset: offset curve self-intersects");
    return shifted;
}

double jacobian_f(const CurvatureField& field, std::size_t node, double t) {
    if (node >= field.kappa.size()) throw GeometryError("jacobian_f: node out of range");
    double max_kappa = 0.0;
    for (const double k : field.kappa) max_kappa = std::max(max_kappa, std::abs(k));
    if (std::abs(t) * max_kappa >= 1.0)
        throw GeometryError("jacobian_f: t outside the admissible range");
    double f = 1.0;
    for (int mu = 0; mu < field.dimension - 1; ++mu) f *= 1.0 - t * field.kappa[node];
    return f;
}

double max_parallel_range(const ClosedCurve& curve) {
    double max_kappa = 0.0;
    const int probe = std::max(curve.sample_count(), 256);
    for (int i = 0; i < probe; ++i) {
        const double theta = kTwoPi * i / probe;
        max_kappa = std::max(max_kappa, std::abs(curve.signed_curvature(theta)));
    }
    if (max_kappa == 0.0) return 1e300;
    return 0.9 / max_kappa;
}

Complex surface_integral(const ClosedCurve& curve, const std::vector<Complex>& samples) {
    if (samples.size() != static_cast<std::size_t>(curve.sample_count()))
        throw GeometryError("surface_integral: sample/node length mismatch");
    const double h = kTwoPi / curve.sample_count();
    Complex acc(0.0, 0.0);
    for (int i = 0; i < curve.sample_count(); ++i)
        acc += samples[i] * curve.speed(curve.node_parameter(i));
    return acc * h;
}

double curve_length(const ClosedCurve& curve) {
    const double h = kTwoPi / curve.sample_count();
    double acc = 0.0;
    for (int i = 0; i < curve.sample_count(); ++i) acc += curve.speed(curve.node_parameter(i));
    return acc * h;
}

std::vector<double> surface_weights(const ClosedCurve& curve) {
    const double h = kTwoPi / curve.sample_count();
    std::vector<double> w(curve.sample_count());
    for (int i = 0; i < curve.sample_count(); ++i) w[i] = h * curve.speed(curve.node_parameter(i));
    return w;
}

namespace {

int orientation(const Point& a, const Point& b, const Point& c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double scale = std::abs(b.x - a.x) + std::abs(b.y - a.y) + std::abs(c.x - a.x) +
                         std::abs(c.y - a.y);
    if (std::abs(v) <= 1e-15 * scale * scale) return 0;
    return v > 0.0 ? 1 : -1;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

} // namespace

bool polyline_self_intersects(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // neighbours around the seam
            const Point& c = pts[j];
            const Point& d = pts[(j + 1) % n];
            if (segments_cross(a, b, c, d)) return true;
        }
    }
    return false;
}

} // namespace deltashell::geometry

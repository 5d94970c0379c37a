#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace deltashell::geometry {

using Complex = std::complex<double>;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Smooth closed planar curve given analytically: a circle, an ellipse, a
/// star-shaped Fourier radius graph r(theta), or a parallel offset of one of
/// those. Parametrised counterclockwise on [0, 2*pi) with a uniform node
/// grid; positions, tangents and curvature all have closed forms, so grid
/// refinement only moves node placement.
///
/// Orientation fixes the curvature sign: the normal points outward and the
/// Weingarten map is L = -dn, so a circle of radius R has kappa = -1/R and
/// convex curves have nonpositive curvature everywhere.
class ClosedCurve {
public:
    enum class Kind { Circle, Ellipse, Fourier };

    static ClosedCurve circle(double radius, int samples);
    static ClosedCurve ellipse(double a, double b, int samples);
    static ClosedCurve fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                               int samples);

    Kind kind() const { return kind_; }
    int sample_count() const { return samples_; }
    double offset_distance() const { return offset_; }

    double node_parameter(int i) const;

    Point position(double theta) const;
    Point derivative(double theta) const; // d gamma / d theta
    double speed(double theta) const;     // |d gamma / d theta|
    Point outward_normal(double theta) const;
    double signed_curvature(double theta) const;

    std::vector<Point> nodes() const;

    /// Same analytic curve with `extra` added to the parallel offset.
    ClosedCurve with_offset(double extra) const;

    double circle_radius() const { return radius_; }
    double ellipse_a() const { return ell_a_; }
    double ellipse_b() const { return ell_b_; }

private:
    ClosedCurve() = default;

    double base_radius(double theta) const;       // fourier kind
    double base_radius_d1(double theta) const;
    double base_radius_d2(double theta) const;
    void base_geometry(double theta, Point& p, Point& d1, Point& d2) const;
    double base_curvature(double theta) const;

    Kind kind_ = Kind::Circle;
    int samples_ = 0;
    double offset_ = 0.0;
    double radius_ = 1.0;
    double ell_a_ = 1.0, ell_b_ = 1.0;
    std::vector<double> fc_, fs_;
};

struct CurvatureField {
    std::vector<double> kappa; // signed principal curvature per node
    std::vector<double> K1;    // first mean curvature per node
    int dimension = 2;
};

CurvatureField curvature(const ClosedCurve& curve);

/// Curvature data of a sphere of radius R in dimension d (all principal
/// curvatures equal -1/R), replicated over `nodes` entries.
CurvatureField sphere_curvature_field(double radius, int dimension, int nodes);

/// Node-wise map q -> q + t n(q); throws when |t| exceeds the admissible
/// parallel range or the offset self-intersects on the sample grid.
ClosedCurve parallel_offset(const ClosedCurve& curve, double t);

/// prod_mu (1 - t kappa_mu) at one node.
double jacobian_f(const CurvatureField& field, std::size_t node, double t);

/// Largest offset with a * max|kappa| < 1, shrunk by the 0.9 safety factor.
double max_parallel_range(const ClosedCurve& curve);

/// Periodic trapezoid rule of samples * |gamma'| over the parameter grid.
Complex surface_integral(const ClosedCurve& curve, const std::vector<Complex>& samples);

double curve_length(const ClosedCurve& curve);

/// Quadrature weights w_i with sum_i w_i v_i ~= surface integral of v.
std::vector<double> surface_weights(const ClosedCurve& curve);

bool polyline_self_intersects(const std::vector<Point>& pts);

} // namespace deltashell::geometry

#pragma once

#include <cmath>
#include <vector>

#include "ringmap/domain.hpp"

namespace ringmap {

struct Interval {
    double lo;
    double hi;
};

struct Box {
    double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;

    bool empty() const { return x0 > x1 || y0 > y1; }
    bool bounded() const {
        return !empty() && std::isfinite(x0) && std::isfinite(x1) && std::isfinite(y0) &&
               std::isfinite(y1);
    }
    void add(Complex z);
    void add(const Box& b);
    Box padded(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
    Box clipped(const Box& limit) const;
};

/// Closed planar set used by the rasterizer: disks and their affine images, polygons,
/// segments, rays, half-planes, points, and closed complements of ellipses/polygons.
struct Primitive {
    enum class Kind { Ellipse, EllipseExterior, PolygonRegion, PolygonExterior, Segment, Ray,
                      HalfPlaneClosed, Point };
    Kind kind = Kind::Point;
    // Ellipse: {p + M v : |v| <= radius}.  Segment: [p, q].  Ray: p + s*q, s >= 0, |q| = 1.
    // HalfPlaneClosed: {Re((z - p) * conj(q)) >= 0}.  Point: p.
    Complex p{0.0, 0.0};
    Complex q{0.0, 0.0};
    double m[4] = {1.0, 0.0, 0.0, 1.0};  // row-major 2x2
    double radius = 0.0;
    Polygon poly;

    static Primitive ellipse(Complex center, double radius, bool exterior);
    static Primitive polygon(Polygon poly, bool exterior);
    static Primitive segment(Complex a, Complex b);
    static Primitive ray(Complex origin, Complex direction);
    static Primitive half_plane(Complex point, Complex inward_normal);
    static Primitive point(Complex z);

    bool contains(Complex z) const;
    /// Appends the parameter intervals where the line {y = c} (axis 0, parameter x) or
    /// {x = c} (axis 1, parameter y) meets the set.
    void line_intervals(int axis, double c, std::vector<Interval>& out) const;
    Box bbox() const;
    Primitive transformed(const AffineMap& f) const;
    double area() const;  ///< infinite for unbounded kinds
    /// Euclidean distance from z to the set (0 inside).
    double distance(Complex z) const;
    /// Points on the boundary, used for coarse geometric queries.
    std::vector<Complex> boundary_samples(int n) const;
    bool linear() const {
        return kind != Kind::Ellipse && kind != Kind::EllipseExterior;
    }
};

/// Rasterizable description of a ring: inner component (value 1) and outer component
/// (value 0). When `infinity_in_domain` is set the outer component is bounded and the far
/// field is free.
struct RingGeometry {
    std::vector<Primitive> inner;
    std::vector<Primitive> outer;
    bool infinity_in_domain = false;

    Box inner_bbox() const;
    /// Bounding box of the outer component when it is bounded, empty otherwise.
    Box outer_bbox() const;
    bool in_inner(Complex z) const;
    bool in_outer(Complex z) const;
};

/// Throws DomainError for rings whose inner component is a point or whose outer component
/// is the point at infinity.
RingGeometry compile_geometry(const RingDomain& d);

/// Components without degeneracy checks: a point inner component is a Point primitive and an
/// outer component at infinity is an empty list.
RingGeometry ring_components(const RingDomain& d);

/// Distance from z to the complement of the ring.
double boundary_distance(const RingDomain& d, Complex z);

/// Membership in the open ring domain, degenerate rings included.
bool domain_contains(const RingDomain& d, Complex z);

/// Distance between two closed sets.
double set_distance(const Primitive& a, const Primitive& b);

/// Dense polygon approximating the outer boundary of an FtImage.
Polygon ft_image_boundary(const Polygon& base_outer, Complex puncture, double t, int per_edge);

}  // namespace ringmap

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ringmap {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// A point of the extended real line. The point at infinity is a flag, never a large value.
struct ExtReal {
    double value = 0.0;
    bool infinite = false;

    static ExtReal finite(double v) { return {v, false}; }
    static ExtReal infinity() { return {0.0, true}; }
    bool operator==(const ExtReal& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

/// z -> a z + b conj(z) + c.
struct AffineMap {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    Complex c{0.0, 0.0};

    static AffineMap identity() { return {}; }
    static AffineMap shear(Complex k) { return {Complex(1.0), k, Complex(0.0)}; }

    Complex operator()(Complex z) const { return a * z + b * std::conj(z) + c; }
    /// Image of a direction vector (no translation).
    Complex linear(Complex v) const { return a * v + b * std::conj(v); }
    double det() const { return std::norm(a) - std::norm(b); }
    bool invertible() const;
    bool holomorphic() const { return b == Complex(0.0); }
    bool antiholomorphic() const { return a == Complex(0.0); }
    AffineMap inverse() const;
};

/// outer(inner(z)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

using Polygon = std::vector<Complex>;

/// Open half-plane {z : Re((z - point) * conj(normal)) > 0}.
struct HalfPlane {
    Complex point{0.0, 0.0};
    Complex normal{0.0, 1.0};
};

class RingDomain;
using DomainPtr = std::shared_ptr<const RingDomain>;

struct Annulus {
    double r = 1.0;
    double R = 2.0;
    Complex center{0.0, 0.0};
};
/// C minus ([-1,0] and [s,inf)).
struct Teichmuller {
    double s = 1.0;
};
/// {|z| > 1} minus [s,inf).
struct Grotzsch {
    double s = 2.0;
};
/// {|Im z| < 1} minus [-s,s].
struct SlitStrip {
    double s = 1.0;
};
/// Closed arc of the extended line running upward from `from` to `to`, wrapping through
/// infinity when from > to.
struct Arc {
    ExtReal from;
    ExtReal to;
};
/// Complement is two disjoint arcs of the line origin + direction * x (direction unit).
struct RealSlitRing {
    Arc arc1;
    Arc arc2;
    Complex origin{0.0, 0.0};
    Complex direction{1.0, 0.0};
};
struct PolygonalRing {
    Polygon outer;
    Polygon inner;
};
struct PuncturedDomain {
    std::variant<Polygon, HalfPlane> outer;
    Complex puncture{0.0, 0.0};
};
/// C minus a closed polygonal hole. The outer complement is the point at infinity.
struct ExteriorDomain {
    Polygon hole;
};
struct AffineImage {
    DomainPtr base;
    AffineMap map;
};
/// Image of a punctured polygon under zeta = p + F_t(z - p), p the puncture.
struct FtImage {
    DomainPtr base;
    double t = 1.0;
};

using RingKind = std::variant<Annulus, Teichmuller, Grotzsch, SlitStrip, RealSlitRing,
                              PolygonalRing, PuncturedDomain, ExteriorDomain, AffineImage,
                              FtImage>;

/// A doubly connected domain. Construct through the validating factories.
class RingDomain {
public:
    static RingDomain annulus(double r, double R, Complex center = 0.0);
    static RingDomain teichmuller(double s);
    static RingDomain grotzsch(double s);
    static RingDomain slit_strip(double s);
    static RingDomain real_slit_ring(Arc arc1, Arc arc2, Complex origin = 0.0,
                                     Complex direction = 1.0);
    static RingDomain polygonal(Polygon outer, Polygon inner);
    static RingDomain punctured(Polygon outer, Complex puncture);
    static RingDomain punctured(HalfPlane outer, Complex puncture);
    static RingDomain exterior(Polygon hole);
    static RingDomain affine_image(const RingDomain& base, const AffineMap& map);
    static RingDomain ft_image(const RingDomain& base, double t);

    const RingKind& kind() const { return kind_; }
    std::string kind_name() const;

    template <class T>
    const T* as() const { return std::get_if<T>(&kind_); }

    /// True when C minus the domain is bounded, either intrinsically or by declaration.
    bool complement_bounded() const;
    bool declared_complement_bounded() const { return declared_bounded_; }
    RingDomain with_declared_complement_bounded(bool flag) const;

    /// Inner complement component reduces to a single point.
    bool degenerate_inner() const;
    /// Outer complement component reduces to the point at infinity.
    bool degenerate_outer() const;

private:
    explicit RingDomain(RingKind k) : kind_(std::move(k)) {}
    RingKind kind_;
    bool declared_bounded_ = false;
};

enum class ModulusMethod { ClosedForm, GridSolver, Optimized, BoundOnly };

std::string to_string(ModulusMethod m);

/// A modulus in [0, inf] with its provenance and error estimate.
struct ExtendedModulus {
    double value = 0.0;
    ModulusMethod method = ModulusMethod::ClosedForm;
    std::optional<double> abs_error;

    bool infinite() const { return value == kInf; }
    /// Closed forms carry a rounding bound as their error.
    static ExtendedModulus closed(double v) {
        return {v, ModulusMethod::ClosedForm, 1e-13 * std::abs(v)};
    }
    static ExtendedModulus infinity(ModulusMethod m = ModulusMethod::ClosedForm) {
        return {kInf, m, 0.0};
    }
    double error() const { return abs_error.value_or(0.0); }
};

RingDomain apply_affine(const AffineMap& phi, const RingDomain& d);

struct ComplementAreas {
    double bounded = 0.0;  ///< |inner complement component|
    double domain = 0.0;   ///< |domain|, possibly infinite
};
ComplementAreas complement_areas(const RingDomain& d);

struct WidthSeparation {
    double width = 0.0;       ///< width of the inner complement component
    double separation = 0.0;  ///< distance from the inner component to the outer one
    double diameter = 0.0;    ///< diameter of the inner component
    bool collinear = false;   ///< whole complement lies on one line
    bool width_positive = false;
};
WidthSeparation width_and_separation(const RingDomain& d);

// Polygon helpers.
double signed_area(const Polygon& p);
bool polygon_is_simple(const Polygon& p);
/// Even-odd test; boundary points may go either way.
bool point_in_polygon(const Polygon& p, Complex z);
Polygon convex_hull(std::vector<Complex> pts);
double convex_polygon_width(const Polygon& hull);
double segment_distance(Complex p0, Complex p1, Complex q0, Complex q1);
double point_segment_distance(Complex z, Complex p0, Complex p1);

/// Angular position of an extended real on the circle, in (-pi, pi].
double ext_angle(const ExtReal& x);
/// Cyclic membership of x in arc a.
bool arc_contains(const Arc& a, const ExtReal& x);
bool arc_has_infinity(const Arc& a);

}  // namespace ringmap

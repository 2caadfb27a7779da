#include "ringmap/geometry.hpp"

#include <algorithm>
#include <functional>
#include <boost/math/tools/minima.hpp>

#include "ringmap/errors.hpp"

namespace ringmap {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Linear piece p + s d with s in [s0, s1]; the bounds may be infinite.
struct Piece {
    Complex p;
    Complex d;
    double s0;
    double s1;
};

double piece_point_distance(const Piece& pc, Complex z) {
    double dd = std::norm(pc.d);
    double s = dd > 0.0 ? (std::conj(pc.d) * (z - pc.p)).real() / dd : 0.0;
    s = std::clamp(s, pc.s0, pc.s1);
    return std::abs(z - (pc.p + s * pc.d));
}

std::vector<Complex> piece_anchor_points(const Piece& pc) {
    std::vector<Complex> out;
    if (std::isfinite(pc.s0)) out.push_back(pc.p + pc.s0 * pc.d);
    if (std::isfinite(pc.s1)) out.push_back(pc.p + pc.s1 * pc.d);
    return out;
}

double piece_distance(const Piece& a, const Piece& b) {
    double c = cross(a.d, b.d);
    Complex w = b.p - a.p;
    if (c != 0.0) {
        double s = cross(w, b.d) / c;
        double t = cross(w, a.d) / c;
        if (s >= a.s0 && s <= a.s1 && t >= b.s0 && t <= b.s1) return 0.0;
    }
    double best = kInf;
    auto ea = piece_anchor_points(a);
    auto eb = piece_anchor_points(b);
    for (Complex z : ea) best = std::min(best, piece_point_distance(b, z));
    for (Complex z : eb) best = std::min(best, piece_point_distance(a, z));
    if (ea.empty() && eb.empty()) best = std::min(best, piece_point_distance(b, a.p));
    return best;
}

std::vector<Piece> pieces_of(const Primitive& pr) {
    using K = Primitive::Kind;
    std::vector<Piece> out;
    switch (pr.kind) {
        case K::PolygonRegion:
        case K::PolygonExterior:
            for (std::size_t i = 0; i < pr.poly.size(); ++i) {
                Complex a = pr.poly[i];
                Complex b = pr.poly[(i + 1) % pr.poly.size()];
                out.push_back({a, b - a, 0.0, 1.0});
            }
            break;
        case K::Segment: out.push_back({pr.p, pr.q - pr.p, 0.0, 1.0}); break;
        case K::Ray: out.push_back({pr.p, pr.q, 0.0, kInf}); break;
        case K::HalfPlaneClosed:
            out.push_back({pr.p, Complex(0.0, 1.0) * pr.q, -kInf, kInf});
            break;
        case K::Point: out.push_back({pr.p, Complex(0.0), 0.0, 0.0}); break;
        default: break;
    }
    return out;
}

// Points guaranteed to lie in the set, used to detect containment.
std::vector<Complex> interior_anchors(const Primitive& pr) {
    using K = Primitive::Kind;
    switch (pr.kind) {
        case K::Ellipse:
        case K::Segment:
        case K::Ray:
        case K::HalfPlaneClosed:
        case K::Point: return {pr.p};
        case K::PolygonRegion: return {pr.poly.front()};
        default: return {};
    }
}

void mat_inverse(const double m[4], double out[4]) {
    double det = m[0] * m[3] - m[1] * m[2];
    out[0] = m[3] / det;
    out[1] = -m[1] / det;
    out[2] = -m[2] / det;
    out[3] = m[0] / det;
}

Complex mat_apply(const double m[4], Complex v) {
    return {m[0] * v.real() + m[1] * v.imag(), m[2] * v.real() + m[3] * v.imag()};
}

// Polygon crossings of a grid line, using a half-open vertex rule.
void polygon_crossings(const Polygon& poly, int axis, double c, std::vector<double>& xs) {
    xs.clear();
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = poly[i];
        Complex b = poly[(i + 1) % n];
        double au = axis == 0 ? a.real() : a.imag();
        double av = axis == 0 ? a.imag() : a.real();
        double bu = axis == 0 ? b.real() : b.imag();
        double bv = axis == 0 ? b.imag() : b.real();
        if ((av > c) != (bv > c)) xs.push_back(au + (c - av) * (bu - au) / (bv - av));
    }
    std::sort(xs.begin(), xs.end());
}

double ellipse_boundary_min(const Primitive& e, const std::function<double(Complex)>& f) {
    auto gamma = [&](double th) {
        return e.p + mat_apply(e.m, Complex(e.radius * std::cos(th), e.radius * std::sin(th)));
    };
    const int n = 720;
    double best = kInf;
    int bi = 0;
    for (int i = 0; i < n; ++i) {
        double v = f(gamma(2.0 * kPi * i / n));
        if (v < best) {
            best = v;
            bi = i;
        }
    }
    double lo = 2.0 * kPi * (bi - 1) / n;
    double hi = 2.0 * kPi * (bi + 1) / n;
    auto r = boost::math::tools::brent_find_minima([&](double th) { return f(gamma(th)); }, lo,
                                                   hi, 40);
    return std::min(best, r.second);
}

}  // namespace

void Box::add(Complex z) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
}

void Box::add(const Box& b) {
    x0 = std::min(x0, b.x0);
    x1 = std::max(x1, b.x1);
    y0 = std::min(y0, b.y0);
    y1 = std::max(y1, b.y1);
}

Box Box::clipped(const Box& limit) const {
    return {std::max(x0, limit.x0), std::max(y0, limit.y0), std::min(x1, limit.x1),
            std::min(y1, limit.y1)};
}

Primitive Primitive::ellipse(Complex center, double radius, bool exterior) {
    Primitive p;
    p.kind = exterior ? Kind::EllipseExterior : Kind::Ellipse;
    p.p = center;
    p.radius = radius;
    return p;
}

Primitive Primitive::polygon(Polygon poly, bool exterior) {
    Primitive p;
    p.kind = exterior ? Kind::PolygonExterior : Kind::PolygonRegion;
    p.poly = std::move(poly);
    return p;
}

Primitive Primitive::segment(Complex a, Complex b) {
    Primitive p;
    p.kind = Kind::Segment;
    p.p = a;
    p.q = b;
    return p;
}

Primitive Primitive::ray(Complex origin, Complex direction) {
    Primitive p;
    p.kind = Kind::Ray;
    p.p = origin;
    p.q = direction / std::abs(direction);
    return p;
}

Primitive Primitive::half_plane(Complex point, Complex inward_normal) {
    Primitive p;
    p.kind = Kind::HalfPlaneClosed;
    p.p = point;
    p.q = inward_normal / std::abs(inward_normal);
    return p;
}

Primitive Primitive::point(Complex z) {
    Primitive p;
    p.kind = Kind::Point;
    p.p = z;
    return p;
}

bool Primitive::contains(Complex z) const {
    switch (kind) {
        case Kind::Ellipse:
        case Kind::EllipseExterior: {
            double inv[4];
            mat_inverse(m, inv);
            double rr = std::abs(mat_apply(inv, z - p));
            return kind == Kind::Ellipse ? rr <= radius : rr >= radius;
        }
        case Kind::PolygonRegion: return point_in_polygon(poly, z);
        case Kind::PolygonExterior: return !point_in_polygon(poly, z);
        case Kind::Segment: return point_segment_distance(z, p, q) == 0.0;
        case Kind::Ray: {
            double s = (std::conj(q) * (z - p)).real();
            return s >= 0.0 && std::abs(z - (p + s * q)) == 0.0;
        }
        case Kind::HalfPlaneClosed: return ((z - p) * std::conj(q)).real() >= 0.0;
        case Kind::Point: return z == p;
    }
    return false;
}

void Primitive::line_intervals(int axis, double c, std::vector<Interval>& out) const {
    auto u = [axis](Complex z) { return axis == 0 ? z.real() : z.imag(); };
    auto v = [axis](Complex z) { return axis == 0 ? z.imag() : z.real(); };
    switch (kind) {
        case Kind::Ellipse:
        case Kind::EllipseExterior: {
            double inv[4];
            mat_inverse(m, inv);
            // Columns of inv along the running (u) and fixed (v) coordinates.
            double cu0 = axis == 0 ? inv[0] : inv[1];
            double cu1 = axis == 0 ? inv[2] : inv[3];
            double cv0 = axis == 0 ? inv[1] : inv[0];
            double cv1 = axis == 0 ? inv[3] : inv[2];
            double Y = c - v(p);
            double A = cu0 * cu0 + cu1 * cu1;
            double B = (cu0 * cv0 + cu1 * cv1) * Y;
            double C = (cv0 * cv0 + cv1 * cv1) * Y * Y - radius * radius;
            double disc = B * B - A * C;
            double base = u(p);
            if (kind == Kind::Ellipse) {
                if (disc < 0.0) return;
                double sq = std::sqrt(disc);
                out.push_back({base + (-B - sq) / A, base + (-B + sq) / A});
            } else {
                if (disc <= 0.0) {
                    out.push_back({-kInf, kInf});
                    return;
                }
                double sq = std::sqrt(disc);
                out.push_back({-kInf, base + (-B - sq) / A});
                out.push_back({base + (-B + sq) / A, kInf});
            }
            return;
        }
        case Kind::PolygonRegion:
        case Kind::PolygonExterior: {
            std::vector<double> xs;
            polygon_crossings(poly, axis, c, xs);
            if (kind == Kind::PolygonRegion) {
                for (std::size_t i = 0; i + 1 < xs.size(); i += 2) out.push_back({xs[i], xs[i + 1]});
            } else {
                double prev = -kInf;
                for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
                    out.push_back({prev, xs[i]});
                    prev = xs[i + 1];
                }
                out.push_back({prev, kInf});
            }
            return;
        }
        case Kind::Segment: {
            double va = v(p), vb = v(q);
            if (va == vb) {
                if (va == c) out.push_back({std::min(u(p), u(q)), std::max(u(p), u(q))});
                return;
            }
            double s = (c - va) / (vb - va);
            if (s < 0.0 || s > 1.0) return;
            double x = u(p) + s * (u(q) - u(p));
            out.push_back({x, x});
            return;
        }
        case Kind::Ray: {
            double dv = v(q), du = u(q);
            if (dv == 0.0) {
                if (v(p) == c) {
                    if (du > 0.0) out.push_back({u(p), kInf});
                    else out.push_back({-kInf, u(p)});
                }
                return;
            }
            double s = (c - v(p)) / dv;
            if (s < 0.0) return;
            double x = u(p) + s * du;
            out.push_back({x, x});
            return;
        }
        case Kind::HalfPlaneClosed: {
            // (x - px) nu + (c - pv) nv >= 0 along the line.
            double nu = u(q), nv = v(q);
            double rest = (c - v(p)) * nv;
            if (nu == 0.0) {
                if (rest >= 0.0) out.push_back({-kInf, kInf});
                return;
            }
            double x = u(p) - rest / nu;
            if (nu > 0.0) out.push_back({x, kInf});
            else out.push_back({-kInf, x});
            return;
        }
        case Kind::Point:
            if (v(p) == c) out.push_back({u(p), u(p)});
            return;
    }
}

Box Primitive::bbox() const {
    Box b;
    switch (kind) {
        case Kind::Ellipse: {
            double ex = radius * std::hypot(m[0], m[1]);
            double ey = radius * std::hypot(m[2], m[3]);
            return {p.real() - ex, p.imag() - ey, p.real() + ex, p.imag() + ey};
        }
        case Kind::PolygonRegion:
            for (Complex z : poly) b.add(z);
            return b;
        case Kind::Segment:
            b.add(p);
            b.add(q);
            return b;
        case Kind::Point:
            b.add(p);
            return b;
        case Kind::Ray:
            b.add(p);
            if (q.real() > 0) b.x1 = kInf;
            if (q.real() < 0) b.x0 = -kInf;
            if (q.imag() > 0) b.y1 = kInf;
            if (q.imag() < 0) b.y0 = -kInf;
            return b;
        default: return {-kInf, -kInf, kInf, kInf};
    }
}

Primitive Primitive::transformed(const AffineMap& f) const {
    Primitive out = *this;
    switch (kind) {
        case Kind::Ellipse:
        case Kind::EllipseExterior: {
            double L[4] = {f.a.real() + f.b.real(), f.b.imag() - f.a.imag(),
                           f.a.imag() + f.b.imag(), f.a.real() - f.b.real()};
            out.p = f(p);
            out.m[0] = L[0] * m[0] + L[1] * m[2];
            out.m[1] = L[0] * m[1] + L[1] * m[3];
            out.m[2] = L[2] * m[0] + L[3] * m[2];
            out.m[3] = L[2] * m[1] + L[3] * m[3];
            return out;
        }
        case Kind::PolygonRegion:
        case Kind::PolygonExterior:
            for (Complex& z : out.poly) z = f(z);
            return out;
        case Kind::Segment:
            out.p = f(p);
            out.q = f(q);
            return out;
        case Kind::Ray: {
            Complex d = f.linear(q);
            out.p = f(p);
            out.q = d / std::abs(d);
            return out;
        }
        case Kind::HalfPlaneClosed: {
            Complex tangent = f.linear(Complex(0.0, 1.0) * q);
            Complex n = Complex(0.0, 1.0) * tangent;
            n /= std::abs(n);
            Complex probe = f.linear(q);
            if ((probe * std::conj(n)).real() < 0.0) n = -n;
            out.p = f(p);
            out.q = n;
            return out;
        }
        case Kind::Point: out.p = f(p); return out;
    }
    return out;
}

double Primitive::area() const {
    switch (kind) {
        case Kind::Ellipse: return kPi * radius * radius * std::abs(m[0] * m[3] - m[1] * m[2]);
        case Kind::PolygonRegion: return std::abs(signed_area(poly));
        case Kind::Segment:
        case Kind::Ray:
        case Kind::Point: return 0.0;
        default: return kInf;
    }
}

double Primitive::distance(Complex z) const {
    switch (kind) {
        case Kind::Ellipse:
        case Kind::EllipseExterior:
            if (contains(z)) return 0.0;
            return ellipse_boundary_min(*this, [z](Complex w) { return std::abs(w - z); });
        case Kind::PolygonRegion:
        case Kind::PolygonExterior:
        case Kind::HalfPlaneClosed:
            if (contains(z)) return 0.0;
            [[fallthrough]];
        default: {
            double best = kInf;
            for (const Piece& pc : pieces_of(*this)) best = std::min(best, piece_point_distance(pc, z));
            return best;
        }
    }
}

std::vector<Complex> Primitive::boundary_samples(int n) const {
    std::vector<Complex> out;
    switch (kind) {
        case Kind::Ellipse:
        case Kind::EllipseExterior:
            for (int i = 0; i < n; ++i) {
                double th = 2.0 * kPi * i / n;
                out.push_back(p + mat_apply(m, Complex(radius * std::cos(th), radius * std::sin(th))));
            }
            return out;
        case Kind::PolygonRegion:
        case Kind::PolygonExterior: {
            std::size_t k = poly.size();
            int per = std::max(1, n / static_cast<int>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (int j = 0; j < per; ++j)
                    out.push_back(poly[i] + (poly[(i + 1) % k] - poly[i]) * (double(j) / per));
            return out;
        }
        case Kind::Segment:
            for (int i = 0; i <= n; ++i) out.push_back(p + (q - p) * (double(i) / n));
            return out;
        default: return {p};
    }
}

double set_distance(const Primitive& a, const Primitive& b) {
    for (Complex z : interior_anchors(a))
        if (b.contains(z)) return 0.0;
    for (Complex z : interior_anchors(b))
        if (a.contains(z)) return 0.0;
    if (!a.linear()) return ellipse_boundary_min(a, [&b](Complex w) { return b.distance(w); });
    if (!b.linear()) return ellipse_boundary_min(b, [&a](Complex w) { return a.distance(w); });
    double best = kInf;
    auto pa = pieces_of(a);
    auto pb = pieces_of(b);
    for (const Piece& x : pa)
        for (const Piece& y : pb) best = std::min(best, piece_distance(x, y));
    return best;
}

Box RingGeometry::inner_bbox() const {
    Box b;
    for (const auto& pr : inner) b.add(pr.bbox());
    return b;
}

Box RingGeometry::outer_bbox() const {
    if (!infinity_in_domain) return Box{};
    Box b;
    for (const auto& pr : outer) b.add(pr.bbox());
    return b;
}

bool RingGeometry::in_inner(Complex z) const {
    for (const auto& pr : inner)
        if (pr.contains(z)) return true;
    return false;
}

bool RingGeometry::in_outer(Complex z) const {
    for (const auto& pr : outer)
        if (pr.contains(z)) return true;
    return false;
}

Polygon ft_image_boundary(const Polygon& base_outer, Complex puncture, double t, int per_edge) {
    Polygon out;
    std::size_t n = base_outer.size();
    out.reserve(n * per_edge);
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = base_outer[i];
        Complex b = base_outer[(i + 1) % n];
        for (int j = 0; j < per_edge; ++j) {
            Complex w = a + (b - a) * (double(j) / per_edge) - puncture;
            double r = std::abs(w);
            out.push_back(puncture + w * ((r + std::sqrt(r * r + t * t)) / r));
        }
    }
    return out;
}

namespace detail {

// Components of a ring without degeneracy checks. Degenerate components are encoded as
// a Point inner primitive or an empty outer list.
RingGeometry components(const RingDomain& d) {
    RingGeometry g;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Annulus>) {
                g.inner.push_back(Primitive::ellipse(k.center, k.r, false));
                g.outer.push_back(Primitive::ellipse(k.center, k.R, true));
            } else if constexpr (std::is_same_v<T, Teichmuller>) {
                g.inner.push_back(Primitive::segment(-1.0, 0.0));
                g.outer.push_back(Primitive::ray(k.s, 1.0));
            } else if constexpr (std::is_same_v<T, Grotzsch>) {
                g.inner.push_back(Primitive::ellipse(0.0, 1.0, false));
                g.outer.push_back(Primitive::ray(k.s, 1.0));
            } else if constexpr (std::is_same_v<T, SlitStrip>) {
                g.inner.push_back(Primitive::segment(-k.s, k.s));
                g.outer.push_back(Primitive::half_plane(Complex(0, 1), Complex(0, 1)));
                g.outer.push_back(Primitive::half_plane(Complex(0, -1), Complex(0, -1)));
            } else if constexpr (std::is_same_v<T, RealSlitRing>) {
                auto at = [&](double x) { return k.origin + k.direction * x; };
                auto arc_prims = [&](const Arc& a) {
                    std::vector<Primitive> out;
                    if (!arc_has_infinity(a)) {
                        out.push_back(Primitive::segment(at(a.from.value), at(a.to.value)));
                    } else {
                        if (!a.to.infinite) out.push_back(Primitive::ray(at(a.to.value), -k.direction));
                        if (!a.from.infinite) out.push_back(Primitive::ray(at(a.from.value), k.direction));
                    }
                    return out;
                };
                bool inf1 = arc_has_infinity(k.arc1);
                bool inf2 = arc_has_infinity(k.arc2);
                if (inf1) {
                    g.inner = arc_prims(k.arc2);
                    g.outer = arc_prims(k.arc1);
                } else {
                    g.inner = arc_prims(k.arc1);
                    g.outer = arc_prims(k.arc2);
                    g.infinity_in_domain = !inf2;
                }
            } else if constexpr (std::is_same_v<T, PolygonalRing>) {
                g.inner.push_back(Primitive::polygon(k.inner, false));
                g.outer.push_back(Primitive::polygon(k.outer, true));
            } else if constexpr (std::is_same_v<T, PuncturedDomain>) {
                g.inner.push_back(Primitive::point(k.puncture));
                if (auto poly = std::get_if<Polygon>(&k.outer)) {
                    g.outer.push_back(Primitive::polygon(*poly, true));
                } else {
                    const auto& h = std::get<HalfPlane>(k.outer);
                    // Closed complement of the open half-plane.
                    g.outer.push_back(Primitive::half_plane(h.point, -h.normal));
                }
            } else if constexpr (std::is_same_v<T, ExteriorDomain>) {
                g.inner.push_back(Primitive::polygon(k.hole, false));
            } else if constexpr (std::is_same_v<T, AffineImage>) {
                RingGeometry b = components(*k.base);
                g.infinity_in_domain = b.infinity_in_domain;
                for (const auto& pr : b.inner) g.inner.push_back(pr.transformed(k.map));
                for (const auto& pr : b.outer) g.outer.push_back(pr.transformed(k.map));
            } else if constexpr (std::is_same_v<T, FtImage>) {
                const auto& pd = std::get<PuncturedDomain>(k.base->kind());
                const auto& poly = std::get<Polygon>(pd.outer);
                g.inner.push_back(Primitive::ellipse(pd.puncture, k.t, false));
                g.outer.push_back(
                    Primitive::polygon(ft_image_boundary(poly, pd.puncture, k.t, 256), true));
            }
        },
        d.kind());
    return g;
}

}  // namespace detail

RingGeometry compile_geometry(const RingDomain& d) {
    if (d.degenerate_inner())
        throw DomainError("degenerate", "inner complement component is a single point");
    if (d.degenerate_outer())
        throw DomainError("degenerate", "outer complement component is the point at infinity");
    return detail::components(d);
}

RingGeometry ring_components(const RingDomain& d) { return detail::components(d); }

double boundary_distance(const RingDomain& d, Complex z) {
    RingGeometry g = detail::components(d);
    double best = kInf;
    for (const auto& pr : g.inner) best = std::min(best, pr.distance(z));
    for (const auto& pr : g.outer) best = std::min(best, pr.distance(z));
    return best;
}

bool domain_contains(const RingDomain& d, Complex z) {
    RingGeometry g = detail::components(d);
    return !g.in_inner(z) && !g.in_outer(z);
}

}  // namespace ringmap

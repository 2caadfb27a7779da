#include "ringmap/domain.hpp"

#include <algorithm>
#include <cmath>

#include "ringmap/errors.hpp"
#include "ringmap/geometry.hpp"

namespace ringmap {

namespace detail {
RingGeometry components(const RingDomain& d);
}

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError("invalid", msg);
}

double orient(Complex a, Complex b, Complex c) {
    Complex u = b - a, v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
}

bool on_segment(Complex a, Complex b, Complex p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
        return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

void validate_polygon(const Polygon& p, const std::string& name) {
    require(p.size() >= 3, name + " polygon needs at least 3 vertices");
    for (Complex z : p) require(finite(z), name + " polygon has a non-finite vertex");
    require(std::abs(signed_area(p)) > 0.0, name + " polygon has zero area");
    require(polygon_is_simple(p), name + " polygon is self-intersecting");
}

double polygon_boundary_distance(const Polygon& p, Complex z) {
    double best = kInf;
    for (std::size_t i = 0; i < p.size(); ++i)
        best = std::min(best, point_segment_distance(z, p[i], p[(i + 1) % p.size()]));
    return best;
}

}  // namespace

bool AffineMap::invertible() const {
    double d = det();
    double scale = std::norm(a) + std::norm(b);
    return std::isfinite(d) && scale > 0.0 && std::abs(d) > 1e-14 * scale;
}

AffineMap AffineMap::inverse() const {
    if (!invertible()) throw DomainError("non_invertible", "affine map has zero determinant");
    double d = det();
    AffineMap r;
    r.a = std::conj(a) / d;
    r.b = -b / d;
    r.c = -(std::conj(a) * c - b * std::conj(c)) / d;
    return r;
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
    AffineMap r;
    r.a = f.a * g.a + f.b * std::conj(g.b);
    r.b = f.a * g.b + f.b * std::conj(g.a);
    r.c = f.a * g.c + f.b * std::conj(g.c) + f.c;
    return r;
}

double ext_angle(const ExtReal& x) { return x.infinite ? kPi : 2.0 * std::atan(x.value); }

bool arc_has_infinity(const Arc& a) {
    return a.from.infinite || a.to.infinite || a.from.value > a.to.value;
}

bool arc_contains(const Arc& a, const ExtReal& x) {
    double t0 = ext_angle(a.from), t1 = ext_angle(a.to), t = ext_angle(x);
    auto wrap = [](double v) {
        while (v < 0) v += 2 * kPi;
        while (v >= 2 * kPi) v -= 2 * kPi;
        return v;
    };
    // The arc runs counterclockwise (upward on the line) from t0 to t1.
    double span = wrap(t1 - t0);
    if (a.from.infinite && a.to.infinite) span = 0.0;
    return wrap(t - t0) <= span;
}

RingDomain RingDomain::annulus(double r, double R, Complex center) {
    require(std::isfinite(r) && std::isfinite(R) && r > 0 && r < R, "annulus needs 0 < r < R < inf");
    require(finite(center), "annulus center must be finite");
    return RingDomain(Annulus{r, R, center});
}

RingDomain RingDomain::teichmuller(double s) {
    require(std::isfinite(s) && s > 0, "teichmuller parameter must be positive");
    return RingDomain(Teichmuller{s});
}

RingDomain RingDomain::grotzsch(double s) {
    require(std::isfinite(s) && s > 1, "grotzsch parameter must exceed 1");
    return RingDomain(Grotzsch{s});
}

RingDomain RingDomain::slit_strip(double s) {
    require(std::isfinite(s) && s > 0, "slit strip half-length must be positive");
    return RingDomain(SlitStrip{s});
}

RingDomain RingDomain::real_slit_ring(Arc arc1, Arc arc2, Complex origin, Complex direction) {
    require(finite(origin) && finite(direction) && std::abs(direction) > 0,
            "slit line needs a finite origin and nonzero direction");
    for (const Arc* a : {&arc1, &arc2}) {
        require(!(a->from == a->to), "arc endpoints coincide");
        require(a->from.infinite || std::isfinite(a->from.value), "arc endpoint not finite");
        require(a->to.infinite || std::isfinite(a->to.value), "arc endpoint not finite");
    }
    require(!(arc1.from.infinite && arc1.to.infinite) && !(arc2.from.infinite && arc2.to.infinite),
            "arc reduces to the point at infinity");
    bool overlap = arc_contains(arc1, arc2.from) || arc_contains(arc1, arc2.to) ||
                   arc_contains(arc2, arc1.from) || arc_contains(arc2, arc1.to);
    if (overlap) throw DomainError("arcs_overlap", "complement arcs overlap or share an endpoint");
    return RingDomain(RealSlitRing{arc1, arc2, origin, direction / std::abs(direction)});
}

RingDomain RingDomain::polygonal(Polygon outer, Polygon inner) {
    validate_polygon(outer, "outer");
    validate_polygon(inner, "inner");
    for (Complex z : inner)
        require(point_in_polygon(outer, z) && polygon_boundary_distance(outer, z) > 0,
                "inner polygon must lie strictly inside the outer polygon");
    for (std::size_t i = 0; i < inner.size(); ++i)
        for (std::size_t j = 0; j < outer.size(); ++j)
            require(!segments_intersect(inner[i], inner[(i + 1) % inner.size()], outer[j],
                                        outer[(j + 1) % outer.size()]),
                    "polygon boundaries intersect");
    return RingDomain(PolygonalRing{std::move(outer), std::move(inner)});
}

RingDomain RingDomain::punctured(Polygon outer, Complex puncture) {
    validate_polygon(outer, "outer");
    require(finite(puncture) && point_in_polygon(outer, puncture) &&
                polygon_boundary_distance(outer, puncture) > 0,
            "puncture must lie strictly inside the outer polygon");
    return RingDomain(PuncturedDomain{std::move(outer), puncture});
}

RingDomain RingDomain::punctured(HalfPlane outer, Complex puncture) {
    require(finite(outer.point) && finite(outer.normal) && std::abs(outer.normal) > 0,
            "half-plane needs a finite point and nonzero normal");
    outer.normal /= std::abs(outer.normal);
    require(finite(puncture) && ((puncture - outer.point) * std::conj(outer.normal)).real() > 0,
            "puncture must lie strictly inside the half-plane");
    return RingDomain(PuncturedDomain{outer, puncture});
}

RingDomain RingDomain::exterior(Polygon hole) {
    validate_polygon(hole, "hole");
    return RingDomain(ExteriorDomain{std::move(hole)});
}

RingDomain RingDomain::affine_image(const RingDomain& base, const AffineMap& map) {
    if (!map.invertible()) throw DomainError("non_invertible", "affine map has zero determinant");
    RingDomain r(AffineImage{std::make_shared<const RingDomain>(base), map});
    r.declared_bounded_ = base.declared_bounded_;
    return r;
}

RingDomain RingDomain::ft_image(const RingDomain& base, double t) {
    const auto* pd = base.as<PuncturedDomain>();
    require(pd != nullptr && std::holds_alternative<Polygon>(pd->outer),
            "F_t image needs a punctured polygon");
    require(std::isfinite(t) && t > 0, "F_t parameter must be positive");
    return RingDomain(FtImage{std::make_shared<const RingDomain>(base), t});
}

std::string RingDomain::kind_name() const {
    static const char* names[] = {"annulus",   "teichmuller", "grotzsch",     "slit_strip",
                                  "real_slit_ring", "polygonal", "punctured", "exterior",
                                  "affine_image", "ft_image"};
    return names[kind_.index()];
}

bool RingDomain::complement_bounded() const {
    if (declared_bounded_) return true;
    if (as<ExteriorDomain>()) return true;
    if (const auto* ai = as<AffineImage>()) return ai->base->complement_bounded();
    return false;
}

RingDomain RingDomain::with_declared_complement_bounded(bool flag) const {
    RingDomain r = *this;
    r.declared_bounded_ = flag;
    return r;
}

bool RingDomain::degenerate_inner() const {
    if (as<PuncturedDomain>()) return true;
    if (const auto* ai = as<AffineImage>()) return ai->base->degenerate_inner();
    return false;
}

bool RingDomain::degenerate_outer() const {
    if (as<ExteriorDomain>()) return true;
    if (const auto* ai = as<AffineImage>()) return ai->base->degenerate_outer();
    return false;
}

std::string to_string(ModulusMethod m) {
    switch (m) {
        case ModulusMethod::ClosedForm: return "closed-form";
        case ModulusMethod::GridSolver: return "grid-solver";
        case ModulusMethod::Optimized: return "optimized";
        case ModulusMethod::BoundOnly: return "bound-only";
    }
    return "unknown";
}

RingDomain apply_affine(const AffineMap& phi, const RingDomain& d) {
    if (!phi.invertible()) throw DomainError("non_invertible", "affine map has zero determinant");
    RingDomain out = std::visit(
        [&](const auto& k) -> RingDomain {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Annulus>) {
                if (phi.holomorphic())
                    return RingDomain::annulus(std::abs(phi.a) * k.r, std::abs(phi.a) * k.R, phi(k.center));
                if (phi.antiholomorphic())
                    return RingDomain::annulus(std::abs(phi.b) * k.r, std::abs(phi.b) * k.R, phi(k.center));
                return RingDomain::affine_image(d, phi);
            } else if constexpr (std::is_same_v<T, Teichmuller>) {
                RingDomain rs = RingDomain::real_slit_ring({ExtReal::finite(-1), ExtReal::finite(0)},
                                                           {ExtReal::finite(k.s), ExtReal::infinity()});
                return apply_affine(phi, rs);
            } else if constexpr (std::is_same_v<T, RealSlitRing>) {
                Complex L = phi.linear(k.direction);
                double scale = std::abs(L);
                auto sc = [scale](Arc a) {
                    if (!a.from.infinite) a.from.value *= scale;
                    if (!a.to.infinite) a.to.value *= scale;
                    return a;
                };
                return RingDomain::real_slit_ring(sc(k.arc1), sc(k.arc2), phi(k.origin), L / scale);
            } else if constexpr (std::is_same_v<T, PolygonalRing>) {
                Polygon o = k.outer, i = k.inner;
                for (Complex& z : o) z = phi(z);
                for (Complex& z : i) z = phi(z);
                return RingDomain::polygonal(std::move(o), std::move(i));
            } else if constexpr (std::is_same_v<T, PuncturedDomain>) {
                if (const auto* poly = std::get_if<Polygon>(&k.outer)) {
                    Polygon o = *poly;
                    for (Complex& z : o) z = phi(z);
                    return RingDomain::punctured(std::move(o), phi(k.puncture));
                }
                const auto& h = std::get<HalfPlane>(k.outer);
                Primitive hp = Primitive::half_plane(h.point, h.normal).transformed(phi);
                return RingDomain::punctured(HalfPlane{hp.p, hp.q}, phi(k.puncture));
            } else if constexpr (std::is_same_v<T, ExteriorDomain>) {
                Polygon h = k.hole;
                for (Complex& z : h) z = phi(z);
                return RingDomain::exterior(std::move(h));
            } else if constexpr (std::is_same_v<T, AffineImage>) {
                return RingDomain::affine_image(*k.base, compose(phi, k.map));
            } else {
                return RingDomain::affine_image(d, phi);
            }
        },
        d.kind());
    return out.with_declared_complement_bounded(d.declared_complement_bounded());
}

ComplementAreas complement_areas(const RingDomain& d) {
    return std::visit(
        [&](const auto& k) -> ComplementAreas {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Annulus>) {
                return {kPi * k.r * k.r, kPi * (k.R * k.R - k.r * k.r)};
            } else if constexpr (std::is_same_v<T, Grotzsch>) {
                return {kPi, kInf};
            } else if constexpr (std::is_same_v<T, PolygonalRing>) {
                double ai = std::abs(signed_area(k.inner));
                return {ai, std::abs(signed_area(k.outer)) - ai};
            } else if constexpr (std::is_same_v<T, PuncturedDomain>) {
                if (const auto* poly = std::get_if<Polygon>(&k.outer))
                    return {0.0, std::abs(signed_area(*poly))};
                return {0.0, kInf};
            } else if constexpr (std::is_same_v<T, ExteriorDomain>) {
                return {std::abs(signed_area(k.hole)), kInf};
            } else if constexpr (std::is_same_v<T, AffineImage>) {
                ComplementAreas b = complement_areas(*k.base);
                double f = std::abs(k.map.det());
                return {b.bounded * f, b.domain * f};
            } else if constexpr (std::is_same_v<T, FtImage>) {
                const auto& pd = std::get<PuncturedDomain>(k.base->kind());
                Polygon img = ft_image_boundary(std::get<Polygon>(pd.outer), pd.puncture, k.t, 256);
                double inner = kPi * k.t * k.t;
                return {inner, std::abs(signed_area(img)) - inner};
            } else if constexpr (std::is_same_v<T, RealSlitRing>) {
                return {0.0, kInf};
            } else {
                // Teichmuller and slit strip: segment complements, unbounded domain.
                return {0.0, kInf};
            }
        },
        d.kind());
}

WidthSeparation width_and_separation(const RingDomain& d) {
    WidthSeparation ws;
    if (const auto* a = d.as<Annulus>()) {
        ws.width = ws.diameter = 2 * a->r;
        ws.separation = a->R - a->r;
        ws.width_positive = true;
        return ws;
    }
    if (const auto* g = d.as<Grotzsch>()) {
        ws.width = ws.diameter = 2.0;
        ws.separation = g->s - 1.0;
        ws.width_positive = true;
        return ws;
    }
    if (const auto* t = d.as<Teichmuller>()) {
        ws.diameter = 1.0;
        ws.separation = t->s;
        ws.collinear = true;
        return ws;
    }
    RingGeometry g = detail::components(d);
    const Primitive& in = g.inner.front();
    using K = Primitive::Kind;
    switch (in.kind) {
        case K::Ellipse: {
            // Singular values of the 2x2 shape matrix.
            double a = in.m[0], b = in.m[1], c = in.m[2], e = in.m[3];
            double s1 = a * a + b * b + c * c + e * e;
            double det = std::abs(a * e - b * c);
            double disc = std::sqrt(std::max(0.0, s1 * s1 / 4 - det * det));
            double smax = std::sqrt(s1 / 2 + disc);
            double smin = det / smax;
            ws.width = 2 * in.radius * smin;
            ws.diameter = 2 * in.radius * smax;
            break;
        }
        case K::PolygonRegion: {
            Polygon hull = convex_hull(in.poly);
            ws.width = convex_polygon_width(hull);
            for (Complex p : hull)
                for (Complex q : hull) ws.diameter = std::max(ws.diameter, std::abs(p - q));
            break;
        }
        case K::Segment: ws.diameter = std::abs(in.q - in.p); break;
        default: break;
    }
    ws.width_positive = ws.width > 0.0;
    ws.collinear = d.as<RealSlitRing>() != nullptr;
    if (const auto* ai = d.as<AffineImage>()) {
        const RingDomain* b = ai->base.get();
        while (const auto* bi = b->as<AffineImage>()) b = bi->base.get();
        ws.collinear = b->as<RealSlitRing>() || b->as<Teichmuller>();
    }
    ws.separation = kInf;
    for (const auto& o : g.outer) ws.separation = std::min(ws.separation, set_distance(in, o));
    return ws;
}

double signed_area(const Polygon& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Complex a = p[i], b = p[(i + 1) % p.size()];
        s += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * s;
}

bool polygon_is_simple(const Polygon& p) {
    std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] == p[(i + 1) % n]) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            Complex a = p[i], b = p[(i + 1) % n], c = p[j], e = p[(j + 1) % n];
            if (adjacent) {
                // Adjacent edges may only share their common vertex.
                Complex shared = (j == i + 1) ? b : a;
                Complex other1 = (j == i + 1) ? a : b;
                Complex other2 = (j == i + 1) ? e : c;
                if (orient(other1, shared, other2) == 0.0 &&
                    ((other1 - shared) * std::conj(other2 - shared)).real() > 0)
                    return false;
                continue;
            }
            if (segments_intersect(a, b, c, e)) return false;
        }
    }
    return true;
}

bool point_in_polygon(const Polygon& p, Complex z) {
    bool in = false;
    std::size_t n = p.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Complex a = p[i], b = p[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (z.real() < x) in = !in;
        }
    }
    return in;
}

Polygon convex_hull(std::vector<Complex> pts) {
    auto less = [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    Polygon h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && orient(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

double convex_polygon_width(const Polygon& hull) {
    if (hull.size() < 3) return 0.0;
    double best = kInf;
    std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = hull[i], b = hull[(i + 1) % n];
        double len = std::abs(b - a);
        double far = 0.0;
        for (Complex p : hull) far = std::max(far, std::abs(orient(a, b, p)) / len);
        best = std::min(best, far);
    }
    return best;
}

double point_segment_distance(Complex z, Complex p0, Complex p1) {
    Complex d = p1 - p0;
    double dd = std::norm(d);
    double s = dd > 0 ? std::clamp((std::conj(d) * (z - p0)).real() / dd, 0.0, 1.0) : 0.0;
    return std::abs(z - (p0 + s * d));
}

double segment_distance(Complex p0, Complex p1, Complex q0, Complex q1) {
    if (segments_intersect(p0, p1, q0, q1)) return 0.0;
    return std::min({point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1),
                     point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1)});
}

}  // namespace ringmap

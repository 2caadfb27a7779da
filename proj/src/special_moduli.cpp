#include "ringmap/special_moduli.hpp"

#include <cmath>

#include "ringmap/errors.hpp"

namespace ringmap {

namespace {

double agm(double a, double b) {
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

// Cross-ratio factor (x - y), with factors containing the point at infinity dropped.
struct CrossFactor {
    double value;
    bool dropped;
};

CrossFactor diff(const ExtReal& x, const ExtReal& y) {
    if (x.infinite || y.infinite) return {1.0, true};
    return {x.value - y.value, false};
}

const RingDomain* strip_affine(const RingDomain& d, bool* conformal) {
    const RingDomain* b = &d;
    *conformal = true;
    while (const auto* ai = b->as<AffineImage>()) {
        if (!ai->map.holomorphic() && !ai->map.antiholomorphic()) *conformal = false;
        b = ai->base.get();
    }
    return b;
}

}  // namespace

double complete_elliptic_K(double m) {
    if (!(m >= 0.0 && m < 1.0)) throw ModulusError("domain", "elliptic parameter must lie in [0,1)");
    return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

bool elliptic_K_diverging(double m) { return m > 1.0 - 1e-12; }

double grotzsch_mu(double r, double rc) {
    if (!(r > 0.0 && r < 1.0)) throw ModulusError("domain", "mu needs 0 < r < 1");
    if (r < 1e-8) return std::log(4.0 / r);
    return 0.5 * kPi * agm(1.0, rc) / agm(1.0, r);
}

double grotzsch_mu(double r) { return grotzsch_mu(r, std::sqrt((1.0 - r) * (1.0 + r))); }

double teichmuller_modulus(double s) {
    if (!(s > 0.0)) throw ModulusError("domain", "teichmuller parameter must be positive");
    if (s == kInf) return kInf;
    return 2.0 * grotzsch_mu(1.0 / std::sqrt(1.0 + s), std::sqrt(s / (1.0 + s)));
}

double grotzsch_modulus(double s) {
    if (!(s > 1.0)) throw ModulusError("domain", "grotzsch parameter must exceed 1");
    if (s == kInf) return kInf;
    return grotzsch_mu(1.0 / s, std::sqrt((s - 1.0) * (s + 1.0)) / s);
}

double teichmuller_parameter(const RingDomain& d) {
    if (const auto* t = d.as<Teichmuller>()) return t->s;
    const auto* rs = d.as<RealSlitRing>();
    if (!rs) throw ModulusError("not_slit_ring", "teichmuller_parameter needs a real slit ring");
    const ExtReal &a = rs->arc1.from, &b = rs->arc1.to, &c = rs->arc2.from, &e = rs->arc2.to;
    CrossFactor f[4] = {diff(c, a), diff(e, b), diff(c, b), diff(e, a)};
    double cr = f[0].value * f[1].value / (f[2].value * f[3].value);
    if (!(cr > 1.0) || !std::isfinite(cr))
        throw ModulusError("arcs_overlap", "arc endpoints are not in cyclic order");
    return 1.0 / (cr - 1.0);
}

bool has_closed_form(const RingDomain& d) {
    bool conformal = true;
    const RingDomain* b = strip_affine(d, &conformal);
    if (d.degenerate_inner() || d.degenerate_outer()) return true;
    if (b->as<Teichmuller>() || b->as<RealSlitRing>()) return true;
    if (!conformal) return false;
    return b->as<Annulus>() || b->as<Grotzsch>();
}

ExtendedModulus conformal_modulus_closed_form(const RingDomain& d) {
    if (d.degenerate_inner() || d.degenerate_outer()) return ExtendedModulus::infinity();
    bool conformal = true;
    const RingDomain* b = strip_affine(d, &conformal);
    if (const auto* t = b->as<Teichmuller>()) return ExtendedModulus::closed(teichmuller_modulus(t->s));
    if (b->as<RealSlitRing>())
        return ExtendedModulus::closed(teichmuller_modulus(teichmuller_parameter(*b)));
    if (conformal) {
        if (const auto* a = b->as<Annulus>()) return ExtendedModulus::closed(std::log(a->R / a->r));
        if (const auto* g = b->as<Grotzsch>()) return ExtendedModulus::closed(grotzsch_modulus(g->s));
    }
    throw ModulusError("no_closed_form", "no closed form for " + d.kind_name() + " rings");
}

ExtendedModulus carleman_modulus(const RingDomain& d) {
    ComplementAreas ar = complement_areas(d);
    if (ar.domain == kInf || ar.bounded == 0.0) return ExtendedModulus::infinity();
    return ExtendedModulus::closed(0.5 * std::log((ar.bounded + ar.domain) / ar.bounded));
}

std::optional<ExtendedModulus> width_bound(const RingDomain& d) {
    WidthSeparation ws = width_and_separation(d);
    ExtendedModulus out;
    out.method = ModulusMethod::BoundOnly;
    out.abs_error = 0.0;
    if (ws.collinear) {
        // Every affine image keeps the complement on one line, so the bound is the modulus.
        out.value = conformal_modulus_closed_form(d).value;
        return out;
    }
    if (!ws.width_positive) return std::nullopt;
    out.value = teichmuller_modulus(ws.separation / ws.width);
    return out;
}

}  // namespace ringmap

#include "ringmap/constructors.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ringmap/affine_modulus.hpp"
#include "ringmap/errors.hpp"
#include "ringmap/geometry.hpp"
#include "ringmap/special_moduli.hpp"

namespace ringmap {

namespace {

constexpr int kScanSamples = 64;

// Keeps boundary points on the upper side of a branch cut along the negative axis.
Complex upper(Complex z) { return z.imag() == 0.0 ? Complex(z.real(), 0.0) : z; }

template <class T>
constexpr bool always_false = false;

}  // namespace

Complex MobiusPre::operator()(Complex z) const {
    if (z == Complex(kInf, 0.0)) return c == Complex(0.0) ? Complex(kInf, 0.0) : a / c;
    Complex den = c * z + d;
    if (den == Complex(0.0)) return {kInf, 0.0};
    return (a * z + b) / den;
}

double ShearAnalytic::b() const { return std::tan(kPi * a); }

double ShearAnalytic::scale() const { return a == 0.0 ? 1.0 : std::tan(kPi * a) / (kPi * a); }

Complex ShearAnalytic::f(Complex z) const {
    z = upper(z);
    if (z.imag() < 0.0) throw ConstructionError("lower_half", "f is defined on the upper half-plane");
    if (a == 0.0) return z;
    if (z == Complex(0.0)) return 0.0;
    // Real and imaginary parts separately; tanh-sinh absorbs the algebraic endpoint behaviour.
    auto integrate = [](auto&& g) {
        static boost::math::quadrature::tanh_sinh<double> ts;
        double er = 0.0, ei = 0.0;
        double re = ts.integrate([&](double u) { return g(u).real(); }, 0.0, 1.0, 1e-16, &er);
        double im = ts.integrate([&](double u) { return g(u).imag(); }, 0.0, 1.0, 1e-16, &ei);
        Complex I(re, im);
        if (!(er + ei <= 1e-10 * std::max(1.0, std::abs(I))))
            throw ConstructionError("quadrature", "Schwarz-Christoffel quadrature did not converge");
        return I;
    };
    if (z.real() < -0.5) {
        // From -1 along the segment: w + 1 = (z + 1) u^q, q = 1/(1+a), makes (w+1)^a dw smooth,
        // f(z) = f(-1) + A q (z + 1)^(1+a) int_0^1 w^-a du with f(-1) = -1 + i tan(pi a).
        const double q = 1.0 / (1.0 + a);
        Complex zp = upper(z + 1.0);
        if (zp == Complex(0.0)) return {-1.0, b()};
        auto integrand = [&](double u) { return std::pow(upper(-1.0 + zp * std::pow(u, q)), -a); };
        return Complex(-1.0, b()) + scale() * q * std::pow(zp, 1.0 + a) * integrate(integrand);
    }
    // w = z v^p with p = 1/(1-a) turns the w^-a endpoint singularity into a smooth integrand:
    // f(z) = A p z^(1-a) int_0^1 (1 + z v^p)^a dv.
    const double p = 1.0 / (1.0 - a);
    auto integrand = [&](double v) { return std::pow(upper(1.0 + z * std::pow(v, p)), a); };
    return scale() * p * std::pow(z, 1.0 - a) * integrate(integrand);
}

Complex ShearAnalytic::operator()(Complex z) const {
    Complex w = z.imag() < 0.0 ? std::conj(z) : z;
    return {f(w).real(), z.imag()};
}

Complex PowerShear::operator()(Complex z) const {
    z = upper(z);
    if (z.imag() == 0.0 && z.real() < 0.0) {
        // Both sides of the cut share Re z^alpha.
        return {std::pow(-z.real(), alpha) * std::cos(kPi * alpha), 0.0};
    }
    return {std::pow(z, alpha).real(), z.imag()};
}

Complex FtInverse::operator()(Complex zeta) const {
    Complex w = zeta - center;
    if (!(std::abs(w) > t)) throw ConstructionError("ft_range", "F_t^{-1} needs |zeta| > t");
    return center + 0.5 * (w - t * t / std::conj(w));
}

StageRole stage_role(const MapStage& s) {
    return std::visit(
        [](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, MobiusPre> || std::is_same_v<T, DelegatedConformal>)
                return StageRole::Conformal;
            else if constexpr (std::is_same_v<T, AffinePost>)
                return StageRole::Affine;
            else
                return StageRole::Harmonic;
        },
        s);
}

std::string stage_name(const MapStage& s) {
    return std::visit(
        [](const auto& st) -> std::string {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, MobiusPre>) return "mobius_pre";
            else if constexpr (std::is_same_v<T, DelegatedConformal>) return "delegated_conformal";
            else if constexpr (std::is_same_v<T, ShearAnalytic>) return "shear_analytic";
            else if constexpr (std::is_same_v<T, PowerShear>) return "power_shear";
            else if constexpr (std::is_same_v<T, FtInverse>) return "ft_inverse";
            else if constexpr (std::is_same_v<T, AffinePost>) return "affine_post";
            else static_assert(always_false<T>);
        },
        s);
}

void check_chain(const HarmonicMapSpec& spec) {
    int harmonic = 0, conformal = 0;
    StageRole last = StageRole::Conformal;
    for (const MapStage& s : spec.stages) {
        StageRole r = stage_role(s);
        if (r < last)
            throw ConstructionError("chain", "stage " + stage_name(s) + " is out of order");
        if (r == StageRole::Harmonic) ++harmonic;
        if (r == StageRole::Conformal) ++conformal;
        last = r;
    }
    if (harmonic > 1) throw ConstructionError("chain", "more than one harmonic stage");
    if (harmonic == 0 && conformal == 0) throw ConstructionError("chain", "no harmonic middle stage");
}

bool chain_legal(const HarmonicMapSpec& spec) {
    try {
        check_chain(spec);
        return true;
    } catch (const ConstructionError&) {
        return false;
    }
}

Complex evaluate_map(const HarmonicMapSpec& spec, Complex z, bool check_domain) {
    if (check_domain && !domain_contains(spec.source, z))
        throw ConstructionError("outside", "point is not in the source domain");
    for (const MapStage& s : spec.stages) {
        z = std::visit(
            [&](const auto& st) -> Complex {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, DelegatedConformal>)
                    throw ConstructionError("delegated", "stage is delegated: " + st.description);
                else if constexpr (std::is_same_v<T, AffinePost>)
                    return st.map(z);
                else
                    return st(z);
            },
            s);
    }
    return z;
}

Complex ft_forward(Complex z, double t) {
    if (!(t >= 0.0)) throw ConstructionError("ft_parameter", "t must be nonnegative");
    double r = std::abs(z);
    if (r == 0.0) throw ConstructionError("ft_origin", "F_t is undefined at 0");
    return z * ((r + std::hypot(r, t)) / r);
}

Complex ft_inverse(Complex zeta, double t) {
    if (!(t >= 0.0)) throw ConstructionError("ft_parameter", "t must be nonnegative");
    return FtInverse{t, 0.0}(zeta);
}

HarmonicMapSpec identity_map(const RingDomain& d) {
    HarmonicMapSpec spec;
    spec.stages.push_back(MobiusPre{});
    spec.source = d;
    spec.target = d;
    return spec;
}

double sc_endpoint(double a, double s) { return ShearAnalytic{a}.f(Complex(s, 0.0)).real(); }

HarmonicMapSpec sc_shear_map(double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) throw ConstructionError("parameter", "s and t must be positive");
    if (t < s) throw ConstructionError("parameter", "the shear construction needs t >= s");
    HarmonicMapSpec spec;
    spec.source = RingDomain::teichmuller(s);
    spec.target = RingDomain::teichmuller(t);
    double a = 0.0;
    if (t > s) {
        auto g = [&](double x) { return sc_endpoint(x, s) - t; };
        // Scan for the first sign change; the last samples crowd towards a = 1/2 where
        // the scale factor diverges.
        double lo = 0.0, hi = -1.0;
        for (int i = 1; i <= kScanSamples && hi < 0.0; ++i) {
            double x = i < kScanSamples / 2 ? 0.5 * i / (kScanSamples / 2)
                                            : 0.5 - std::ldexp(0.5, -(i - kScanSamples / 2 + 1));
            if (g(x) >= 0.0) hi = x;
            else lo = x;
        }
        if (hi < 0.0) throw ConstructionError("no_bracket", "no sign change of Re f(s) - t found");
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            double mid = 0.5 * (lo + hi);
            (g(mid) >= 0.0 ? hi : lo) = mid;
        }
        a = 0.5 * (lo + hi);
    }
    spec.stages.push_back(ShearAnalytic{a});
    spec.parameters = {{"s", s}, {"t", t}, {"a", a}, {"b", std::tan(kPi * a)}};
    return spec;
}

HarmonicMapSpec power_shear_map(double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) throw ConstructionError("parameter", "s and t must be positive");
    if (t > s) throw ConstructionError("parameter", "the power shear needs t <= s");
    double alpha = std::log1p(1.0 / t) / std::log1p(1.0 / s);
    if (alpha > 1.5)
        throw ConstructionError("exponent", "(t+1)/t exceeds ((s+1)/s)^(3/2); required alpha = " +
                                                std::to_string(alpha));
    HarmonicMapSpec spec;
    spec.source = RingDomain::teichmuller(s);
    spec.target = RingDomain::teichmuller(t);
    spec.stages.push_back(MobiusPre{s + 1.0, 0.0, 1.0, 1.0});
    spec.stages.push_back(PowerShear{alpha});
    double sa = std::pow(s, alpha), s1a = std::pow(s + 1.0, alpha);
    double den = s1a - sa;
    spec.stages.push_back(AffinePost{AffineMap{-1.0 / den, 0.0, sa / den}});
    spec.parameters = {{"s", s}, {"t", t}, {"alpha", alpha}, {"t_chain", sa / den}};
    return spec;
}

HarmonicMapSpec degenerate_target_map(const RingDomain& source, const RingDomain& target,
                                      const RootOptions& opts) {
    const auto* pd = target.as<PuncturedDomain>();
    if (!pd || !std::get_if<Polygon>(&pd->outer))
        throw ConstructionError("target", "target must be a polygon minus a point");
    ExtendedModulus ms = modulus_best(source, opts.solver);
    if (ms.infinite()) throw ConstructionError("source", "source modulus must be finite");
    const Polygon& poly = std::get<Polygon>(pd->outer);
    double d = kInf;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Primitive e = Primitive::segment(poly[i], poly[(i + 1) % poly.size()]);
        d = std::min(d, e.distance(pd->puncture));
    }

    int evaluations = 0;
    auto mod_at = [&](double t, const SolverOptions& o) {
        if (++evaluations > opts.max_evaluations + kScanSamples)
            throw ConstructionError("budget", "modulus evaluation budget exhausted");
        return modulus_best(RingDomain::ft_image(target, t), o);
    };
    SolverOptions scan = opts.solver;
    scan.levels = 1;
    // Mod F_t(target) runs from +inf (t -> 0) to 0 (t -> inf).
    double lo = -1.0, hi = -1.0;
    for (int i = 0; i < kScanSamples; ++i) {
        double t = d * std::pow(10.0, -3.0 + 6.0 * i / (kScanSamples - 1));
        if (mod_at(t, scan).value > ms.value) {
            lo = t;
        } else {
            hi = t;
            break;
        }
    }
    if (lo < 0.0 || hi < 0.0) throw ConstructionError("no_bracket", "no bracket for t found");
    double t = 0.5 * (lo + hi), mt = kInf;
    while (evaluations < opts.max_evaluations + kScanSamples) {
        t = std::sqrt(lo * hi);
        mt = mod_at(t, opts.solver).value;
        if (std::abs(mt - ms.value) <= opts.modulus_tolerance || hi / lo < 1 + 1e-9) break;
        (mt > ms.value ? lo : hi) = t;
    }
    HarmonicMapSpec spec;
    spec.source = source;
    spec.target = target;
    spec.stages.push_back(DelegatedConformal{"conformal map of the source onto F_t(target)"});
    spec.stages.push_back(FtInverse{t, pd->puncture});
    spec.residual = std::abs(mt - ms.value);
    spec.parameters = {{"t", t}, {"source_modulus", ms.value}, {"image_modulus", mt}};
    return spec;
}

Complex stretch_shear(double M, double psi) {
    if (!(M >= 1.0)) throw ConstructionError("parameter", "stretch factor must be at least 1");
    return std::polar((M - 1.0) / (M + 1.0), 2.0 * psi);
}

HarmonicMapSpec affine_rebalance(const RingDomain& source, const RingDomain& target, int budget,
                                 const RootOptions& opts) {
    if (target.complement_bounded())
        throw ConstructionError("bounded_complement", "target complement is bounded");
    if (width_and_separation(target).collinear)
        throw ConstructionError("collinear", "target complement lies on a line; use a shear map");
    ExtendedModulus ms = modulus_best(source, opts.solver);
    if (ms.infinite()) throw ConstructionError("source", "source modulus must be finite");

    int evaluations = 0;
    auto mod_at = [&](Complex k) {
        if (++evaluations > opts.max_evaluations)
            throw ConstructionError("budget", "modulus evaluation budget exhausted");
        return shear_modulus(target, k, opts.solver);
    };
    auto finish = [&](Complex k, const ExtendedModulus& mk) {
        HarmonicMapSpec spec;
        spec.source = source;
        spec.target = target;
        AffineMap phi = AffineMap::shear(k);
        spec.stages.push_back(DelegatedConformal{"conformal map of the source onto phi(target)"});
        spec.stages.push_back(AffinePost{phi.inverse()});
        spec.residual = std::abs(mk.value - ms.value);
        spec.parameters = {{"k_re", k.real()}, {"k_im", k.imag()}, {"source_modulus", ms.value},
                           {"image_modulus", mk.value}};
        return spec;
    };

    ExtendedModulus m0 = mod_at(0.0);
    if (std::abs(m0.value - ms.value) <= opts.modulus_tolerance) return finish(0.0, m0);
    Complex k_hi = 0.0;
    double eps = ms.error() + m0.error();
    if (!(m0.value - ms.value > eps)) {
        AffineModulusResult am = affine_modulus(target, budget);
        if (!(am.value.value - ms.value > ms.error() + am.value.error()))
            throw ConstructionError("not_certified", "affine modulus of the target does not exceed "
                                                     "the source modulus beyond error");
        k_hi = am.best_shear;
        if (!(mod_at(k_hi).value > ms.value))
            throw ConstructionError("not_certified", "no shear found above the source modulus");
    }

    // Stretch in the direction that lowers the modulus fastest, doubling M until it drops below.
    const int directions = 8;
    double psi_lo = 0.0, best = kInf;
    for (int i = 0; i < directions; ++i) {
        double psi = kPi * i / directions;
        double v = mod_at(stretch_shear(8.0, psi)).value;
        if (v < best) {
            best = v;
            psi_lo = psi;
        }
    }
    double M = 8.0;
    while (best >= ms.value) {
        M *= 2.0;
        if (M > 1e6) throw ConstructionError("no_bracket", "stretching did not lower the modulus");
        best = mod_at(stretch_shear(M, psi_lo)).value;
    }
    Complex k_lo = stretch_shear(M, psi_lo);

    double a = 0.0, b = 1.0;
    Complex k = k_hi;
    ExtendedModulus mk = m0;
    while (true) {
        double mid = 0.5 * (a + b);
        k = k_hi + mid * (k_lo - k_hi);
        mk = mod_at(k);
        if (std::abs(mk.value - ms.value) <= opts.modulus_tolerance || b - a < 1e-10) break;
        (mk.value > ms.value ? a : b) = mid;
    }
    return finish(k, mk);
}

}  // namespace ringmap

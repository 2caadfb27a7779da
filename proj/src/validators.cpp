#include "ringmap/validators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "ringmap/errors.hpp"
#include "ringmap/greens.hpp"

namespace ringmap {

namespace {

constexpr double kTiny = 1e-300;

struct Jacobian {
    Complex hx, hy;
    double det() const { return hx.real() * hy.imag() - hx.imag() * hy.real(); }
    Complex hz() const { return 0.5 * (hx - Complex(0.0, 1.0) * hy); }
    Complex hzbar() const { return 0.5 * (hx + Complex(0.0, 1.0) * hy); }
    double min_singular() const { return std::abs(std::abs(hz()) - std::abs(hzbar())); }
};

Jacobian jacobian(const PlaneMap& map, Complex z, double h) {
    Complex dx(h, 0.0), dy(0.0, h);
    return {(map(z + dx) - map(z - dx)) / (2.0 * h), (map(z + dy) - map(z - dy)) / (2.0 * h)};
}

// Finite boundary points of a primitive; rays are sampled geometrically out to 100 units.
std::vector<Complex> boundary_points(const Primitive& pr, int n) {
    if (pr.kind != Primitive::Kind::Ray) return pr.boundary_samples(n);
    std::vector<Complex> out{pr.p};
    for (int i = 0; i < n; ++i) out.push_back(pr.p + pr.q * (1e-3 * std::pow(1e5, double(i) / n)));
    return out;
}

double complement_distance(const RingGeometry& g, Complex z) {
    double best = kInf;
    for (const auto& pr : g.inner) best = std::min(best, pr.distance(z));
    for (const auto& pr : g.outer) best = std::min(best, pr.distance(z));
    return best;
}

}  // namespace

Box sampling_region(const RingDomain& d) {
    RingGeometry g = ring_components(d);
    Box outer = g.outer_bbox();
    if (!outer.empty() && outer.bounded()) return outer;
    Box in = g.inner_bbox();
    double diag = std::hypot(in.x1 - in.x0, in.y1 - in.y0);
    double sep = 0.0;
    for (const auto& a : g.inner)
        for (const auto& b : g.outer) sep = std::max(sep, set_distance(a, b));
    double pad = std::max({diag, sep, 1.0});
    return in.padded(pad);
}

std::vector<Complex> sample_domain(const RingDomain& d, int n, std::uint64_t seed, double margin,
                                   std::optional<Box> region) {
    if (n < 0) throw ValidationError("samples", "sample count must be non-negative");
    Box box = region ? *region : sampling_region(d);
    if (!box.bounded()) throw ValidationError("region", "sampling window must be bounded");
    RingGeometry g = ring_components(d);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    long attempts = 0;
    const long limit = 1000L * std::max(n, 1);
    while (static_cast<int>(out.size()) < n) {
        if (++attempts > limit)
            throw ValidationError("sampling", "too few sample points at the requested margin");
        Complex z(ux(rng), uy(rng));
        if (g.in_inner(z) || g.in_outer(z)) continue;
        if (complement_distance(g, z) < margin) continue;
        out.push_back(z);
    }
    return out;
}

double check_harmonic(const PlaneMap& map, const RingDomain& d, int samples, double step,
                      std::uint64_t seed) {
    Box box = sampling_region(d);
    double scale = std::max(box.x1 - box.x0, box.y1 - box.y0);
    RingGeometry g = ring_components(d);
    double worst = 0.0;
    for (Complex z : sample_domain(d, samples, seed, 1e-3 * scale, box)) {
        double h = std::min(step, complement_distance(g, z) / 10.0);
        Complex c = map(z);
        auto stencil = [&](double k) {
            Complex dx(k, 0.0), dy(0.0, k);
            Complex e = map(z + dx), w = map(z - dx), n = map(z + dy), s = map(z - dy);
            return std::array<Complex, 3>{(e + w + n + s - 4.0 * c) / (k * k), (e - w) / (2.0 * k),
                                          (n - s) / (2.0 * k)};
        };
        // Step halving cancels the h^2 term, which dominates near slit tips and corners.
        auto coarse = stencil(h), fine = stencil(0.5 * h);
        Complex lap = (4.0 * fine[0] - coarse[0]) / 3.0;
        Complex gx = fine[1], gy = fine[2];
        double gu = std::hypot(gx.real(), gy.real()), gv = std::hypot(gx.imag(), gy.imag());
        worst = std::max({worst, std::abs(lap.real()) / (gu + kTiny),
                          std::abs(lap.imag()) / (gv + kTiny)});
    }
    return worst;
}

int check_injective(const PlaneMap& map, const RingDomain& d, int samples, std::uint64_t seed) {
    Box box = sampling_region(d);
    double scale = std::max(box.x1 - box.x0, box.y1 - box.y0);
    auto pts = sample_domain(d, samples, seed, 1e-3 * scale, box);
    const double h = 1e-6 * scale;
    std::vector<Complex> img(pts.size());
    std::vector<double> sigma(pts.size()), det(pts.size());
    Box ib;
    int positive = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        img[i] = map(pts[i]);
        Jacobian J = jacobian(map, pts[i], h);
        sigma[i] = J.min_singular();
        det[i] = J.det();
        if (det[i] > 0) ++positive;
        ib.add(img[i]);
    }
    int violations = 0;
    const int n = static_cast<int>(pts.size());
    const bool majority_positive = 2 * positive >= n;
    for (int i = 0; i < n; ++i)
        if ((det[i] > 0) != majority_positive) ++violations;

    const double eta = 0.1 * std::hypot(ib.x1 - ib.x0, ib.y1 - ib.y0) / std::sqrt(std::max(n, 1));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double di = std::abs(img[i] - img[j]);
            if (di >= eta) continue;
            double dz = std::abs(pts[i] - pts[j]);
            double s = std::min(sigma[i], sigma[j]);
            if (dz > 10.0 * di / (s + kTiny) && dz > 0.05 * scale) ++violations;
        }
    return violations;
}

int winding_number(const std::vector<Complex>& curve, Complex p) {
    double total = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        Complex a = curve[i] - p, b = curve[(i + 1) % curve.size()] - p;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

CoreCurve core_curve(const RingDomain& d, int n) {
    Complex centre;
    double rx = 0.0, ry = 0.0;
    if (auto a = d.as<Annulus>()) {
        centre = a->center;
        rx = ry = std::sqrt(a->r * a->R);
    } else if (auto t = d.as<Teichmuller>()) {
        centre = -0.5;
        rx = ry = 0.5 + 0.5 * t->s;
    } else if (auto g = d.as<Grotzsch>()) {
        rx = ry = 0.5 * (1.0 + g->s);
    } else if (auto s = d.as<SlitStrip>()) {
        rx = s->s + 0.5;
        ry = 0.5;
    } else {
        throw ValidationError("core_curve", "core curve known only for canonical rings");
    }
    CoreCurve c;
    c.inside = centre;
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * kPi * i / n;
        c.points.push_back(centre + Complex(rx * std::cos(th), ry * std::sin(th)));
    }
    return c;
}

FourierResult fourier_coefficients(const CircleMap& f, int N) {
    if (N < 1) throw ValidationError("order", "N must be positive");
    const int M = 4 * N;
    std::vector<Complex> vals(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        vals[j] = f.evaluator(2.0 * kPi * j / M);
        if (!(std::abs(std::abs(vals[j]) - 1.0) <= 1e-9))
            throw ValidationError("not_circle", "boundary values must lie on the unit circle");
    }
    FourierResult r;
    r.N = N;
    r.c.resize(static_cast<std::size_t>(2 * N + 1));
    for (int n = -N; n <= N; ++n) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < M; ++j) acc += vals[j] * std::polar(1.0, -2.0 * kPi * double(n) * j / M);
        r.c[static_cast<std::size_t>(n + N)] = acc / double(M);
    }
    // Coefficients above N/2 bound what folds back onto low orders.
    double tail = 0.0;
    for (int n = N / 2 + 1; n <= N; ++n) tail = std::max({tail, std::abs(r.at(n)), std::abs(r.at(-n))});
    r.aliasing_bound = 4.0 * tail + 1e-15;
    return r;
}

WeitsmanResult weitsman_test(const CircleMap& f, int N) {
    if (f.sense == CircleMap::Sense::Reversing)
        throw ValidationError("sense_reversing", "compose with conjugation first");
    FourierResult fc = fourier_coefficients(f, N);
    // Lift of the argument on a fine grid: increments decide monotonicity and degree.
    const int M = 4 * N;
    double total = 0.0;
    bool monotone = true;
    Complex prev = f.evaluator(0.0);
    for (int j = 1; j <= M; ++j) {
        Complex cur = f.evaluator(2.0 * kPi * j / M);
        double step = std::arg(cur / prev);
        if (step < 0.0) monotone = false;
        total += step;
        prev = cur;
    }
    WeitsmanResult w;
    w.degree = static_cast<int>(std::lround(total / (2.0 * kPi)));
    if (w.degree < 0) throw ValidationError("sense_reversing", "boundary map reverses orientation");
    w.homeomorphism = monotone && w.degree == 1;
    w.aliasing_bound = fc.aliasing_bound;
    w.sum01 = std::abs(fc.at(0)) + std::abs(fc.at(1));
    for (int n = 0; n <= std::min(w.degree, N); ++n) w.shapiro_sum += std::norm(fc.at(n));
    w.pass = w.homeomorphism && w.sum01 >= 2.0 / kPi - w.aliasing_bound;
    return w;
}

double dilatation_check(const PlaneMap& map, double R, Complex a, int samples, std::uint64_t seed) {
    if (!(R > 1.0)) throw ValidationError("radius", "annulus A(1/R, R) needs R > 1");
    if (!(std::abs(std::abs(a) - 1.0) < 1e-12))
        throw ValidationError("base_point", "base point must lie on the unit circle");
    auto nu = [&](Complex z) {
        Jacobian J = jacobian(map, z, 1e-6 * std::max(1.0, std::abs(z)));
        if (!(std::abs(J.hz()) > std::abs(J.hzbar())))
            throw ValidationError("orientation", "map must preserve orientation");
        return std::conj(J.hzbar()) / J.hz();
    };
    DilatationNormalization T = normalize_dilatation(nu(a));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int per = std::max(8, samples / 8);
    double margin = kInf;
    for (double alpha : {0.0, 0.25, 0.5, 0.75}) {
        double lr = alpha * std::log(R), worst = 0.0;
        for (double sgn : {-1.0, 1.0})
            for (int i = 0; i < per; ++i)
                worst = std::max(worst, std::abs(T(nu(std::polar(std::exp(sgn * lr), 2.0 * kPi * i / per)))));
        for (int i = 0; i < per; ++i) {
            double rho = std::exp(lr * (2.0 * u(rng) - 1.0));
            worst = std::max(worst, std::abs(T(nu(std::polar(rho, 2.0 * kPi * u(rng))))));
        }
        margin = std::min(margin, three_circles_bound(R, alpha) - worst);
    }
    return margin;
}

ValidationReport validate_map(const HarmonicMapSpec& spec, int samples, std::uint64_t seed,
                              const ValidationTolerances& tol) {
    ValidationReport rep;
    rep.samples = samples;
    for (const auto& st : spec.stages)
        if (std::holds_alternative<DelegatedConformal>(st)) rep.evaluable = false;
    if (!rep.evaluable) return rep;
    check_chain(spec);
    PlaneMap h = [&spec](Complex z) { return evaluate_map(spec, z, false); };

    rep.harmonicity_max = check_harmonic(h, spec.source, samples, 1e-4, seed);
    rep.injectivity_violations = check_injective(h, spec.source, samples, seed + 1);

    RingGeometry src = ring_components(spec.source), dst = ring_components(spec.target);
    std::vector<Complex> bpts;
    for (const auto* list : {&src.inner, &src.outer})
        for (const auto& pr : *list)
            for (Complex b : boundary_points(pr, std::max(16, samples / 4))) bpts.push_back(b);
    for (Complex b : bpts) {
        if (std::abs(b) > 1e6) continue;
        Complex w;
        try {
            w = h(b);
        } catch (const ConstructionError&) {
            continue;
        }
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > 1e6) continue;
        rep.boundary_hausdorff = std::max(rep.boundary_hausdorff, complement_distance(dst, w));
    }

    try {
        CoreCurve c = core_curve(spec.source);
        CoreCurve ct = core_curve(spec.target);
        std::vector<Complex> img;
        for (Complex z : c.points) img.push_back(h(z));
        rep.degree = winding_number(img, ct.inside);
    } catch (const ValidationError&) {
    }

    rep.passed = rep.harmonicity_max <= tol.harmonic && rep.injectivity_violations == 0 &&
                 rep.boundary_hausdorff <= tol.boundary && (!rep.degree || std::abs(*rep.degree) == 1);
    return rep;
}

}  // namespace ringmap

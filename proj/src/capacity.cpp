#include "ringmap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <queue>

#include "multigrid.hpp"
#include "ringmap/errors.hpp"
#include "ringmap/geometry.hpp"
#include "ringmap/special_moduli.hpp"

namespace ringmap {

namespace {

constexpr double kThetaMin = 0.05;

struct TaggedInterval {
    double lo, hi;
    int value;  // 1 inner, 0 outer
};

struct Layout {
    std::vector<double> xf, yf;  // base faces
    int core_i0 = 0, core_j0 = 0, core_nx = 0, core_ny = 0;
    double h = 0.0;
    Complex core_origin;
};

struct Discretization {
    int nx = 0, ny = 0;
    std::vector<double> xf, yf;
    std::vector<CellRole> role;
    std::vector<double> ce, cn, bc0, bc1;
    std::size_t at(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

// Box that must contain the domain, from exterior-type and axis-aligned half-plane pieces.
Box domain_limit(const RingGeometry& g) {
    Box lim{-kInf, -kInf, kInf, kInf};
    using K = Primitive::Kind;
    for (const Primitive& p : g.outer) {
        if (p.kind == K::EllipseExterior || p.kind == K::PolygonExterior) {
            Primitive hole = p;
            hole.kind = p.kind == K::EllipseExterior ? K::Ellipse : K::PolygonRegion;
            lim = lim.clipped(hole.bbox());
        } else if (p.kind == K::HalfPlaneClosed) {
            Complex n = p.q;
            if (n.real() == 0.0 && n.imag() > 0) lim.y1 = std::min(lim.y1, p.p.imag());
            if (n.real() == 0.0 && n.imag() < 0) lim.y0 = std::max(lim.y0, p.p.imag());
            if (n.imag() == 0.0 && n.real() > 0) lim.x1 = std::min(lim.x1, p.p.real());
            if (n.imag() == 0.0 && n.real() < 0) lim.x0 = std::max(lim.x0, p.p.real());
        }
    }
    return lim;
}

// Faces along one axis: uniform core [c0, c1] (multiples of h), graded out to [f0, f1].
std::vector<double> axis_faces(double c0, double c1, double f0, double f1, double h, double q,
                               int* core_first, int* core_count) {
    long k0 = static_cast<long>(std::floor(c0 / h));
    long k1 = static_cast<long>(std::ceil(c1 / h));
    long lo_lim = static_cast<long>(std::floor(f0 / h)) - 1;
    long hi_lim = static_cast<long>(std::ceil(f1 / h)) + 1;
    k0 = std::max(k0, lo_lim);
    k1 = std::min(k1, hi_lim);
    if (k1 - k0 < 2) k1 = k0 + 2;
    std::vector<double> left, core, right;
    for (long k = k0; k <= k1; ++k) core.push_back(static_cast<double>(k) * h);
    double w = h, x = core.front();
    while (x > f0) {
        w *= q;
        x -= w;
        left.push_back(x);
    }
    w = h;
    x = core.back();
    while (x < f1) {
        w *= q;
        x += w;
        right.push_back(x);
    }
    std::vector<double> out(left.rbegin(), left.rend());
    *core_first = static_cast<int>(out.size());
    *core_count = static_cast<int>(core.size()) - 1;
    out.insert(out.end(), core.begin(), core.end());
    out.insert(out.end(), right.begin(), right.end());
    return out;
}

Layout make_layout(const RingGeometry& g, const WidthSeparation& ws, double h,
                   const SolverOptions& o, bool cap_cells) {
    Box in = g.inner_bbox();
    double D = std::max(ws.diameter, 1e-300);
    double pad = std::min(ws.separation, 2 * D) + 0.25 * D;
    Box core = in.padded(pad);
    Box lim = domain_limit(g);
    double scale = std::max(core.x1 - core.x0, core.y1 - core.y0);
    Box far;
    if (g.infinity_in_domain) {
        Box ob = g.outer_bbox();
        ob.add(in);
        core.add(ob.padded(pad));
        scale = std::max(core.x1 - core.x0, core.y1 - core.y0);
        Complex c(0.5 * (core.x0 + core.x1), 0.5 * (core.y0 + core.y1));
        far = Box{c.real() - o.far_factor * scale, c.imag() - o.far_factor * scale,
                  c.real() + o.far_factor * scale, c.imag() + o.far_factor * scale};
    } else {
        Complex c(0.5 * (core.x0 + core.x1), 0.5 * (core.y0 + core.y1));
        far = Box{c.real() - o.far_factor * scale, c.imag() - o.far_factor * scale,
                  c.real() + o.far_factor * scale, c.imag() + o.far_factor * scale};
        far = far.clipped(lim);
    }
    core = core.clipped(far);
    if (cap_cells) {
        double ext = std::max(core.x1 - core.x0, core.y1 - core.y0);
        h = std::max(h, ext / o.max_core_cells);
    }
    // One extra layer beyond a bounded domain so the outer ring of cells lies outside it.
    if (!g.infinity_in_domain) far = far.padded(h);
    Layout L;
    L.h = h;
    L.xf = axis_faces(core.x0, core.x1, far.x0, far.x1, h, o.grading, &L.core_i0, &L.core_nx);
    L.yf = axis_faces(core.y0, core.y1, far.y0, far.y1, h, o.grading, &L.core_j0, &L.core_ny);
    L.core_origin = Complex(L.xf[L.core_i0], L.yf[L.core_j0]);
    return L;
}

std::vector<double> refine(const std::vector<double>& f, int level) {
    int m = 1 << level;
    std::vector<double> out;
    out.reserve((f.size() - 1) * m + 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        for (int s = 0; s < m; ++s) out.push_back(f[i] + (f[i + 1] - f[i]) * s / m);
    out.push_back(f.back());
    return out;
}

void line_tagged(const RingGeometry& g, int axis, double c, std::vector<TaggedInterval>& out) {
    out.clear();
    std::vector<Interval> tmp;
    for (const Primitive& p : g.inner) {
        tmp.clear();
        p.line_intervals(axis, c, tmp);
        for (const Interval& iv : tmp) out.push_back({iv.lo, iv.hi, 1});
    }
    for (const Primitive& p : g.outer) {
        tmp.clear();
        p.line_intervals(axis, c, tmp);
        for (const Interval& iv : tmp) out.push_back({iv.lo, iv.hi, 0});
    }
}

int classify(double x, const std::vector<TaggedInterval>& ivs) {
    int r = -1;
    for (const auto& iv : ivs)
        if (iv.lo <= x && x <= iv.hi) {
            if (iv.value == 1) return 1;
            r = 0;
        }
    return r;
}

struct Hits {
    bool any = false;
    double first = 0.0, last = 0.0;
    int first_value = 0, last_value = 0;
};

Hits find_hits(double a, double b, const std::vector<TaggedInterval>& ivs) {
    Hits h;
    for (const auto& iv : ivs) {
        if (iv.hi < a || iv.lo > b) continue;
        double f = std::max(iv.lo, a), l = std::min(iv.hi, b);
        if (!h.any || f < h.first) {
            h.first = f;
            h.first_value = iv.value;
        }
        if (!h.any || l > h.last) {
            h.last = l;
            h.last_value = iv.value;
        }
        h.any = true;
    }
    return h;
}

CellRole role_of(int v) { return v == 1 ? CellRole::Dirichlet1 : CellRole::Dirichlet0; }
bool conductor(CellRole r) { return r == CellRole::Dirichlet0 || r == CellRole::Dirichlet1; }
int value_of(CellRole r) { return r == CellRole::Dirichlet1 ? 1 : 0; }

Discretization discretize(const RingGeometry& g, std::vector<double> xf, std::vector<double> yf) {
    Discretization D;
    D.nx = static_cast<int>(xf.size()) - 1;
    D.ny = static_cast<int>(yf.size()) - 1;
    D.xf = std::move(xf);
    D.yf = std::move(yf);
    const int nx = D.nx, ny = D.ny;
    std::size_t n = static_cast<std::size_t>(nx) * ny;
    D.role.assign(n, CellRole::Interior);
    D.ce.assign(n, 0.0);
    D.cn.assign(n, 0.0);
    D.bc0.assign(n, 0.0);
    D.bc1.assign(n, 0.0);
    std::vector<double> xc(nx), yc(ny);
    for (int i = 0; i < nx; ++i) xc[i] = 0.5 * (D.xf[i] + D.xf[i + 1]);
    for (int j = 0; j < ny; ++j) yc[j] = 0.5 * (D.yf[j] + D.yf[j + 1]);

    auto link = [&](std::size_t k, double theta, int value, double c0) {
        double c = c0 / std::max(theta, kThetaMin);
        (value == 1 ? D.bc1 : D.bc0)[k] += c;
    };
    auto adjacent_conductors = [](CellRole a, CellRole b) {
        if (conductor(a) && conductor(b) && a != b)
            throw SolverError("too_coarse",
                              "spacing too coarse to separate the two boundary components");
    };

    std::vector<TaggedInterval> ivs;
    for (int j = 0; j < ny; ++j) {
        line_tagged(g, 0, yc[j], ivs);
        for (int i = 0; i < nx; ++i) {
            int v = classify(xc[i], ivs);
            if (v >= 0) D.role[D.at(i, j)] = role_of(v);
        }
    }
    if (!g.infinity_in_domain) {
        for (int i = 0; i < nx; ++i) {
            if (D.role[D.at(i, 0)] != CellRole::Dirichlet1) D.role[D.at(i, 0)] = CellRole::Dirichlet0;
            if (D.role[D.at(i, ny - 1)] != CellRole::Dirichlet1) D.role[D.at(i, ny - 1)] = CellRole::Dirichlet0;
        }
        for (int j = 0; j < ny; ++j) {
            if (D.role[D.at(0, j)] != CellRole::Dirichlet1) D.role[D.at(0, j)] = CellRole::Dirichlet0;
            if (D.role[D.at(nx - 1, j)] != CellRole::Dirichlet1) D.role[D.at(nx - 1, j)] = CellRole::Dirichlet0;
        }
    }

    // Edges along rows.
    for (int j = 0; j < ny; ++j) {
        line_tagged(g, 0, yc[j], ivs);
        double face = D.yf[j + 1] - D.yf[j];
        for (int i = 0; i + 1 < nx; ++i) {
            std::size_t a = D.at(i, j), b = D.at(i + 1, j);
            CellRole ra = D.role[a], rb = D.role[b];
            adjacent_conductors(ra, rb);
            if (conductor(ra) && conductor(rb)) continue;
            double dist = xc[i + 1] - xc[i];
            double c0 = face / dist;
            Hits h = find_hits(xc[i], xc[i + 1], ivs);
            if (!conductor(ra) && !conductor(rb)) {
                if (!h.any) {
                    D.ce[a] = c0;
                } else {
                    link(a, (h.first - xc[i]) / dist, h.first_value, c0);
                    link(b, (xc[i + 1] - h.last) / dist, h.last_value, c0);
                }
            } else if (!conductor(ra)) {
                if (h.any) link(a, (h.first - xc[i]) / dist, h.first_value, c0);
                else link(a, 1.0, value_of(rb), c0);
            } else {
                if (h.any) link(b, (xc[i + 1] - h.last) / dist, h.last_value, c0);
                else link(b, 1.0, value_of(ra), c0);
            }
        }
    }
    // Edges along columns.
    for (int i = 0; i < nx; ++i) {
        line_tagged(g, 1, xc[i], ivs);
        double face = D.xf[i + 1] - D.xf[i];
        for (int j = 0; j + 1 < ny; ++j) {
            std::size_t a = D.at(i, j), b = D.at(i, j + 1);
            CellRole ra = D.role[a], rb = D.role[b];
            adjacent_conductors(ra, rb);
            if (conductor(ra) && conductor(rb)) continue;
            double dist = yc[j + 1] - yc[j];
            double c0 = face / dist;
            Hits h = find_hits(yc[j], yc[j + 1], ivs);
            if (!conductor(ra) && !conductor(rb)) {
                if (!h.any) {
                    D.cn[a] = c0;
                } else {
                    link(a, (h.first - yc[j]) / dist, h.first_value, c0);
                    link(b, (yc[j + 1] - h.last) / dist, h.last_value, c0);
                }
            } else if (!conductor(ra)) {
                if (h.any) link(a, (h.first - yc[j]) / dist, h.first_value, c0);
                else link(a, 1.0, value_of(rb), c0);
            } else {
                if (h.any) link(b, (yc[j + 1] - h.last) / dist, h.last_value, c0);
                else link(b, 1.0, value_of(ra), c0);
            }
        }
    }

    // Interior components that see only one conductor carry that constant value.
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> members;
    for (std::size_t s = 0; s < n; ++s) {
        if (D.role[s] != CellRole::Interior || comp[s] >= 0) continue;
        members.clear();
        bool has0 = false, has1 = false;
        std::queue<std::size_t> q;
        q.push(s);
        comp[s] = 1;
        while (!q.empty()) {
            std::size_t k = q.front();
            q.pop();
            members.push_back(k);
            has0 = has0 || D.bc0[k] > 0;
            has1 = has1 || D.bc1[k] > 0;
            int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
            auto visit = [&](std::size_t m2) {
                if (comp[m2] < 0) {
                    comp[m2] = 1;
                    q.push(m2);
                }
            };
            if (D.ce[k] > 0) visit(k + 1);
            if (i > 0 && D.ce[k - 1] > 0) visit(k - 1);
            if (D.cn[k] > 0) visit(k + nx);
            if (j > 0 && D.cn[k - nx] > 0) visit(k - nx);
        }
        if (has0 && has1) continue;
        CellRole r = has1 ? CellRole::Dirichlet1 : has0 ? CellRole::Dirichlet0 : CellRole::Outside;
        for (std::size_t k : members) {
            D.role[k] = r;
            D.ce[k] = D.cn[k] = D.bc0[k] = D.bc1[k] = 0.0;
            int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
            if (i > 0) D.ce[k - 1] = 0.0;
            if (j > 0) D.cn[k - nx] = 0.0;
        }
    }
    return D;
}

struct LevelSolution {
    double cap = 0.0;
    int iterations = 0;
    std::vector<double> u;  // nx * ny
    Discretization disc;
};

LevelSolution solve_level(Discretization D, const std::vector<double>* guess, int guess_nx,
                          const SolverOptions& o) {
    detail::GridOperator A;
    A.resize(D.nx, D.ny);
    std::vector<double> b(A.size(), 0.0), x(A.size(), 0.0);
    bool any = false;
    for (int j = 0; j < D.ny; ++j)
        for (int i = 0; i < D.nx; ++i) {
            std::size_t k = D.at(i, j), K = A.index(i, j);
            if (D.role[k] != CellRole::Interior) continue;
            double dg = D.bc0[k] + D.bc1[k] + D.ce[k] + D.cn[k];
            if (i > 0) dg += D.ce[k - 1];
            if (j > 0) dg += D.cn[k - D.nx];
            A.diag[K] = dg;
            A.ce[K] = D.ce[k];
            A.cn[K] = D.cn[k];
            b[K] = D.bc1[k];
            any = any || D.bc1[k] > 0;
            if (guess) x[K] = (*guess)[static_cast<std::size_t>(j / 2) * guess_nx + i / 2];
        }
    if (!any) throw SolverError("disconnected", "no interior cell touches the inner component");
    detail::MultigridPcg mg(std::move(A));
    detail::SolveStats st = mg.solve(b, x, o.tolerance, o.max_iterations);
    if (!st.converged)
        throw SolverError("no_convergence", "conjugate gradients did not reach the tolerance",
                          st.relative_residual);
    LevelSolution out;
    out.iterations = st.iterations;
    out.u.assign(static_cast<std::size_t>(D.nx) * D.ny, 0.0);
    const detail::GridOperator& op = mg.op();
    double energy = 0.0;
    for (int j = 0; j < D.ny; ++j)
        for (int i = 0; i < D.nx; ++i) {
            std::size_t k = D.at(i, j), K = op.index(i, j);
            CellRole r = D.role[k];
            if (r == CellRole::Dirichlet1) out.u[k] = 1.0;
            if (r != CellRole::Interior) continue;
            double u = x[K];
            out.u[k] = u;
            double du = u - x[K + 1];
            double dv = u - x[K + op.stride];
            energy += D.ce[k] * du * du + D.cn[k] * dv * dv;
            energy += D.bc0[k] * u * u + D.bc1[k] * (u - 1.0) * (u - 1.0);
        }
    out.cap = energy;
    out.disc = std::move(D);
    return out;
}

struct Prepared {
    RingGeometry geom;
    WidthSeparation ws;
};

Prepared prepare(const RingDomain& d) {
    Prepared p{compile_geometry(d), width_and_separation(d)};
    if (!(p.ws.separation > 0.0) || !std::isfinite(p.ws.separation))
        throw SolverError("degenerate", "boundary components touch or separation is undefined");
    return p;
}

double base_spacing(const Prepared& p, const SolverOptions& o) {
    if (o.finest_spacing > 0.0) return o.finest_spacing * std::pow(2.0, o.levels - 1);
    double feature = std::min(p.ws.diameter, p.ws.separation);
    return feature / o.cells_per_feature;
}

PotentialGrid to_grid(const Layout& L, int level, const LevelSolution* sol, Discretization D) {
    PotentialGrid g;
    int m = 1 << level;
    g.spacing = L.h / m;
    g.origin = L.core_origin;
    g.nx = D.nx;
    g.ny = D.ny;
    g.core_i0 = L.core_i0 * m;
    g.core_j0 = L.core_j0 * m;
    g.core_nx = L.core_nx * m;
    g.core_ny = L.core_ny * m;
    g.mask = D.role;
    g.values.assign(D.role.size(), 0.0);
    for (std::size_t k = 0; k < D.role.size(); ++k) {
        if (sol) g.values[k] = sol->u[k];
        else if (D.role[k] == CellRole::Dirichlet1) g.values[k] = 1.0;
    }
    g.xf = std::move(D.xf);
    g.yf = std::move(D.yf);
    return g;
}

}  // namespace

PotentialGrid rasterize(const RingDomain& d, double spacing, const SolverOptions& opts) {
    Prepared p = prepare(d);
    if (!(spacing > 0.0) || spacing >= 0.5 * p.ws.separation)
        throw SolverError("too_coarse", "spacing must be below half the separation distance");
    Layout L = make_layout(p.geom, p.ws, spacing, opts, false);
    return to_grid(L, 0, nullptr, discretize(p.geom, L.xf, L.yf));
}

double solve_potential(const RingDomain& d, double spacing, const SolverOptions& opts,
                       PotentialGrid* out, int* iterations) {
    Prepared p = prepare(d);
    Layout L = make_layout(p.geom, p.ws, spacing, opts, false);
    LevelSolution s = solve_level(discretize(p.geom, L.xf, L.yf), nullptr, 0, opts);
    if (iterations) *iterations = s.iterations;
    double cap = s.cap;
    if (out) {
        Discretization D = std::move(s.disc);
        *out = to_grid(L, 0, &s, std::move(D));
    }
    return cap;
}

CapacityEstimate solve_capacity(const RingDomain& d, const SolverOptions& o) {
    if (o.levels < 1) throw SolverError("levels", "at least one grid level is required");
    Prepared p = prepare(d);
    Layout L = make_layout(p.geom, p.ws, base_spacing(p, o), o, o.finest_spacing <= 0.0);
    CapacityEstimate est;
    std::vector<double> prev;
    int prev_nx = 0;
    for (int l = 0; l < o.levels; ++l) {
        Discretization D = discretize(p.geom, refine(L.xf, l), refine(L.yf, l));
        int nx = D.nx;
        LevelSolution s = solve_level(std::move(D), l > 0 ? &prev : nullptr, prev_nx, o);
        est.grid_levels.emplace_back(L.h / (1 << l), s.cap);
        est.iterations.push_back(s.iterations);
        prev = std::move(s.u);
        prev_nx = nx;
    }
    double last = est.grid_levels.back().second;
    if (o.levels >= 2) {
        double before = est.grid_levels[est.grid_levels.size() - 2].second;
        est.cap = 2.0 * last - before;
        est.extrapolated = true;
        est.modulus = 2.0 * kPi / est.cap;
        est.abs_error = std::abs(2.0 * kPi / last - est.modulus);
    } else {
        est.cap = last;
        est.modulus = 2.0 * kPi / last;
        est.abs_error = kInf;
    }
    return est;
}

CapacityEstimate solve_capacity(const RingDomain& d, int levels) {
    SolverOptions o;
    o.levels = levels;
    return solve_capacity(d, o);
}

ExtendedModulus modulus_grid(const RingDomain& d, const SolverOptions& opts) {
    if (d.degenerate_inner() || d.degenerate_outer()) return ExtendedModulus::infinity();
    CapacityEstimate e = solve_capacity(d, opts);
    return {e.modulus, ModulusMethod::GridSolver, e.abs_error};
}

ExtendedModulus modulus_best(const RingDomain& d, const SolverOptions& opts) {
    if (has_closed_form(d)) return conformal_modulus_closed_form(d);
    return modulus_grid(d, opts);
}

ExtendedModulus modulus_best(const RingDomain& d) { return modulus_best(d, SolverOptions{}); }

void dump_potential(const PotentialGrid& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolverError("io", "cannot open " + path);
    auto put64 = [&](const void* p) {
        std::uint64_t v;
        std::memcpy(&v, p, 8);
        for (int i = 0; i < 8; ++i) f.put(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    f.write("RINGPOT1", 8);
    std::uint64_t nx = g.core_nx, ny = g.core_ny;
    put64(&nx);
    put64(&ny);
    double h = g.spacing, ox = g.origin.real(), oy = g.origin.imag();
    put64(&h);
    put64(&ox);
    put64(&oy);
    for (int j = 0; j < g.core_ny; ++j)
        for (int i = 0; i < g.core_nx; ++i) put64(&g.values[g.at(g.core_i0 + i, g.core_j0 + j)]);
    if (!f) throw SolverError("io", "write failed for " + path);
}

PotentialGrid load_potential(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SolverError("io", "cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, "RINGPOT1", 8) != 0) throw SolverError("io", "bad magic in " + path);
    auto get64 = [&](void* p) {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(f.get())) << (8 * i);
        std::memcpy(p, &v, 8);
    };
    std::uint64_t nx, ny;
    double h, ox, oy;
    get64(&nx);
    get64(&ny);
    get64(&h);
    get64(&ox);
    get64(&oy);
    PotentialGrid g;
    g.nx = g.core_nx = static_cast<int>(nx);
    g.ny = g.core_ny = static_cast<int>(ny);
    g.spacing = h;
    g.origin = Complex(ox, oy);
    g.values.resize(nx * ny);
    for (auto& v : g.values) get64(&v);
    if (!f) throw SolverError("io", "truncated potential file " + path);
    for (std::uint64_t i = 0; i <= nx; ++i) g.xf.push_back(ox + h * i);
    for (std::uint64_t j = 0; j <= ny; ++j) g.yf.push_back(oy + h * j);
    g.mask.assign(nx * ny, CellRole::Interior);
    return g;
}

}  // namespace ringmap

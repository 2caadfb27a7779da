#include "ringmap/affine_modulus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "ringmap/errors.hpp"

namespace ringmap {

namespace {

constexpr std::array<double, 7> kRhoGrid{0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95};
constexpr int kPsiSteps = 16;
constexpr double kMaxRho = 0.95;
constexpr int kPsiRefineEvaluations = 8;

class Evaluator {
public:
    Evaluator(const RingDomain& d, int budget, std::vector<ShearSample>& trace)
        : d_(d), budget_(budget), trace_(trace) {}

    ExtendedModulus operator()(Complex k, const SolverOptions& o) {
        if (used_ >= budget_) throw AffineError("budget", "evaluation budget exhausted");
        ++used_;
        ExtendedModulus m = shear_modulus(d_, k, o);
        trace_.push_back({k, m});
        return m;
    }
    int remaining() const { return budget_ - used_; }

private:
    const RingDomain& d_;
    int budget_;
    int used_ = 0;
    std::vector<ShearSample>& trace_;
};

struct Vertex {
    Complex k;
    double f;
};

// Maximizes over the disk |k| <= kMaxRho; points outside score -inf.
Vertex nelder_mead(Evaluator& eval, const SolverOptions& o, Vertex start, double step, int reserve,
                   double* spread) {
    auto f = [&](Complex k) {
        if (std::abs(k) > kMaxRho) return -kInf;
        return eval(k, o).value;
    };
    std::array<Vertex, 3> s{start, Vertex{start.k + step, 0.0}, Vertex{start.k + Complex(0, step), 0.0}};
    for (int i = 1; i < 3; ++i) {
        if (std::abs(s[i].k) > kMaxRho) s[i].k = start.k - (s[i].k - start.k);
        s[i].f = f(s[i].k);
    }
    auto by_value = [](const Vertex& a, const Vertex& b) {
        if (a.f != b.f) return a.f > b.f;
        return std::abs(a.k) < std::abs(b.k);
    };
    while (eval.remaining() > reserve + 2) {
        std::sort(s.begin(), s.end(), by_value);
        double size = std::max(std::abs(s[1].k - s[0].k), std::abs(s[2].k - s[0].k));
        if (size < 1e-3 || (s[0].f - s[2].f) < 1e-9 * std::max(1.0, std::abs(s[0].f))) break;
        Complex c = 0.5 * (s[0].k + s[1].k);
        Vertex r{c + (c - s[2].k), 0.0};
        r.f = f(r.k);
        if (r.f > s[0].f) {
            Vertex e{c + 2.0 * (c - s[2].k), 0.0};
            e.f = f(e.k);
            s[2] = e.f > r.f ? e : r;
        } else if (r.f > s[1].f) {
            s[2] = r;
        } else {
            Vertex ct{c + 0.5 * (s[2].k - c), 0.0};
            ct.f = f(ct.k);
            if (ct.f > s[2].f) {
                s[2] = ct;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].k = s[0].k + 0.5 * (s[i].k - s[0].k);
                    s[i].f = f(s[i].k);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), by_value);
    *spread = s[0].f - s[2].f;
    return s[0];
}

}  // namespace

const char* to_string(Attainment a) {
    switch (a) {
        case Attainment::Attained: return "attained";
        case Attainment::SupremumExtrapolated: return "supremum-extrapolated";
        case Attainment::Infinite: return "infinite";
    }
    return "?";
}

ExtendedModulus shear_modulus(const RingDomain& d, Complex k, const SolverOptions& opts) {
    if (!(std::abs(k) < 1.0)) throw AffineError("shear_range", "shear parameter must satisfy |k| < 1");
    if (k == Complex(0.0)) return modulus_best(d, opts);
    return modulus_best(apply_affine(AffineMap::shear(k), d), opts);
}

Complex shear_parameter(const AffineMap& phi) {
    if (!phi.invertible()) throw AffineError("singular", "affine map is not invertible");
    if (std::abs(phi.a) > std::abs(phi.b)) return phi.b / phi.a;
    // phi = (w -> b conj(w) + c) o (z + conj(a/b) conj(z)).
    return std::conj(phi.a / phi.b);
}

AffineModulusResult affine_modulus(const RingDomain& d, int budget) {
    AffineModulusOptions o;
    o.budget = budget;
    return affine_modulus(d, o);
}

AffineModulusResult affine_modulus(const RingDomain& d, const AffineModulusOptions& opts) {
    const int grid_size = 1 + static_cast<int>(kRhoGrid.size() - 1) * kPsiSteps;
    if (opts.budget < grid_size + 1)
        throw AffineError("budget", "budget of " + std::to_string(opts.budget) +
                                        " cannot cover the coarse grid of " +
                                        std::to_string(grid_size) + " evaluations");
    AffineModulusResult res;
    Evaluator eval(d, opts.budget, res.trace);

    // Degenerate rings have infinite modulus under every affine map.
    if (d.degenerate_inner() || d.degenerate_outer()) {
        res.value = ExtendedModulus::infinity(ModulusMethod::Optimized);
        res.attained = Attainment::Infinite;
        eval(0.0, opts.final_solve);
        return res;
    }

    // values[r][p]; the rho = 0 ring has a single sample.
    std::vector<std::vector<double>> values(kRhoGrid.size());
    Vertex best{0.0, eval(0.0, opts.search).value};
    values[0].assign(kPsiSteps, best.f);
    std::size_t best_r = 0;
    int best_p = 0;
    for (std::size_t r = 1; r < kRhoGrid.size(); ++r) {
        values[r].resize(kPsiSteps);
        for (int p = 0; p < kPsiSteps; ++p) {
            Complex k = std::polar(kRhoGrid[r], 2 * kPi * p / kPsiSteps);
            double v = eval(k, opts.search).value;
            values[r][p] = v;
            // Ties go to the smaller shear, which the scan order already visits first.
            if (v > best.f) {
                best = {k, v};
                best_r = r;
                best_p = p;
            }
        }
    }
    if (best.f == kInf) {
        res.value = ExtendedModulus::infinity(ModulusMethod::Optimized);
        res.best_shear = best.k;
        res.attained = Attainment::Infinite;
        return res;
    }

    const std::size_t outer = kRhoGrid.size() - 1;
    bool on_rim = best_r == outer && values[outer][best_p] > values[outer - 1][best_p];
    if (!on_rim) {
        double spread = 0.0;
        Vertex top = nelder_mead(eval, opts.search, best, 0.1, 1, &spread);
        ExtendedModulus m = eval(top.k, opts.final_solve);
        res.value = {m.value, ModulusMethod::Optimized, m.error() + spread};
        res.best_shear = top.k;
        res.attained = Attainment::Attained;
        return res;
    }

    // Refine the direction on the rim, then walk rho = 1 - 2^-n towards the boundary.
    double psi = 2 * kPi * best_p / kPsiSteps;
    const double dpsi = 2 * kPi / kPsiSteps;
    int refine_budget = std::min(kPsiRefineEvaluations, eval.remaining() - opts.extensions - 1);
    if (refine_budget > 2) {
        std::uintmax_t iters = static_cast<std::uintmax_t>(refine_budget);
        auto neg = [&](double a) { return -eval(std::polar(kMaxRho, a), opts.search).value; };
        auto r = boost::math::tools::brent_find_minima(neg, psi - dpsi, psi + dpsi, 20, iters);
        if (-r.second > best.f) psi = r.first;
    }
    if (eval.remaining() < opts.extensions + 1)
        throw AffineError("budget", "budget exhausted before the boundary extension");
    std::vector<ExtendedModulus> ext;
    double first = eval(std::polar(kMaxRho, psi), opts.final_solve).value;
    for (int n = 0; n < opts.extensions; ++n) {
        double rho = 1.0 - std::ldexp(1.0, -(5 + n));
        ext.push_back(eval(std::polar(rho, psi), opts.final_solve));
    }
    res.best_shear = std::polar(1.0 - std::ldexp(1.0, -(4 + opts.extensions)), psi);
    double last = ext.back().value;
    if (ext.back().infinite() || last - first > opts.divergence_threshold) {
        res.value = ExtendedModulus::infinity(ModulusMethod::Optimized);
        res.attained = Attainment::Infinite;
        return res;
    }
    // Mod is smooth in rho up to the boundary; halving 1 - rho halves the remaining gap.
    double prev = ext.size() >= 2 ? ext[ext.size() - 2].value : first;
    double limit = 2.0 * last - prev;
    double err = std::abs(limit - last) + 2.0 * ext.back().error();
    res.value = {limit, ModulusMethod::Optimized, err};
    res.attained = Attainment::SupremumExtrapolated;
    return res;
}

}  // namespace ringmap

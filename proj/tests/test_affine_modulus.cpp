#include <cmath>
#include <random>

#include "doctest.h"
#include "ringmap/affine_modulus.hpp"
#include "ringmap/errors.hpp"
#include "ringmap/special_moduli.hpp"

using namespace ringmap;

namespace {

Polygon regular(int n, double r, Complex c = 0.0, double phase = 0.0) {
    Polygon p;
    for (int k = 0; k < n; ++k) p.push_back(c + std::polar(r, phase + 2 * kPi * k / n));
    return p;
}

// Independent factorization: phi's linear part as a real 2x2 matrix M; the shear
// z + k conj(z) has matrix S(k), and M S(k)^{-1} must be a similarity (or anti-similarity).
bool is_similarity(const AffineMap& phi, Complex k) {
    AffineMap s = AffineMap::shear(k);
    AffineMap rest = compose(phi, s.inverse());
    double tol = 1e-12 * (std::abs(phi.a) + std::abs(phi.b));
    return std::abs(rest.b) < tol || std::abs(rest.a) < tol;
}

}  // namespace

TEST_CASE("shear parameter factors every invertible map") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int n = 0; n < 50; ++n) {
        AffineMap phi{{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}};
        if (std::abs(phi.det()) < 1e-3) continue;
        Complex k = shear_parameter(phi);
        CHECK(std::abs(k) < 1.0);
        CHECK(is_similarity(phi, k));
    }
    CHECK_THROWS_AS(shear_parameter({1.0, 1.0, 0.0}), AffineError);
}

TEST_CASE("shear modulus basics") {
    RingDomain a = RingDomain::annulus(1, 2);
    CHECK(shear_modulus(a, 0.0).value == doctest::Approx(std::log(2.0)));
    auto m = shear_modulus(a, 0.5);
    CHECK(m.method == ModulusMethod::GridSolver);
    CHECK(m.value <= std::log(2.0));
    CHECK_THROWS_AS(shear_modulus(a, 1.0), AffineError);

    // Teichmuller rings keep their modulus under every shear.
    double t1 = teichmuller_modulus(1);
    for (double rho : {0.3, 0.7, 0.95})
        for (double psi : {0.0, 1.0, 2.5}) {
            auto t = shear_modulus(RingDomain::teichmuller(1), std::polar(rho, psi));
            CHECK(std::abs(t.value - t1) <= 2 * t.error());
        }

    // Strong horizontal shear of G(3) approaches T(1) from below.
    auto g = shear_modulus(RingDomain::grotzsch(3), 0.9);
    CHECK(g.value < kPi);
    CHECK(g.value > 0.9 * kPi);
}

TEST_CASE("reduction to the shear family") {
    RingDomain d = RingDomain::polygonal(regular(40, 2.0), regular(6, 0.7, Complex(0.2, 0.1)));
    AffineMap phi{Complex(1.3, -0.4), Complex(0.5, 0.3), Complex(2, 1)};
    auto direct = modulus_best(apply_affine(phi, d));
    auto reduced = shear_modulus(d, shear_parameter(phi));
    CHECK(std::abs(direct.value - reduced.value) <= 2 * (direct.error() + reduced.error()));
}

TEST_CASE("affine modulus of an annulus is attained at the identity") {
    RingDomain a = RingDomain::annulus(1, 2);
    AffineModulusResult r = affine_modulus(a, 200);
    CHECK(std::abs(r.value.value - std::log(2.0)) < 1e-2);
    CHECK(std::abs(r.best_shear) <= 0.05);
    CHECK(r.attained == Attainment::Attained);
    CHECK(r.value.method == ModulusMethod::Optimized);
    CHECK(r.trace.size() <= 200);
    // Sandwich between the conformal and the Carleman moduli.
    CHECK(r.value.value >= std::log(2.0) - r.value.error());
    CHECK(r.value.value <= carleman_modulus(a).value + r.value.error());
}

TEST_CASE("budget and degenerate rings") {
    CHECK_THROWS_AS(affine_modulus(RingDomain::annulus(1, 2), 50), AffineError);
    Polygon sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    AffineModulusResult r = affine_modulus(RingDomain::punctured(sq, 0.0), 200);
    CHECK(r.value.infinite());
    CHECK(r.attained == Attainment::Infinite);
}

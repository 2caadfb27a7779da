#include <cmath>
#include <random>

#include "doctest.h"
#include "ringmap/affine_modulus.hpp"
#include "ringmap/constructors.hpp"
#include "ringmap/errors.hpp"
#include "ringmap/special_moduli.hpp"
#include "ringmap/validators.hpp"

using namespace ringmap;

namespace {

// f(s) for the kernel exponent a by composite Simpson on w = s u^2 (removes the w^-a endpoint).
double sc_endpoint_simpson(double a, double s) {
    const double A = std::tan(kPi * a) / (kPi * a);
    auto g = [&](double u) {
        if (u == 0.0) return 0.0;
        double w = s * u * u;
        return A * std::pow((w + 1) / w, a) * 2 * s * u;
    };
    const int n = 200000;
    double h = 1.0 / n, sum = g(0) + g(1);
    for (int i = 1; i < n; ++i) sum += g(i * h) * (i % 2 ? 4 : 2);
    return sum * h / 3;
}

}  // namespace

TEST_CASE("F_t round trip and harmonicity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (double t : {0.0, 0.3, 1.0, 2.5}) {
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            Complex z(u(rng), u(rng));
            if (std::abs(z) < 1e-3) continue;
            worst = std::max(worst, std::abs(ft_inverse(ft_forward(z, t), t) - z) / std::max(1.0, std::abs(z)));
        }
        CHECK(worst <= 1e-12);
    }
    // F_t^{-1} is harmonic off the disk of radius t.
    RingDomain outside = RingDomain::annulus(1.5, 6.0);
    CHECK(check_harmonic([](Complex z) { return ft_inverse(z, 1.0); }, outside, 300, 1e-3) <= 1e-6);
    CHECK_THROWS_AS(ft_inverse(Complex(0.5, 0), 1.0), ConstructionError);
    CHECK_THROWS_AS(ft_forward(0.0, 1.0), ConstructionError);
}

TEST_CASE("Schwarz-Christoffel shear") {
    CHECK(sc_endpoint(0.2, 2.0) == doctest::Approx(sc_endpoint_simpson(0.2, 2.0)).epsilon(1e-7));
    CHECK(sc_endpoint(0.35, 0.5) == doctest::Approx(sc_endpoint_simpson(0.35, 0.5)).epsilon(1e-7));
    // f(-1) = -1 + i tan(pi a).
    for (double a : {0.1, 0.25, 0.4}) {
        ShearAnalytic sh{a};
        Complex fm1 = sh.f(Complex(-1, 0));
        CHECK(fm1.real() == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(fm1.imag() == doctest::Approx(std::tan(kPi * a)).epsilon(1e-9));
    }
    for (auto [s, t] : {std::pair{2.0, 3.0}, {1.0, 5.0}, {0.5, 0.7}}) {
        HarmonicMapSpec spec = sc_shear_map(s, t);
        CHECK(chain_legal(spec));
        const auto& sh = std::get<ShearAnalytic>(spec.stages[0]);
        Complex fs = sh.f(Complex(s, 0));
        CHECK(std::abs(fs.real() - t) <= 1e-6);
        CHECK(std::abs(fs.imag()) <= 1e-8);
        // Boundary slits land on the target slits.
        for (double x : {-0.9, -0.5, -0.1})
            CHECK(std::abs(evaluate_map(spec, Complex(x, 0), false).imag()) <= 1e-12);
        Complex w = evaluate_map(spec, Complex(-0.5, 0), false);
        CHECK(w.real() >= -1 - 1e-9);
        CHECK(w.real() <= 1e-9);
        for (double x : {s + 0.1, s + 1, s + 10}) CHECK(evaluate_map(spec, Complex(x, 0), false).real() >= t - 1e-6);
        ValidationReport rep = validate_map(spec, 200);
        CHECK(rep.harmonicity_max <= 1e-4);
        CHECK(rep.injectivity_violations == 0);
        CHECK(rep.boundary_hausdorff <= 1e-6);
        REQUIRE(rep.degree);
        CHECK(std::abs(*rep.degree) == 1);
        CHECK(rep.passed);
    }
    CHECK(std::get<ShearAnalytic>(sc_shear_map(2, 2).stages[0]).a == 0.0);
    CHECK_THROWS_AS(sc_shear_map(3, 2), ConstructionError);
}

TEST_CASE("power shear") {
    const double s = 2;
    for (double alpha : {1.1, 1.3, 1.5}) {
        double t = 1 / (std::pow(1 + 1 / s, alpha) - 1);
        HarmonicMapSpec spec = power_shear_map(s, t);
        CHECK(chain_legal(spec));
        double a = 0;
        for (auto& [name, v] : spec.parameters)
            if (name == "alpha") a = v;
        CHECK(a == doctest::Approx(alpha).epsilon(1e-12));
        // Endpoint identity (t+1)/t = ((s+1)/s)^alpha and the bare power maps [s, s+1] onto
        // [s^alpha, (s+1)^alpha].
        CHECK((t + 1) / t == doctest::Approx(std::pow((s + 1) / s, alpha)).epsilon(1e-12));
        PowerShear p{alpha};
        for (double x = s; x <= s + 1; x += 0.125) {
            Complex w = p(Complex(x, 0));
            CHECK(w.imag() == 0.0);
            CHECK(w.real() >= std::pow(s, alpha) - 1e-12);
            CHECK(w.real() <= std::pow(s + 1, alpha) + 1e-12);
        }
        CHECK(p(Complex(s, 0)).real() == doctest::Approx(std::pow(s, alpha)));
        // The chain sends 0 to t and s to 0.
        CHECK(std::abs(evaluate_map(spec, 0.0, false) - t) <= 1e-12);
        CHECK(std::abs(evaluate_map(spec, Complex(s, 0), false)) <= 1e-12);
        ValidationReport rep = validate_map(spec, 200);
        CHECK(rep.harmonicity_max <= 1e-4);
        CHECK(rep.injectivity_violations == 0);
        CHECK(rep.boundary_hausdorff <= 1e-6);
        CHECK(rep.passed);
    }
    CHECK_THROWS_AS(power_shear_map(2, 0.1), ConstructionError);
    CHECK_THROWS_AS(power_shear_map(2, 3), ConstructionError);
}

TEST_CASE("chain legality") {
    HarmonicMapSpec ok;
    ok.stages = {MobiusPre{}, PowerShear{1.2}, AffinePost{AffineMap::identity()}};
    CHECK(chain_legal(ok));
    HarmonicMapSpec two = ok;
    two.stages = {PowerShear{1.2}, ShearAnalytic{0.1}};
    CHECK_FALSE(chain_legal(two));
    HarmonicMapSpec order = ok;
    order.stages = {AffinePost{AffineMap::identity()}, PowerShear{1.2}};
    CHECK_FALSE(chain_legal(order));
    HarmonicMapSpec conf_after = ok;
    conf_after.stages = {PowerShear{1.2}, MobiusPre{}};
    CHECK_FALSE(chain_legal(conf_after));
    HarmonicMapSpec only_affine;
    only_affine.stages = {AffinePost{AffineMap::identity()}};
    CHECK_FALSE(chain_legal(only_affine));
    CHECK(chain_legal(identity_map(RingDomain::annulus(1, 2))));
    HarmonicMapSpec del = identity_map(RingDomain::annulus(1, 2));
    del.stages = {DelegatedConformal{"x"}, AffinePost{AffineMap::identity()}};
    CHECK(chain_legal(del));
    CHECK_THROWS_AS(evaluate_map(del, Complex(1.5, 0)), ConstructionError);
    CHECK_THROWS_AS(evaluate_map(identity_map(RingDomain::annulus(1, 2)), Complex(0.5, 0)),
                    ConstructionError);
}

TEST_CASE("degenerate target") {
    Polygon sq{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    RingDomain target = RingDomain::punctured(sq, 0.0);
    HarmonicMapSpec spec = degenerate_target_map(RingDomain::annulus(1, std::exp(0.3)), target);
    CHECK(chain_legal(spec));
    double t = 0, image = 0;
    for (auto& [name, v] : spec.parameters) {
        if (name == "t") t = v;
        if (name == "image_modulus") image = v;
    }
    CHECK(image == doctest::Approx(0.3).epsilon(0.02 / 0.3));
    CHECK(t > 0);
    // Mod F_t(target) decreases in t.
    SolverOptions o;
    o.levels = 2;
    double prev = kInf;
    for (double tt : {0.01, 0.02, 0.04, 0.08}) {
        double m = modulus_best(RingDomain::ft_image(target, tt), o).value;
        CHECK(m < prev);
        prev = m;
    }
    CHECK_THROWS_AS(degenerate_target_map(RingDomain::annulus(1, 2), RingDomain::annulus(1, 3)),
                    ConstructionError);
}

TEST_CASE("affine rebalance") {
    Polygon outer{{-4, -4}, {4, -4}, {4, 4}, {-4, 4}}, inner{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    RingDomain target = RingDomain::polygonal(outer, inner);
    RingDomain source = RingDomain::annulus(1, 2);
    RootOptions ro;
    ro.solver.levels = 2;
    HarmonicMapSpec spec = affine_rebalance(source, target, 200, ro);
    CHECK(chain_legal(spec));
    double image = 0, src = 0;
    for (auto& [name, v] : spec.parameters) {
        if (name == "image_modulus") image = v;
        if (name == "source_modulus") src = v;
    }
    CHECK(src == doctest::Approx(std::log(2.0)).epsilon(0.01));
    CHECK(std::abs(image - src) <= 0.02);

    // Stretching lowers the modulus of the square frame monotonically.
    double prev = kInf;
    for (double M : {1.0, 2.0, 4.0, 8.0}) {
        double m = shear_modulus(target, stretch_shear(M, 0.0), ro.solver).value;
        CHECK(m < prev);
        prev = m;
    }
    CHECK(std::abs(stretch_shear(3, 0.7)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(affine_rebalance(source, RingDomain::teichmuller(1)), ConstructionError);
}

TEST_CASE("shear stages increase in x") {
    auto check = [](const HarmonicMapSpec& spec) {
        const double h = 1e-6;
        int bad = 0;
        for (Complex z : sample_domain(spec.source, 200, 9, 1e-2)) {
            double ux = (evaluate_map(spec, z + h, false).real() - evaluate_map(spec, z - h, false).real()) / (2 * h);
            if (!(ux > 0)) ++bad;
        }
        return bad;
    };
    CHECK(check(sc_shear_map(2, 3)) == 0);
    CHECK(check(sc_shear_map(0.5, 4)) == 0);
    // The power-shear chain ends in w -> -w, so test the bare stage on the slit plane.
    HarmonicMapSpec bare;
    bare.source = RingDomain::teichmuller(2);
    bare.target = bare.source;
    bare.stages = {MobiusPre{3.0, 0.0, 1.0, 1.0}, PowerShear{1.4}};
    for (Complex z : sample_domain(bare.source, 200, 4, 1e-2)) {
        Complex m = MobiusPre{3.0, 0.0, 1.0, 1.0}(z);
        const double h = 1e-6;
        double ux = (PowerShear{1.4}(m + h).real() - PowerShear{1.4}(m - h).real()) / (2 * h);
        CHECK(ux > 0);
    }
}

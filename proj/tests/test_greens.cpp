#include <cmath>
#include <random>

#include "doctest.h"
#include "ringmap/errors.hpp"
#include "ringmap/greens.hpp"

using namespace ringmap;

namespace {

Complex random_in_disk(std::mt19937& rng, double radius = 0.95) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2 * kPi * u(rng));
}

long double coth_l(long double x) { return std::cosh(x) / std::sinh(x); }

}  // namespace

TEST_CASE("disk Green's function") {
    CHECK(green_disk(0.5, 0.0).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    std::mt19937 rng(3);
    for (int n = 0; n < 200; ++n) {
        Complex z = random_in_disk(rng), w = random_in_disk(rng);
        GreenValue a = green_disk(z, w), b = green_disk(w, z);
        CHECK(a.value > 0);
        CHECK(std::abs(a.value - b.value) < 1e-12 * (1 + a.value));
        // Subordination under z -> z^2.
        CHECK(a.value <= green_disk(z * z, w * w).value + 1e-12);
    }
    CHECK(green_disk(Complex(0.3, 0.1), Complex(0.3, 0.1)).pole);
    CHECK(green_disk(std::polar(1 - 1e-9, 0.4), 0.2).value < 1e-8);
    CHECK_THROWS_AS(green_disk(1.0, 0.0), GreensError);
}

TEST_CASE("strip Green's function") {
    for (double alpha : {0.5, 1.0, 2.0})
        for (double y : {-2.0, -0.3, 0.7, 3.0}) {
            double expected = std::log(1 / std::tanh(alpha * std::abs(y) / 2));
            CHECK(green_strip(Complex(0, y), 0.0, alpha).value == doctest::Approx(expected).epsilon(1e-12));
        }
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double alpha = 0.8, half = kPi / (2 * alpha);
    for (int n = 0; n < 100; ++n) {
        Complex z(0.99 * half * u(rng), 3 * u(rng)), w(0.99 * half * u(rng), 3 * u(rng));
        CHECK(green_strip(z, w, alpha).value == doctest::Approx(green_strip(w, z, alpha).value));
    }
    CHECK(green_strip(Complex(0, kPi), 0.0, alpha).value >= std::log(1 / std::tanh(kPi * alpha / 2)) - 1e-15);
    CHECK(green_strip(0.1, 0.1, 1.0).pole);
    CHECK_THROWS_AS(green_strip(2.0, 0.0, 1.0), GreensError);
}

TEST_CASE("annulus lower bound and three circles") {
    long double x = std::pow(3.14159265358979323846264338327950288L, 2) / 4;
    CHECK(annulus_green_lower_bound(std::exp(1.0)) == doctest::Approx(static_cast<double>(std::log(coth_l(x)))).epsilon(1e-14));
    CHECK(annulus_green_lower_bound(std::exp(1.0)) == doctest::Approx(0.014384).epsilon(1e-4));
    CHECK(annulus_green_lower_bound(1e300) > 1.0);
    CHECK(annulus_green_lower_bound(1 + 1e-9) >= 0.0);
    CHECK(annulus_green_lower_bound(1 + 1e-3) < 1e-100);
    CHECK_THROWS_AS(annulus_green_lower_bound(1.0), GreensError);

    // The strip chain under w = e^z: alpha = pi / (2 log R).
    for (double R : {1.5, std::exp(1.0), 10.0}) {
        double alpha = kPi / (2 * std::log(R));
        for (double y = -kPi; y <= kPi; y += 0.1)
            if (y != 0.0) CHECK(green_strip(Complex(0, y), 0.0, alpha).value >= annulus_green_lower_bound(R) - 1e-12);
    }

    CHECK(schwarz_bound(0.0) == 1.0);
    CHECK(schwarz_bound(std::log(2.0)) == doctest::Approx(0.5));
    for (double R : {1.2, 3.0, 50.0}) {
        double k = std::tanh(kPi * kPi / (4 * std::log(R)));
        CHECK(schwarz_bound(annulus_green_lower_bound(R)) == doctest::Approx(k).epsilon(1e-12));
        CHECK(three_circles_bound(R, 0.0) == doctest::Approx(k).epsilon(1e-14));
    }
    long double k = std::tanh(x);
    CHECK(three_circles_bound(std::exp(1.0), 0.5) == doctest::Approx(static_cast<double>(std::sqrt(k))).epsilon(1e-14));
    CHECK(three_circles_bound(std::exp(1.0), 0.5) == doctest::Approx(0.992834).epsilon(1e-5));
    CHECK(three_circles_bound(std::exp(1.0), 1 - 1e-12) > 1 - 1e-12);
    CHECK_THROWS_AS(three_circles_bound(2.0, 1.0), GreensError);
}

TEST_CASE("Hadamard convexity on an annulus") {
    auto f = [](Complex z) { return (z - 1.0) / (z + 3.0); };
    auto logmax = [&](double r) {
        double m = 0;
        for (int i = 0; i < 4096; ++i) m = std::max(m, std::abs(f(std::polar(r, 2 * kPi * i / 4096))));
        return std::log(m);
    };
    for (double a = -0.9; a < 0.5; a += 0.2) {
        double b = a + 0.2, c = a + 0.5;
        double lb = logmax(std::exp(b));
        double chord = logmax(std::exp(a)) * (c - b) / (c - a) + logmax(std::exp(c)) * (b - a) / (c - a);
        CHECK(lb <= chord + 1e-9);
    }
}

TEST_CASE("dilatation normalization") {
    DilatationNormalization id = normalize_dilatation(0.0);
    CHECK(id(Complex(0.3, 0.2)) == Complex(0.3, 0.2));
    CHECK(std::abs(normalize_dilatation(0.3)(0.3)) < 1e-16);
    std::mt19937 rng(9);
    DilatationNormalization n = normalize_dilatation(Complex(0.4, -0.5));
    for (int i = 0; i < 200; ++i) CHECK(std::abs(n(random_in_disk(rng, 0.999))) < 1.0);
    CHECK_THROWS_AS(normalize_dilatation(1.0), GreensError);

    // h(z) = z + c conj(z)^2 / 2 on the unit disk: nu(z) = c conj(z).
    Complex c(0.5, 0.2);
    Complex a(0.3, -0.1);
    DilatationNormalization m = normalize_dilatation(c * std::conj(a));
    for (int i = 0; i < 300; ++i) {
        Complex z = random_in_disk(rng);
        if (std::abs(z - a) < 1e-6) continue;
        Complex hz = 1.0, hzb = c * std::conj(z);
        // Derivatives of H = h - kappa conj(h).
        Complex Hz = hz - m.kappa * std::conj(hzb);
        Complex Hzb = hzb - m.kappa * std::conj(hz);
        CHECK(std::abs(Hzb) / std::abs(Hz) <= schwarz_bound(green_disk(z, a).value) + 1e-9);
        CHECK(std::abs(std::abs(m(c * std::conj(z))) - std::abs(Hzb) / std::abs(Hz)) < 1e-12);
    }
}

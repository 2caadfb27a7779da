#include <boost/math/special_functions/ellint_1.hpp>
#include <cmath>

#include "doctest.h"
#include "ringmap/errors.hpp"
#include "ringmap/special_moduli.hpp"

using namespace ringmap;

namespace {

// K(m) = (pi/2) sum_n [ (2n)! / (4^n (n!)^2) ]^2 m^n, summed until the terms vanish.
double k_series(double m) {
    double coef = 1.0, sum = 0.0, mp = 1.0;
    for (int n = 0; n < 4000; ++n) {
        double term = coef * coef * mp;
        sum += term;
        if (term < 1e-18 * sum) break;
        coef *= (2.0 * n + 1) / (2.0 * n + 2);
        mp *= m;
    }
    return 0.5 * kPi * sum;
}

double cross_ratio(double a, double b, double c, double d) {
    return (c - a) * (d - b) / ((c - b) * (d - a));
}

ExtReal F(double x) { return ExtReal::finite(x); }

}  // namespace

TEST_CASE("elliptic K against series and boost") {
    CHECK(complete_elliptic_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(std::abs(complete_elliptic_K(0.5) - 1.854074677301372) < 1e-14);
    for (double m : {0.01, 0.2, 0.5, 0.7, 0.9}) {
        CHECK(std::abs(complete_elliptic_K(m) - k_series(m)) < 1e-13 * k_series(m));
        CHECK(std::abs(complete_elliptic_K(m) - boost::math::ellint_1(std::sqrt(m))) <
              1e-14 * complete_elliptic_K(m));
    }
    CHECK_THROWS_AS(complete_elliptic_K(1.0), ModulusError);
    CHECK(elliptic_K_diverging(1.0 - 1e-13));
    CHECK_FALSE(elliptic_K_diverging(0.999));
}

TEST_CASE("grotzsch mu") {
    CHECK(std::abs(grotzsch_mu(1.0 / std::sqrt(2.0)) - kPi / 2) < 1e-12);
    // mu(r) = log(4/r) + O(r^2) as r -> 0.
    for (double r : {0.1, 0.01, 1e-3}) CHECK(std::abs(grotzsch_mu(r) - std::log(4 / r)) < r * r);
    CHECK(grotzsch_mu(1 - 1e-9) > 0.0);
    CHECK(grotzsch_mu(1 - 1e-9) < 0.3);
    CHECK_THROWS_AS(grotzsch_mu(0.0), ModulusError);
    CHECK_THROWS_AS(grotzsch_mu(1.0), ModulusError);
    for (double r = 0.05; r <= 0.95 + 1e-12; r += 0.05) {
        double rc = std::sqrt(1 - r * r);
        CHECK(std::abs(grotzsch_mu(r) * grotzsch_mu(rc) - kPi * kPi / 4) < 1e-10);
    }
}

TEST_CASE("closed-form moduli") {
    CHECK(conformal_modulus_closed_form(RingDomain::annulus(1, std::exp(1.0))).value ==
          doctest::Approx(1.0).epsilon(1e-15));
    // Mod T(1) from the AGM, independent of mu: 2 * (pi/2) K(1/2)/K(1/2).
    CHECK(std::abs(teichmuller_modulus(1.0) - kPi) < 1e-12);
    for (double s = 1.01; s < 50; s *= 1.3) {
        CHECK(std::abs(grotzsch_modulus(s) - 0.5 * teichmuller_modulus(s * s - 1)) < 1e-10);
    }
    double prev = 0;
    for (double s = 0.01; s < 100; s *= 1.1) {
        double m = teichmuller_modulus(s);
        CHECK(m > prev + 1e-12);
        prev = m;
    }
    CHECK(conformal_modulus_closed_form(RingDomain::punctured({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 0.0))
              .infinite());
    CHECK_THROWS_AS(conformal_modulus_closed_form(
                        RingDomain::polygonal({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}},
                                              {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}})),
                    ModulusError);
    CHECK_FALSE(has_closed_form(RingDomain::slit_strip(1)));
    // Holomorphic affine images of a Grotzsch ring keep their modulus.
    RingDomain g = apply_affine({Complex(0, 2), 0.0, 1.0}, RingDomain::grotzsch(3));
    CHECK(conformal_modulus_closed_form(g).value == doctest::Approx(grotzsch_modulus(3)));
}

TEST_CASE("teichmuller parameter by cross-ratio") {
    for (double s : {0.3, 1.0, 4.0}) {
        RingDomain t = RingDomain::real_slit_ring({F(-1), F(0)}, {F(s), ExtReal::infinity()});
        CHECK(teichmuller_parameter(t) == doctest::Approx(s).epsilon(1e-14));
        RingDomain g = RingDomain::real_slit_ring({ExtReal::infinity(), F(0)}, {F(s), F(s + 1)});
        CHECK(teichmuller_parameter(g) == doctest::Approx(s).epsilon(1e-14));
    }
    double cr = cross_ratio(0, 1, 2, 3);
    double s = 1 / (cr - 1);
    RingDomain b = RingDomain::real_slit_ring({F(0), F(1)}, {F(2), F(3)});
    CHECK(teichmuller_parameter(b) == doctest::Approx(s).epsilon(1e-14));
    CHECK(s == doctest::Approx(3.0));
    // The wrapped arc [5, -1] through infinity.
    RingDomain w = RingDomain::real_slit_ring({F(5), F(-1)}, {F(0), F(1)});
    CHECK(teichmuller_parameter(w) == doctest::Approx(1 / (cross_ratio(5, -1, 0, 1) - 1)));
}

TEST_CASE("carleman modulus") {
    CHECK(carleman_modulus(RingDomain::annulus(1, 3)).value == doctest::Approx(std::log(3.0)));
    CHECK(carleman_modulus(RingDomain::teichmuller(1)).infinite());
    RingDomain p = RingDomain::polygonal({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}},
                                         {{-0.25, -0.25}, {0.25, -0.25}, {0.25, 0.25}, {-0.25, 0.25}});
    CHECK(carleman_modulus(p).value == doctest::Approx(std::log(2.0)));
}

TEST_CASE("width bound") {
    for (double s : {1.5, 3.0, 7.0}) {
        auto b = width_bound(RingDomain::grotzsch(s));
        REQUIRE(b);
        CHECK(b->value == doctest::Approx(teichmuller_modulus((s - 1) / 2)));
        CHECK(b->method == ModulusMethod::BoundOnly);
    }
    CHECK(width_bound(RingDomain::annulus(1, 2))->value == doctest::Approx(teichmuller_modulus(0.5)));
    for (double s : {0.5, 2.0}) {
        RingDomain r = RingDomain::real_slit_ring({F(-1), F(0)}, {F(s), ExtReal::infinity()});
        CHECK(width_bound(r)->value == doctest::Approx(teichmuller_modulus(s)));
    }
    CHECK_FALSE(width_bound(RingDomain::punctured({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 0.0)));
    // The bound dominates the conformal modulus.
    CHECK(width_bound(RingDomain::annulus(1, 2))->value >= std::log(2.0));
}

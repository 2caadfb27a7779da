#include <cmath>
#include <random>

#include "doctest.h"
#include "ringmap/bounds_gate.hpp"
#include "ringmap/errors.hpp"

using namespace ringmap;

namespace {

// Dense scan of a (t^(1-a) - 1) / (t^(1-a) + 1) followed by a local golden refinement.
double lambda_scan(double t) {
    auto g = [t](double a) {
        double p = std::pow(t, 1 - a);
        return a * (p - 1) / (p + 1);
    };
    int best = 1;
    const int n = 20000;
    for (int i = 1; i < n; ++i)
        if (g(double(i) / n) > g(double(best) / n)) best = i;
    double lo = double(best - 1) / n, hi = double(best + 1) / n;
    for (int it = 0; it < 100; ++it) {
        double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
        if (g(m1) < g(m2)) lo = m1;
        else hi = m2;
    }
    return g(0.5 * (lo + hi));
}

double cosh_series(double x) {
    double term = 1, sum = 1;
    for (int k = 1; k < 60; ++k) {
        term *= x * x / ((2 * k - 1) * (2 * k));
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("lambda") {
    CHECK(lambda_numeric(1.0) == 0.0);
    for (double t : {1.1, 2.0, std::exp(2.0), 10.0, 1e4, 1e12}) {
        double l = lambda_numeric(t);
        CHECK(std::abs(l - lambda_scan(t)) < 1e-10);
        CHECK(l >= lambda_closed_lower(t));
        CHECK(l < 1.0);
    }
    CHECK(lambda_closed_lower(std::exp(2.0)) == doctest::Approx((2 - std::log(3.0)) / 4));
    CHECK(lambda_numeric(std::exp(2.0)) >= (2 - std::log(3.0)) / 4);
    CHECK(lambda_closed_lower(1.0) == 0.0);
    CHECK(lambda_numeric(1e300) > 0.98);
    // Increasing in t.
    double prev = 0;
    for (double t = 1.01; t < 1e6; t *= 1.7) {
        CHECK(lambda_numeric(t) > prev);
        prev = lambda_numeric(t);
    }
    CHECK_THROWS_AS(lambda_numeric(0.5), GateError);
}

TEST_CASE("Phi and the conjectured Phi") {
    CHECK(phi(1e-3) >= 0.0);
    CHECK(phi(1e-3) < 1e-6);
    double prev = 0;
    for (int tau = 1; tau <= 50; ++tau) {
        double p = phi(tau);
        CHECK(p > prev);
        CHECK(p < 1.0);
        CHECK(p <= phi_conjectured(tau));
        prev = p;
    }
    CHECK(phi(20) > phi(10));
    for (double tau = 0.5; tau <= 50; tau += 0.25) CHECK(phi(tau) <= phi_conjectured(tau));
    CHECK(phi_conjectured(1.0) == doctest::Approx(std::log(cosh_series(1.0))).epsilon(1e-14));
    CHECK(phi_conjectured(1.0) == doctest::Approx(0.4338).epsilon(1e-4));
    CHECK(phi_conjectured(1e6) < 1.0);
    CHECK(phi_conjectured(1e6) > 1 - 1e-6);
    CHECK(std::isfinite(phi_conjectured(1e308)));
}

TEST_CASE("Nitsche gate") {
    CHECK(nitsche_gate(1, 1.6).status == VerdictStatus::Exists);
    CHECK(nitsche_gate(1, 1.5).status == VerdictStatus::NotExists);
    CHECK(nitsche_gate(1, std::cosh(1.0)).status == VerdictStatus::Exists);
    CHECK(nitsche_gate(1, 1.6).reason == VerdictReason::NitscheIff);
    CHECK_FALSE(nitsche_gate(1, 1.6).gap);
}

TEST_CASE("existence verdicts") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.05, 4.0);
    for (int n = 0; n < 30; ++n) {
        double m = u(rng), ratio = 1 + 10 * u(rng);
        Verdict v = existence_verdict(RingDomain::annulus(1, std::exp(m)), RingDomain::annulus(2, 2 * ratio));
        CHECK(v.status == nitsche_gate(m, ratio).status);
    }
    Polygon sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    Verdict b = existence_verdict(RingDomain::annulus(1, std::exp(1.0)), RingDomain::exterior(sq));
    CHECK(b.status == VerdictStatus::NotExists);
    CHECK(b.reason == VerdictReason::BoundedComplement);
    Verdict d = existence_verdict(RingDomain::annulus(1, std::exp(1.0)),
                                  RingDomain::annulus(1, 3).with_declared_complement_bounded(true));
    CHECK(d.status == VerdictStatus::NotExists);

    // T(s) keeps its modulus under shears, so Mod_@ T(1) = pi.
    Verdict t = existence_verdict(RingDomain::annulus(1, std::exp(0.5)), RingDomain::teichmuller(1));
    CHECK(t.status == VerdictStatus::Exists);
    CHECK(t.reason == VerdictReason::AffineSufficient);
    CHECK(t.target_affine_modulus == doctest::Approx(kPi));

    // Source modulus 4 against T(1): pi lies between Phi(4) * 4 and 4.
    Verdict g = existence_verdict(RingDomain::annulus(1, std::exp(4.0)), RingDomain::teichmuller(1));
    CHECK(g.status == VerdictStatus::Unknown);
    REQUIRE(g.gap);
    CHECK(g.gap->first < g.target_affine_modulus);
    CHECK(g.gap->second > g.target_affine_modulus);
    REQUIRE(g.conjectured);

    // Phi(m) m eventually passes pi.
    double m = 1;
    while (phi(m) * m <= kPi + 0.1) m *= 1.5;
    Verdict nv = existence_verdict(RingDomain::annulus(1, std::exp(m)), RingDomain::teichmuller(1));
    CHECK(nv.status == VerdictStatus::NotExists);
    CHECK(nv.reason == VerdictReason::NecessaryViolated);
}

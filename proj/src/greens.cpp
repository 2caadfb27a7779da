#include "ringmap/greens.hpp"

#include <cmath>

#include "ringmap/errors.hpp"

namespace ringmap {

namespace {

// log coth x for x > 0 without overflow at either end.
double log_coth(double x) { return std::log1p(2.0 / std::expm1(2.0 * x)); }

}  // namespace

GreenValue green_disk(Complex z, Complex zeta) {
    if (!(std::abs(z) < 1.0) || !(std::abs(zeta) < 1.0))
        throw GreensError("outside", "both points must lie in the open unit disk");
    if (z == zeta) return {kInf, true};
    return {std::log(std::abs((1.0 - z * std::conj(zeta)) / (z - zeta))), false};
}

GreenValue green_strip(Complex z, Complex zeta, double alpha) {
    if (!(alpha > 0.0)) throw GreensError("alpha", "strip parameter must be positive");
    double half = kPi / (2.0 * alpha);
    if (!(std::abs(z.real()) < half) || !(std::abs(zeta.real()) < half))
        throw GreensError("outside", "both points must lie in the strip");
    if (z == zeta) return {kInf, true};
    const Complex i(0.0, 1.0);
    Complex ez = std::exp(i * alpha * z);
    Complex num = ez + std::exp(-i * alpha * std::conj(zeta));
    Complex den = ez - std::exp(i * alpha * zeta);
    return {std::log(std::abs(num / den)), false};
}

double annulus_green_lower_bound(double R) {
    if (!(R > 1.0)) throw GreensError("radius", "annulus A(1/R, R) needs R > 1");
    if (R == kInf) return kInf;
    return log_coth(kPi * kPi / (4.0 * std::log(R)));
}

double schwarz_bound(double green_value) {
    if (!(green_value >= 0.0)) throw GreensError("negative", "Green's function values are nonnegative");
    return std::exp(-green_value);
}

double three_circles_bound(double R, double alpha) {
    if (!(R > 1.0)) throw GreensError("radius", "annulus A(1/R, R) needs R > 1");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw GreensError("alpha", "alpha must lie in [0, 1)");
    double k = std::tanh(kPi * kPi / (4.0 * std::log(R)));
    return std::pow(k, 1.0 - alpha);
}

DilatationNormalization normalize_dilatation(Complex nu_at_a) {
    if (!(std::abs(nu_at_a) < 1.0))
        throw GreensError("dilatation", "second complex dilatation must satisfy |nu| < 1");
    return {nu_at_a};
}

}  // namespace ringmap

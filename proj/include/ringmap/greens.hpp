#pragma once

#include "ringmap/domain.hpp"

namespace ringmap {

/// Green's function value; `pole` marks coincident arguments, where value is +inf.
struct GreenValue {
    double value = 0.0;
    bool pole = false;
};

/// Unit disk: log |(1 - z conj(zeta)) / (z - zeta)|.
GreenValue green_disk(Complex z, Complex zeta);

/// Vertical strip |Re z| < pi / (2 alpha).
GreenValue green_strip(Complex z, Complex zeta, double alpha);

/// log coth(pi^2 / (4 log R)): lower bound for the Green's function of A(1/R, R)
/// with both arguments on the unit circle.
double annulus_green_lower_bound(double R);

/// exp(-g).
double schwarz_bound(double green_value);

/// k^(1 - alpha) with k = tanh(pi^2 / (4 log R)).
double three_circles_bound(double R, double alpha);

/// Disk automorphism nu -> (nu - kappa) / (1 - conj(kappa) nu) taken by the dilatation of
/// H = h - kappa conj(h) with kappa = nu(a).
struct DilatationNormalization {
    Complex kappa;
    Complex operator()(Complex nu) const { return (nu - kappa) / (1.0 - std::conj(kappa) * nu); }
    /// H = h - kappa conj(h) for a value of h.
    Complex apply(Complex h) const { return h - kappa * std::conj(h); }
};
DilatationNormalization normalize_dilatation(Complex nu_at_a);

}  // namespace ringmap

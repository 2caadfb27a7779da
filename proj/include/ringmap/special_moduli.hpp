#pragma once

#include <optional>

#include "ringmap/domain.hpp"

namespace ringmap {

/// Complete elliptic integral of the first kind, parameter m = k^2, by the AGM.
double complete_elliptic_K(double m);
/// True where K(m) is dominated by its logarithmic singularity (m > 1 - 1e-12).
bool elliptic_K_diverging(double m);

/// Modulus of the Grotzsch ring {|z| < 1} minus [0, r].
double grotzsch_mu(double r);
/// mu(r) given r and r' = sqrt(1 - r^2) separately, avoiding cancellation.
double grotzsch_mu(double r, double r_complement);

double teichmuller_modulus(double s);  ///< Mod T(s)
double grotzsch_modulus(double s);     ///< Mod G(s)

/// Parameter s of the Teichmuller ring conformally equivalent to a real slit ring.
double teichmuller_parameter(const RingDomain& d);

/// Closed-form modulus of canonical rings. Throws ModulusError("moduli.no_closed_form")
/// for kinds routed to the grid solver.
ExtendedModulus conformal_modulus_closed_form(const RingDomain& d);
bool has_closed_form(const RingDomain& d);

ExtendedModulus carleman_modulus(const RingDomain& d);

/// Upper bound for the affine modulus from width and separation of the complement.
/// Returns nullopt where the inner component has zero width and is not a slit on a line
/// shared with the outer component.
std::optional<ExtendedModulus> width_bound(const RingDomain& d);

}  // namespace ringmap

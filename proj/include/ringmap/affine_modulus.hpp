#pragma once

#include <vector>

#include "ringmap/capacity.hpp"
#include "ringmap/domain.hpp"

namespace ringmap {

enum class Attainment { Attained, SupremumExtrapolated, Infinite };
const char* to_string(Attainment a);

struct ShearSample {
    Complex k;
    ExtendedModulus modulus;
};

struct AffineModulusOptions {
    int budget = 200;  ///< modulus evaluations, including the final re-solve
    SolverOptions search = [] {
        SolverOptions o;
        o.levels = 2;
        return o;
    }();
    SolverOptions final_solve;
    int extensions = 3;
    /// Growth across the extensions beyond which the supremum is reported infinite.
    double divergence_threshold = 1.0;
};

struct AffineModulusResult {
    ExtendedModulus value;
    Complex best_shear{0.0, 0.0};
    Attainment attained = Attainment::Attained;
    std::vector<ShearSample> trace;
};

/// Mod of the image of d under z + k conj(z), |k| < 1.
ExtendedModulus shear_modulus(const RingDomain& d, Complex k,
                              const SolverOptions& opts = SolverOptions{});

/// Shear parameter k with phi = (conformal or anticonformal affine) o (z + k conj(z)).
Complex shear_parameter(const AffineMap& phi);

/// Coarse polar grid over k = rho e^{i psi}, then Nelder-Mead, or extension towards
/// |k| = 1 when the maximum sits on the outer ring.
AffineModulusResult affine_modulus(const RingDomain& d, int budget);
AffineModulusResult affine_modulus(const RingDomain& d, const AffineModulusOptions& opts);

}  // namespace ringmap

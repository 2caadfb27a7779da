#pragma once

#include <optional>
#include <string>
#include <utility>

#include "ringmap/affine_modulus.hpp"
#include "ringmap/domain.hpp"

namespace ringmap {

/// sup over 0 < a < 1 of a (t^(1-a) - 1) / (t^(1-a) + 1), t >= 1.
double lambda_numeric(double t);
/// (log t - log(1 + log t)) / (2 + log t), clamped at 0.
double lambda_closed_lower(double t);
/// lambda(coth(pi^2 / (2 tau))).
double phi(double tau);
/// log(cosh tau) / tau.
double phi_conjectured(double tau);

enum class VerdictStatus { Exists, NotExists, Unknown };
enum class VerdictReason {
    NitscheIff,           ///< circular annuli, iff criterion
    AffineSufficient,     ///< Mod_@ target > Mod source
    BoundedComplement,    ///< target complement bounded: no harmonic homeomorphism
    NecessaryViolated,    ///< Mod_@ target / Mod source < Phi(Mod source)
    Gap,
};
std::string to_string(VerdictStatus s);
std::string to_string(VerdictReason r);

struct Verdict {
    VerdictStatus status = VerdictStatus::Unknown;
    VerdictReason reason = VerdictReason::Gap;
    /// (necessary, sufficient) thresholds on the Mod_@ axis; present iff Unknown.
    std::optional<std::pair<double, double>> gap;
    /// Status if Phi(tau) = log(cosh tau) / tau.
    std::optional<VerdictStatus> conjectured;

    double source_modulus = 0.0;
    double target_affine_modulus = 0.0;
    double phi_of_source = 0.0;
    double error_budget = 0.0;
    std::string note;
};

/// Circular annuli: exists iff target ratio >= cosh(source modulus).
Verdict nitsche_gate(double mod_source, double target_ratio);

struct GateOptions {
    AffineModulusOptions affine;
    SolverOptions solver;
};

Verdict existence_verdict(const RingDomain& source, const RingDomain& target,
                          const GateOptions& opts = GateOptions{});

}  // namespace ringmap

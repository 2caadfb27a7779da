#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ringmap/capacity.hpp"
#include "ringmap/domain.hpp"

namespace ringmap {

/// z -> (a z + b) / (c z + d), conformal precomposition.
struct MobiusPre {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};
    Complex operator()(Complex z) const;
};

/// Conformal map onto an intermediate ring that is recorded but not evaluated here.
struct DelegatedConformal {
    std::string description;
};

/// h(z) = Re f(z) + i Im z with f(z) = int_0^z A ((w + 1) / w)^a dw on the upper half-plane,
/// extended by u(conj z) = u(z). f(0) = 0, f(-1) = -1 + i b, a = arctan(b) / pi.
struct ShearAnalytic {
    double a = 0.0;
    Complex operator()(Complex z) const;
    double b() const;
    double scale() const;  ///< A = tan(pi a) / (pi a)
    /// f itself on the closed upper half-plane.
    Complex f(Complex z) const;
};

/// h(z) = Re z^alpha + i Im z on C minus (-inf, 0], principal branch.
struct PowerShear {
    double alpha = 1.0;
    Complex operator()(Complex z) const;
};

/// zeta -> (zeta - t^2 / conj(zeta)) / 2 about a centre.
struct FtInverse {
    double t = 0.0;
    Complex center{0.0, 0.0};
    Complex operator()(Complex zeta) const;
};

struct AffinePost {
    AffineMap map;
};

using MapStage = std::variant<MobiusPre, DelegatedConformal, ShearAnalytic, PowerShear, FtInverse,
                              AffinePost>;

enum class StageRole { Conformal, Harmonic, Affine };
StageRole stage_role(const MapStage& s);
std::string stage_name(const MapStage& s);

struct HarmonicMapSpec {
    std::vector<MapStage> stages;
    RingDomain source = RingDomain::annulus(1, 2);
    RingDomain target = RingDomain::annulus(1, 2);
    /// |Mod mismatch| for constructions that root-find on a modulus, 0 otherwise.
    double residual = 0.0;
    /// Free parameters of the construction, e.g. {"t", 1.7}.
    std::vector<std::pair<std::string, double>> parameters;
};

/// Conformal stages, then at most one harmonic stage, then affine stages. A chain without
/// a harmonic stage uses its last conformal stage as the middle. Throws ConstructionError.
void check_chain(const HarmonicMapSpec& spec);
bool chain_legal(const HarmonicMapSpec& spec);

/// Evaluates every stage in order. Throws ConstructionError on delegated stages or on
/// points outside the source domain (checked when `check_domain`).
Complex evaluate_map(const HarmonicMapSpec& spec, Complex z, bool check_domain = true);

Complex ft_forward(Complex z, double t);
Complex ft_inverse(Complex zeta, double t);

HarmonicMapSpec identity_map(const RingDomain& d);

/// T(s) onto T(t), t >= s, through the Schwarz-Christoffel shear.
HarmonicMapSpec sc_shear_map(double s, double t);
/// Re f_a(s) for the kernel exponent a.
double sc_endpoint(double a, double s);

/// T(s) onto T(t), t <= s, through the power shear. Requires (t+1)/t <= ((s+1)/s)^(3/2).
HarmonicMapSpec power_shear_map(double s, double t);

struct RootOptions {
    SolverOptions solver;
    double modulus_tolerance = 1e-3;
    int max_evaluations = 60;
};

/// source onto the punctured target via F_t^{-1}; t solves Mod F_t(target) = Mod source.
HarmonicMapSpec degenerate_target_map(const RingDomain& source, const RingDomain& target,
                                      const RootOptions& opts = RootOptions{});

/// source onto target by an affine image phi(target) with Mod phi(target) = Mod source.
/// The result's AffinePost stage holds phi^{-1}; parameters include the shear k.
HarmonicMapSpec affine_rebalance(const RingDomain& source, const RingDomain& target,
                                 int budget = 200, const RootOptions& opts = RootOptions{});

/// Shear k with |k| = (M - 1) / (M + 1) stretching by M along direction e^{i psi}.
Complex stretch_shear(double M, double psi);

}  // namespace ringmap

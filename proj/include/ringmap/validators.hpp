#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ringmap/constructors.hpp"
#include "ringmap/domain.hpp"
#include "ringmap/geometry.hpp"

namespace ringmap {

using PlaneMap = std::function<Complex(Complex)>;

/// Random points of d inside `region`, at least `margin` from the boundary.
std::vector<Complex> sample_domain(const RingDomain& d, int n, std::uint64_t seed, double margin,
                                   std::optional<Box> region = std::nullopt);

/// Default sampling window: the inner complement padded by its diameter and separation.
Box sampling_region(const RingDomain& d);

/// max over samples and both coordinates of |5-point Laplacian| / (|gradient| + 1e-300),
/// with the Laplacian extrapolated from steps h and h/2.
/// The step at each sample is min(step, dist / 10).
double check_harmonic(const PlaneMap& map, const RingDomain& d, int samples, double step = 1e-4,
                      std::uint64_t seed = 1);

/// Near-collisions of images from well separated sources plus samples whose Jacobian sign
/// disagrees with the majority. 0 means no violation was found at this sample count.
int check_injective(const PlaneMap& map, const RingDomain& d, int samples, std::uint64_t seed = 1);

/// Winding number of a closed polyline about p.
int winding_number(const std::vector<Complex>& curve, Complex p);

/// Positively oriented closed curve separating the complement components of a canonical ring,
/// with a point of the bounded component.
struct CoreCurve {
    std::vector<Complex> points;
    Complex inside;
};
CoreCurve core_curve(const RingDomain& d, int n = 512);

struct CircleMap {
    std::function<Complex(double)> evaluator;
    enum class Sense { Preserving, Reversing } sense = Sense::Preserving;
};

struct FourierResult {
    int N = 0;
    std::vector<Complex> c;  ///< c[n + N] for n in [-N, N]
    double aliasing_bound = 0.0;
    Complex at(int n) const { return c[static_cast<std::size_t>(n + N)]; }
};

/// Discrete transform on 4N uniform samples. Throws ValidationError when |f| deviates from 1.
FourierResult fourier_coefficients(const CircleMap& f, int N);

struct WeitsmanResult {
    double sum01 = 0.0;  ///< |c_0| + |c_1|
    bool pass = false;
    bool homeomorphism = false;
    int degree = 0;
    double shapiro_sum = 0.0;  ///< |c_0|^2 + ... + |c_degree|^2
    double aliasing_bound = 0.0;
};

/// Throws ValidationError for sense-reversing maps. Non-homeomorphic covers are not tested
/// (pass = false) but their Shapiro sum is reported.
WeitsmanResult weitsman_test(const CircleMap& f, int N);

/// min over samples in A(R^-alpha, R^alpha), alpha in {0, 1/4, 1/2, 3/4}, of
/// three_circles_bound(R, alpha) - |normalized dilatation|; base point a on the unit circle.
double dilatation_check(const PlaneMap& map, double R, Complex a, int samples,
                        std::uint64_t seed = 1);

struct ValidationReport {
    double harmonicity_max = 0.0;
    int injectivity_violations = 0;
    double boundary_hausdorff = 0.0;
    std::optional<double> dilatation_margin;
    std::optional<int> degree;
    int samples = 0;
    bool evaluable = true;
    bool passed = false;
};

struct ValidationTolerances {
    double harmonic = 1e-4;
    double boundary = 1e-6;
};

ValidationReport validate_map(const HarmonicMapSpec& spec, int samples, std::uint64_t seed = 1,
                              const ValidationTolerances& tol = ValidationTolerances{});

}  // namespace ringmap

#include "ringmap/bounds_gate.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "ringmap/capacity.hpp"
#include "ringmap/errors.hpp"

namespace ringmap {

namespace {

// lambda as a function of L = log t; the ratio in the supremum is tanh((1 - a) L / 2).
double lambda_of_log(double L) {
    if (L == 0.0) return 0.0;
    if (L == kInf) return 1.0;
    auto neg = [L](double a) { return -a * std::tanh(0.5 * (1.0 - a) * L); };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::brent_find_minima(neg, 0.0, 1.0,
                                                   std::numeric_limits<double>::digits / 2, iters);
    if (iters < 200) return -r.second;
    // Brent did not settle; fall back to a dense scan.
    double best = 0.0;
    for (int i = 1; i < 10000; ++i) best = std::max(best, -neg(i / 10000.0));
    return best;
}

double log_coth(double x) { return std::log1p(2.0 / std::expm1(2.0 * x)); }

}  // namespace

double lambda_numeric(double t) {
    if (!(t >= 1.0)) throw GateError("lambda_domain", "lambda is defined for t >= 1");
    return lambda_of_log(std::log(t));
}

double lambda_closed_lower(double t) {
    if (!(t >= 1.0)) throw GateError("lambda_domain", "lambda is defined for t >= 1");
    double L = std::log(t);
    return std::max(0.0, (L - std::log1p(L)) / (2.0 + L));
}

double phi(double tau) {
    if (!(tau > 0.0)) throw GateError("phi_domain", "Phi is defined for tau > 0");
    if (tau == kInf) return 1.0;
    return lambda_of_log(log_coth(kPi * kPi / (2.0 * tau)));
}

double phi_conjectured(double tau) {
    if (!(tau > 0.0)) throw GateError("phi_domain", "Phi is defined for tau > 0");
    if (tau == kInf) return 1.0;
    if (tau < 1.0) return std::log(std::cosh(tau)) / tau;
    return (tau + std::log1p(std::exp(-2.0 * tau)) - std::log(2.0)) / tau;
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Exists: return "Exists";
        case VerdictStatus::NotExists: return "NotExists";
        case VerdictStatus::Unknown: return "Unknown";
    }
    return "?";
}

std::string to_string(VerdictReason r) {
    switch (r) {
        case VerdictReason::NitscheIff: return "nitsche-iff";
        case VerdictReason::AffineSufficient: return "affine-sufficient";
        case VerdictReason::BoundedComplement: return "bounded-complement";
        case VerdictReason::NecessaryViolated: return "necessary-violated";
        case VerdictReason::Gap: return "gap";
    }
    return "?";
}

Verdict nitsche_gate(double mod_source, double target_ratio) {
    if (!(mod_source > 0.0)) throw GateError("modulus", "source modulus must be positive");
    if (!(target_ratio > 1.0)) throw GateError("ratio", "target ratio R*/r* must exceed 1");
    Verdict v;
    v.reason = VerdictReason::NitscheIff;
    v.status = target_ratio >= std::cosh(mod_source) ? VerdictStatus::Exists : VerdictStatus::NotExists;
    v.source_modulus = mod_source;
    v.target_affine_modulus = std::log(target_ratio);
    v.phi_of_source = phi(mod_source);
    return v;
}

Verdict existence_verdict(const RingDomain& source, const RingDomain& target,
                          const GateOptions& opts) {
    ExtendedModulus m = modulus_best(source, opts.solver);
    const auto* sa = source.as<Annulus>();
    const auto* ta = target.as<Annulus>();
    if (sa && ta && !target.complement_bounded()) return nitsche_gate(m.value, ta->R / ta->r);

    Verdict v;
    v.source_modulus = m.value;
    v.phi_of_source = phi(m.value);
    if (target.complement_bounded() && !m.infinite()) {
        v.status = VerdictStatus::NotExists;
        v.reason = VerdictReason::BoundedComplement;
        v.target_affine_modulus = kInf;
        v.note = "target complement is bounded";
        return v;
    }

    AffineModulusResult ma = affine_modulus(target, opts.affine);
    v.target_affine_modulus = ma.value.value;
    v.error_budget = m.error() + ma.value.error();
    if (m.infinite()) {
        v.gap = std::make_pair(kInf, kInf);
        v.note = "degenerate source: neither criterion applies";
        return v;
    }
    if (ma.value.value - m.value > v.error_budget) {
        v.status = VerdictStatus::Exists;
        v.reason = VerdictReason::AffineSufficient;
        return v;
    }
    double necessary = v.phi_of_source * m.value;
    if (necessary - ma.value.value > v.error_budget) {
        v.status = VerdictStatus::NotExists;
        v.reason = VerdictReason::NecessaryViolated;
        return v;
    }
    v.gap = std::make_pair(necessary, m.value);
    double conjectured = phi_conjectured(m.value) * m.value;
    v.conjectured = conjectured - ma.value.value > v.error_budget ? VerdictStatus::NotExists
                                                                   : VerdictStatus::Unknown;
    if (std::abs(ma.value.value - m.value) <= v.error_budget)
        v.note = "affine modulus equals the source modulus within error";
    return v;
}

}  // namespace ringmap

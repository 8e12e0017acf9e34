#pragma once

#include <map>
#include <string>

#include "fbcsf/flow.hpp"

namespace fbcsf {

// Parameters of the barrier preservation theorem. Construction enforces the
// stated ranges c in (0, 1/100), eps in (0, 1/10).
struct BarrierCheckConfig {
    double c = 0.005;
    double eps = 0.05;
    bool enforce_hypothesis = true;

    BarrierCheckConfig(double c_, double eps_, bool enforce)
        : c(c_), eps(eps_), enforce_hypothesis(enforce) {
        if (!(c > 0.0) || !(c < 0.01)) {
            throw std::invalid_argument("barrier check: c must lie in (0, 1/100)");
        }
        if (!(eps > 0.0) || !(eps < 0.1)) {
            throw std::invalid_argument("barrier check: eps must lie in (0, 1/10)");
        }
    }
};

// Result of one verification. `applicable` false marks runs outside the
// check's hypotheses (reported, never counted as failures); residuals and
// tolerances are always recorded next to each other.
struct CheckReport {
    std::string check;
    bool pass = false;
    bool applicable = true;
    bool hypothesis_held = false;
    std::string hypothesis_mode;
    std::map<std::string, double> residuals;
    std::map<std::string, double> tolerances;
    std::string notes;

    bool ok() const { return !applicable || pass; }
};

// Theorem: if min Z >= 0 at t = 0 for the barrier phi, it stays >= -10 h L
// at every snapshot. Recomputes min Z per snapshot for the configured phi.
CheckReport check_barrier_preservation(const FlowTrace& trace, const BarrierCheckConfig& cfg);

// Crude exponential bound: Psi(delta, t) >= c L(t) e^{-4 pi^2 t / Lmin^2}
// sin(pi delta / L(t)) with c fitted at t = 0. Inapplicable when the length
// is not bounded away from zero.
CheckReport check_crude_bound(const FlowTrace& trace);

// Long-time dichotomy: chord case (curvature collapse + Hausdorff distance
// to the fitted critical chord) or extinction case (rescaled distance to the
// unit semicircle + boundary extinction point).
CheckReport check_grayson_dichotomy(const FlowTrace& trace);

// d(gamma(x), boundary) >= c_hat lambda(x) at every snapshot, with
// c_hat = factor * (initial min of d/l over the double).
CheckReport check_boundary_avoidance(const FlowTrace& trace, double factor = 0.9);

// L non-increasing, K + K~ non-increasing within 10 h, inflection count
// non-increasing outside remesh transients.
CheckReport check_monotonicity(const FlowTrace& trace);

// Critical chord (segment meeting the boundary orthogonally at both ends)
// nearest to the given endpoint parameters, by Newton on the two
// orthogonality conditions.
struct CriticalChord {
    double s0 = 0.0, s1 = 0.0;
    Vec2 p0, p1;
    bool converged = false;
};
CriticalChord fit_critical_chord(const ConvexDomain& domain, double s0, double s1);

}  // namespace fbcsf

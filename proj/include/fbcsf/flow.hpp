#pragma once

#include <string>

#include "fbcsf/chord_arc.hpp"
#include "fbcsf/curve.hpp"

namespace fbcsf {

struct StopRule {
    double length_below = 0.0;  // <= 0 disables
    double time_at = kInf;
    bool min_z_negative = false;  // stop once min Z < 0 (needs phi)
    long max_steps = 10'000'000;
};

struct FlowConfig {
    double dt_safety = 0.2;      // dt = dt_safety * h_min^2, must be in (0, 0.5]
    int remesh_every = 25;       // steps between arclength equidistributions
    int target_edge_count = 0;   // 0 keeps the initial edge count
    double output_interval = 0.01;
    double tol_orth = 1e-6;
    StopRule stop;
};

enum class Classification {
    chord_converged,
    extinction_suspected,
    budget_exhausted,
    singularity_suspected,
};

const char* to_string(Classification c);

struct SnapshotDiagnostics {
    double length = 0.0;
    // Decay rate (L_after - L_before)/dt of the last accepted step; NaN on
    // the initial snapshot. Matches -int kappa^2 ds to discretisation error.
    double dL_dt_step = kNaN;
    double int_kappa_sq = 0.0;
    double total_curvature_K = 0.0;  // integral |kappa|
    double boundary_travel = 0.0;    // accumulated int |kappa^S| over endpoint travel
    double max_abs_kappa = 0.0;
    int inflection_count = 0;
    int curvature_vertex_count = 0;
    double min_z = kNaN;  // for the configured phi, NaN when absent
    double s_left = 0.0, s_right = 0.0;
    double orth_left = 0.0, orth_right = 0.0;
    double h_min = 0.0, h_max = 0.0;
    double min_boundary_distance = 0.0;  // over interior vertices
    long step_index = 0;
    int remesh_count = 0;
};

struct Snapshot {
    double t = 0.0;
    DiscreteCurve curve;
    SnapshotDiagnostics diag;
};

struct FlowTrace {
    std::vector<Snapshot> snapshots;
    Classification classification = Classification::budget_exhausted;
    std::string stop_reason;
    long total_steps = 0;
    const ConvexDomain* domain = nullptr;  // owned by the caller

    // Total curvature of the boundary portion still to be traversed after
    // snapshot i (counted with multiplicity); K + K~ is the monotone
    // quantity.
    double k_tilde(size_t i) const {
        return snapshots.back().diag.boundary_travel - snapshots[i].diag.boundary_travel;
    }
    double k_bold(size_t i) const {
        return snapshots[i].diag.total_curvature_K + k_tilde(i);
    }
};

// One explicit Euler step: interior vertices move by the discrete curvature
// vector times dt, endpoints follow the orthogonal-contact solve.
// Preconditions: dt <= dt_safety * h_min^2 (throws std::invalid_argument).
// Geometric failures (embeddedness, interior escape, endpoint divergence)
// throw std::runtime_error; run() treats those as rejectable steps.
DiscreteCurve step(const DiscreteCurve& curve, const ConvexDomain& domain, double dt,
                   double dt_safety = 0.5, double tol_orth = 1e-6);

FlowTrace run(const DiscreteCurve& initial, const ConvexDomain& domain,
              const FlowConfig& config, const ComparisonFunction* phi = nullptr);

// Least-squares fit of L(t)^2 over the final 20% of snapshots; T from the
// line's zero crossing, z from the projected endpoint midpoint.
struct ExtinctionEstimate {
    double T = kNaN;
    Vec2 z;
};
ExtinctionEstimate extinction_estimate(const FlowTrace& trace);

// Type-I rescaling (Gamma - z) / sqrt(2(T - t)) and its Hausdorff distance to
// the unit semicircle in the tangent half-plane at z.
struct RescaledCurve {
    std::vector<Vec2> vertices;
    double hausdorff_to_unit_semicircle = kNaN;
};
RescaledCurve rescale(const DiscreteCurve& curve, const ConvexDomain& domain, Vec2 z,
                      double T, double t);

// Hausdorff distance of a polyline to {|p| = 1, <p, n> <= 0}.
double hausdorff_to_unit_semicircle(const std::vector<Vec2>& pts, Vec2 n);

// Arclength equidistribution onto m edges by cubic resampling.
DiscreteCurve remesh(const DiscreteCurve& curve, const ConvexDomain& domain, int m,
                     double tol_orth = 1e-6);

SnapshotDiagnostics compute_diagnostics(const DiscreteCurve& curve, const ConvexDomain& domain,
                                        const ComparisonFunction* phi);

}  // namespace fbcsf

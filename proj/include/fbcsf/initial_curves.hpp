#pragma once

#include "fbcsf/curve.hpp"

namespace fbcsf {

// Newton solve for the boundary parameter s at which the end segment
// (inner - zeta(s)) is parallel to the inward normal -N^S(s); this is the
// discrete orthogonal-contact condition. Seeded at s_seed. Throws
// std::runtime_error on divergence or when the segment points outward.
double solve_orthogonal_endpoint(const ConvexDomain& domain, Vec2 inner, double s_seed);

// Moves the two end vertices onto the boundary parameters given by
// solve_orthogonal_endpoint, keeping the interior fixed.
void align_endpoints(const ConvexDomain& domain, std::vector<Vec2>& vertices,
                     double s_seed_left, double s_seed_right);

// Straight chord between the boundary points at parameters s0 and s1,
// n edges. Endpoints are aligned afterwards, so the result is exactly the
// chord only when the chord is critical (meets the boundary orthogonally).
DiscreteCurve make_chord(const ConvexDomain& domain, double s0, double s1, int n);

// Circular arc of the given radius meeting the boundary orthogonally, with
// its apex over the boundary point at s_center. Exact for half_plane and
// disk; other kinds use a tangent-line fixed point plus endpoint alignment.
DiscreteCurve make_boundary_arc(const ConvexDomain& domain, double s_center, double radius,
                                int n);

// Chord plus a normal offset amplitude * sin^2(frequency * pi * u); the
// squared sine keeps the end segments aligned with the chord so orthogonal
// contact survives the perturbation. With mean_zero the profile is
// sin^2 * cos (normalised to the same amplitude), which is odd about the
// midpoint: it carries no component of the chord-translation mode, the
// direction in which every critical chord of a strictly convex domain is
// unstable.
DiscreteCurve make_perturbed_chord(const ConvexDomain& domain, double s0, double s1,
                                   double amplitude, int frequency, int n,
                                   bool mean_zero = false);

// Two parallel legs of height `height` at distance `width`, joined by a
// semicircular cap, standing orthogonally on the half-plane boundary and
// centred at x = center. Used as a deep-profile test shape.
DiscreteCurve make_stadium(const ConvexDomain& half_plane, double center, double width,
                           double height, int n);

// Vertices straight from user input; lenient orthogonality by default.
DiscreteCurve make_explicit(const ConvexDomain& domain, std::vector<Vec2> vertices,
                            double tol_orth = 0.0);

}  // namespace fbcsf

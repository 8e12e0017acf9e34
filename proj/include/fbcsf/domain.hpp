#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbcsf/geom.hpp"

namespace fbcsf {

// Position, frames and curvature at one boundary point. The frames obey
// T^S = J N^S with N^S the outward unit normal and J the counterclockwise
// rotation by pi/2; kappa >= 0 on a convex boundary (dN^S/ds = kappa T^S).
struct BoundaryFrame {
    double s = 0.0;       // boundary arclength parameter
    Vec2 point;
    Vec2 tangent;         // T^S
    Vec2 outward_normal;  // N^S
    double curvature = 0.0;  // kappa^S, units 1/length
};

struct ProjectionResult {
    BoundaryFrame frame;
    double distance = 0.0;  // |x - frame.point|
};

// The six angles of the two-point configuration (x, y, z): theta_* decompose
// the rays from the boundary point z in the (N^S, T^S) frame, alpha_* the
// chord direction in the (-JX, X) resp. (-JY, Y) frames, beta_* the rays in
// those same frames. All stored in (-pi, pi].
struct AngleData {
    double alpha_x = 0.0;
    double alpha_y = 0.0;
    double beta_x = 0.0;
    double beta_y = 0.0;
    double theta_x = 0.0;
    double theta_y = 0.0;
};

enum class DomainKind { half_plane, disk, ellipse, sampled };

// Immutable convex planar domain with C^2 boundary. half_plane is {y >= 0}
// with boundary parameter s -> (s, 0); bounded kinds take s mod the boundary
// length, oriented counterclockwise.
class ConvexDomain {
public:
    static ConvexDomain half_plane();
    static ConvexDomain disk(double radius);
    static ConvexDomain ellipse(double a, double b);
    // Closed convex polygon of samples (either orientation); interpolated by
    // a periodic cubic spline, reparametrised by arclength.
    static ConvexDomain sampled(std::vector<Vec2> boundary_points);

    DomainKind kind() const { return kind_; }
    // Total boundary length; +inf for half_plane.
    double boundary_length() const { return boundary_length_; }
    bool bounded() const { return kind_ != DomainKind::half_plane; }

    // Closed-form for analytic kinds, spline evaluation for sampled ones.
    BoundaryFrame frame(double s) const;

    ProjectionResult project(Vec2 x) const;

    bool contains(Vec2 x) const;
    // Distance of x to the boundary (= project(x).distance), positive inside.
    double boundary_distance(Vec2 x) const { return project(x).distance; }

    // Diameter-like scale used for tolerances; 1 for half_plane.
    double scale() const { return scale_; }

    // Cached coarse boundary samples (positions only) shared by 1D solvers.
    const std::vector<Vec2>& coarse_points() const { return coarse_pts_; }
    const std::vector<double>& coarse_params() const { return coarse_s_; }

    // sup kappa^S over the parameter interval [s0, s1] (order-free).
    double max_boundary_curvature(double s0, double s1) const;

    // radius used by disk kind (test convenience)
    double disk_radius() const { return radius_; }
    double ellipse_a() const { return ell_a_; }
    double ellipse_b() const { return ell_b_; }

private:
    ConvexDomain() = default;

    BoundaryFrame frame_ellipse(double s) const;
    BoundaryFrame frame_sampled(double s) const;
    ProjectionResult project_bounded(Vec2 x) const;
    void build_coarse_table();

    DomainKind kind_ = DomainKind::half_plane;
    double boundary_length_ = kInf;
    double scale_ = 1.0;
    double radius_ = 0.0;
    double ell_a_ = 0.0, ell_b_ = 0.0;

    // ellipse: cumulative arclength over a uniform phi grid
    std::vector<double> arc_table_;   // arc_table_[i] = s at phi_i
    double phi_step_ = 0.0;

    // sampled: periodic cubic spline in a chord parameter u, plus an
    // arclength table for s <-> u inversion
    std::vector<Vec2> sp_pts_;
    std::vector<Vec2> sp_m_;          // spline second derivatives
    std::vector<double> sp_u_;        // knots (chord-length parameter)
    double sp_total_u_ = 0.0;
    std::vector<double> sp_arc_;      // cumulative arclength on a fine u grid
    std::vector<double> sp_arc_u_;    // the fine u grid
    Vec2 spline_eval(double u, Vec2* d1 = nullptr, Vec2* d2 = nullptr) const;

    std::vector<Vec2> coarse_pts_;
    std::vector<double> coarse_s_;
};

// Angle of a unit direction in the frame (cos_axis, sin_axis), in (-pi, pi].
inline double decompose_angle(Vec2 unit_dir, Vec2 cos_axis, Vec2 sin_axis) {
    return std::atan2(dot(unit_dir, sin_axis), dot(unit_dir, cos_axis));
}

// Computes all six angles for the configuration (x, y, z, X, Y).
// Throws std::invalid_argument on coincident points, naming the angle that
// becomes undefined.
AngleData angles_at(const ConvexDomain& domain, Vec2 x, Vec2 y,
                    const BoundaryFrame& z, Vec2 X, Vec2 Y);

// Residual of plugging the angles back into their defining decompositions;
// returns the max over the six reconstruction identities.
double angle_reconstruction_residual(const AngleData& a, Vec2 x, Vec2 y,
                                     const BoundaryFrame& z, Vec2 X, Vec2 Y);

}  // namespace fbcsf

#pragma once

#include <optional>

#include "fbcsf/billiard.hpp"
#include "fbcsf/domain.hpp"

namespace fbcsf {

struct CurveBuildOptions {
    bool check_embedded = true;
    bool check_interior = true;
    // Endpoints must lie within this fraction of the length from the
    // boundary; closer ones are snapped onto it.
    double endpoint_tol_rel = 1e-8;
    // Orthogonal-contact residual |<T, T^S>| allowed at each endpoint;
    // non-positive disables the check.
    double tol_orth = 1e-6;
    bool flip_normal = false;
};

// Ordered polyline v_0..v_N with v_0, v_N on the domain boundary and the
// interior strictly inside. Curvature is the turning angle over the dual
// edge length, signed so that kappa > 0 where the tangent turns
// counterclockwise (normal N = -J T); endpoint values are extrapolated.
class DiscreteCurve {
public:
    DiscreteCurve(const ConvexDomain& domain, std::vector<Vec2> vertices,
                  const CurveBuildOptions& opts = {});

    const std::vector<Vec2>& vertices() const { return v_; }
    int vertex_count() const { return static_cast<int>(v_.size()); }
    int last_index() const { return static_cast<int>(v_.size()) - 1; }
    const ConvexDomain& domain() const { return *domain_; }

    double length() const { return length_; }
    double s_left() const { return s_left_; }
    double s_right() const { return s_right_; }
    double min_edge() const { return h_min_; }
    double max_edge() const { return h_max_; }
    bool normal_flipped() const { return flipped_; }

    const std::vector<double>& edge_lengths() const { return edge_len_; }
    const std::vector<double>& cumulative_arclength() const { return cum_; }
    const std::vector<double>& curvature() const { return kappa_; }

    double arclength(int i, int j) const;
    double chordlength(int i, int j) const;
    double reflected_arclength(int i, int j) const;
    // Single-endpoint route used by the 2L-sum identity: end = 0 routes
    // through v_0, end = 1 through v_N.
    double reflected_arclength_via(int i, int j, int end) const;

    // Unit tangent at a vertex (central difference inside, one-sided at the
    // ends) and the matching normal.
    Vec2 tangent(int i) const;
    Vec2 normal(int i) const { Vec2 t = tangent(i); return flipped_ ? rot90(t) : -rot90(t); }

    double orth_residual_left() const { return orth_left_; }
    double orth_residual_right() const { return orth_right_; }

    // d(kappa)/ds at an endpoint from the quadratic fit over the first
    // interior curvature values (end = 0 left, 1 right).
    double endpoint_curvature_derivative(int end) const;

    // Distance from a vertex to the nearer endpoint along the curve.
    double lambda(int i) const { return std::min(cum_[i], length_ - cum_[i]); }

    double integral_kappa_sq() const;
    double max_abs_kappa() const;

struct TotalCurvature {
        double K = 0.0;           // integral of |kappa|
        int vertex_count = 0;     // sign changes of discrete kappa_s
        int inflection_count = 0; // sign changes of kappa
    };
    TotalCurvature total_curvature() const;

private:
    void build_tables();
    void compute_curvature();

    const ConvexDomain* domain_;
    std::vector<Vec2> v_;
    std::vector<double> edge_len_;
    std::vector<double> cum_;
    std::vector<double> kappa_;
    double length_ = 0.0;
    double h_min_ = 0.0, h_max_ = 0.0;
    double s_left_ = 0.0, s_right_ = 0.0;
    double orth_left_ = 0.0, orth_right_ = 0.0;
    bool flipped_ = false;
};

// An element of the formal double M: curve index plus copy sign. The two
// endpoint identifications give elements with index 0 or N canonical sign +1.
struct DoubledIndex {
    int i = 0;
    int sign = +1;
};

inline bool operator==(DoubledIndex a, DoubledIndex b) {
    return a.i == b.i && a.sign == b.sign;
}

// View of the completed double of a curve: 2N distinct elements carrying the
// completed arclength l (geodesic distance on the double, in [0, L]) and the
// completed chordlength d (Euclidean or single-bounce reflected distance).
class DoubledCurve {
public:
    DoubledCurve(const DiscreteCurve& curve, const ConvexDomain& domain)
        : curve_(&curve), domain_(&domain) {}

    const DiscreteCurve& base() const { return *curve_; }
    const ConvexDomain& domain() const { return *domain_; }

    double doubled_length() const { return 2.0 * curve_->length(); }
    int element_count() const { return 2 * curve_->last_index(); }
    DoubledIndex element(int k) const;
    DoubledIndex canonical(DoubledIndex a) const;
    Vec2 point(DoubledIndex a) const { return curve_->vertices()[a.i]; }
    bool is_endpoint(DoubledIndex a) const {
        return a.i == 0 || a.i == curve_->last_index();
    }

    double arclen(DoubledIndex a, DoubledIndex b) const;
    double chord(DoubledIndex a, DoubledIndex b) const;
    // Chord plus the Snell data when the reflected solver ran; nullopt
    // otherwise (same-sign or endpoint pairs).
    std::optional<ReflectedDistanceResult> snell(DoubledIndex a, DoubledIndex b) const;

private:
    const DiscreteCurve* curve_;
    const ConvexDomain* domain_;
};

}  // namespace fbcsf

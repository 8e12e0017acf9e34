#include "fbcsf/initial_curves.hpp"

#include <algorithm>
#include <cmath>

namespace fbcsf {

double solve_orthogonal_endpoint(const ConvexDomain& domain, Vec2 inner, double s_seed) {
    // f(s) = cross(inner - zeta(s), N^S(s));  f' = 1 + kappa^S cross(inner - zeta, T^S)
    // (using cross(T^S, N^S) = -1 and dN^S/ds = kappa^S T^S).
    double s = s_seed;
    double scale = std::max(1.0, norm(inner));
    for (int it = 0; it < 60; ++it) {
        BoundaryFrame fr = domain.frame(s);
        Vec2 w = inner - fr.point;
        double f = cross(w, fr.outward_normal);
        double fp = 1.0 + fr.curvature * cross(w, fr.tangent);
        if (fp == 0.0) break;
        double ds = f / fp;
        // Trust region: never jump more than the distance to the inner vertex.
        double cap = std::max(norm(w), 1e-12 * scale);
        ds = std::clamp(ds, -cap, cap);
        s -= ds;
        if (std::abs(f) < 1e-14 * scale && std::abs(ds) < 1e-13 * scale) break;
    }
    BoundaryFrame fr = domain.frame(s);
    Vec2 w = inner - fr.point;
    if (std::abs(cross(w, fr.outward_normal)) > 1e-9 * scale) {
        throw std::runtime_error("endpoint solve: Newton did not converge");
    }
    if (dot(w, fr.outward_normal) >= 0.0) {
        throw std::runtime_error("endpoint solve: segment points out of the domain");
    }
    return s;
}

void align_endpoints(const ConvexDomain& domain, std::vector<Vec2>& vertices,
                     double s_seed_left, double s_seed_right) {
    double sl = solve_orthogonal_endpoint(domain, vertices[1], s_seed_left);
    double sr = solve_orthogonal_endpoint(domain, vertices[vertices.size() - 2], s_seed_right);
    vertices.front() = domain.frame(sl).point;
    vertices.back() = domain.frame(sr).point;
}

DiscreteCurve make_chord(const ConvexDomain& domain, double s0, double s1, int n) {
    if (n < 4) throw std::invalid_argument("make_chord: need at least 4 edges");
    Vec2 a = domain.frame(s0).point;
    Vec2 b = domain.frame(s1).point;
    std::vector<Vec2> v(n + 1);
    for (int k = 0; k <= n; ++k) {
        double u = static_cast<double>(k) / n;
        v[k] = a + u * (b - a);
    }
    align_endpoints(domain, v, s0, s1);
    return DiscreteCurve(domain, std::move(v));
}

DiscreteCurve make_boundary_arc(const ConvexDomain& domain, double s_center, double radius,
                                int n) {
    if (n < 4) throw std::invalid_argument("make_boundary_arc: need at least 4 edges");
    if (!(radius > 0.0)) throw std::invalid_argument("make_boundary_arc: radius must be positive");
    std::vector<Vec2> v(n + 1);

    switch (domain.kind()) {
        case DomainKind::half_plane: {
            // Semicircle centred on the flat boundary.
            Vec2 c{s_center, 0.0};
            for (int k = 0; k <= n; ++k) {
                double phi = kPi * k / n;
                v[k] = c + radius * Vec2{std::cos(phi), std::sin(phi)};
            }
            break;
        }
        case DomainKind::disk: {
            // Circle orthogonal to the disk: centre at distance sqrt(R^2 + rho^2).
            double R = domain.disk_radius();
            Vec2 zhat = normalized(domain.frame(s_center).point);
            Vec2 zperp = rot90(zhat);
            Vec2 c = std::sqrt(R * R + radius * radius) * zhat;
            double chi = std::atan2(R, radius);  // half angular span about c
            for (int k = 0; k <= n; ++k) {
                double psi = (kPi - chi) + 2.0 * chi * k / n;
                v[k] = c + radius * (std::cos(psi) * zhat + std::sin(psi) * zperp);
            }
            break;
        }
        default: {
            // Fixed point on the tangent-line intersection: the centre of an
            // orthogonal circle lies on the boundary tangents at both feet.
            double ds = radius;
            Vec2 c{};
            BoundaryFrame q0, q1;
            for (int it = 0; it < 30; ++it) {
                q0 = domain.frame(s_center - ds);
                q1 = domain.frame(s_center + ds);
                // Intersect the two tangent lines.
                double denom = cross(q0.tangent, q1.tangent);
                if (std::abs(denom) < 1e-14) { c = 0.5 * (q0.point + q1.point); break; }
                double t = cross(q1.point - q0.point, q1.tangent) / denom;
                c = q0.point + t * q0.tangent;
                double rbar = 0.5 * (dist(c, q0.point) + dist(c, q1.point));
                double corr = radius / std::max(rbar, 1e-12);
                if (std::abs(corr - 1.0) < 1e-12) break;
                ds *= std::sqrt(corr);
            }
            Vec2 u0 = normalized(q0.point - c);
            Vec2 u1 = normalized(q1.point - c);
            double span = wrap_angle(std::atan2(cross(u0, u1), dot(u0, u1)));
            double a0 = std::atan2(u0.y, u0.x);
            double r0 = dist(c, q0.point), r1 = dist(c, q1.point);
            for (int k = 0; k <= n; ++k) {
                double u = static_cast<double>(k) / n;
                double ang = a0 + span * u;
                double rr = r0 + (r1 - r0) * u;
                v[k] = c + rr * Vec2{std::cos(ang), std::sin(ang)};
            }
            break;
        }
    }

    ProjectionResult pl = domain.project(v.front());
    ProjectionResult pr = domain.project(v.back());
    align_endpoints(domain, v, pl.frame.s, pr.frame.s);
    return DiscreteCurve(domain, std::move(v));
}

DiscreteCurve make_perturbed_chord(const ConvexDomain& domain, double s0, double s1,
                                   double amplitude, int frequency, int n,
                                   bool mean_zero) {
    if (n < 4) throw std::invalid_argument("make_perturbed_chord: need at least 4 edges");
    if (frequency < 1) throw std::invalid_argument("make_perturbed_chord: frequency >= 1");
    Vec2 a = domain.frame(s0).point;
    Vec2 b = domain.frame(s1).point;
    Vec2 nrm = normalized(rot90(b - a));
    const double odd_peak = 2.0 / (3.0 * std::sqrt(3.0));  // max of sin^2 * cos
    std::vector<Vec2> v(n + 1);
    for (int k = 0; k <= n; ++k) {
        double u = static_cast<double>(k) / n;
        double sq = std::sin(frequency * kPi * u);
        double w = sq * sq;
        if (mean_zero) w *= std::cos(frequency * kPi * u) / odd_peak;
        v[k] = a + u * (b - a) + amplitude * w * nrm;
    }
    align_endpoints(domain, v, s0, s1);
    return DiscreteCurve(domain, std::move(v));
}

DiscreteCurve make_stadium(const ConvexDomain& half_plane, double center, double width,
                           double height, int n) {
    if (half_plane.kind() != DomainKind::half_plane) {
        throw std::invalid_argument("make_stadium: needs the half-plane domain");
    }
    double cap_r = 0.5 * width;
    double L = 2.0 * height + kPi * cap_r;
    std::vector<Vec2> v;
    v.reserve(n + 1);
    double xl = center - cap_r, xr = center + cap_r;
    for (int k = 0; k <= n; ++k) {
        double s = L * k / n;
        if (s <= height) {
            v.push_back({xl, s});
        } else if (s <= height + kPi * cap_r) {
            double phi = (s - height) / cap_r;  // 0..pi over the cap
            v.push_back({center - cap_r * std::cos(phi), height + cap_r * std::sin(phi)});
        } else {
            v.push_back({xr, L - s});
        }
    }
    align_endpoints(half_plane, v, xl, xr);
    return DiscreteCurve(half_plane, std::move(v));
}

DiscreteCurve make_explicit(const ConvexDomain& domain, std::vector<Vec2> vertices,
                            double tol_orth) {
    CurveBuildOptions opts;
    opts.tol_orth = tol_orth;
    return DiscreteCurve(domain, std::move(vertices), opts);
}

}  // namespace fbcsf

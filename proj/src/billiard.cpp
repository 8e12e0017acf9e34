#include "fbcsf/billiard.hpp"

#include <algorithm>
#include <cmath>

namespace fbcsf {

namespace {

struct Candidate {
    double s = 0.0;
    double f = kInf;
};

// Objective f(s) = |zeta(s) - x| + |zeta(s) - y| and its s-derivatives.
struct Objective {
    const ConvexDomain& dom;
    Vec2 x, y;

    double f(double s) const {
        Vec2 p = dom.frame(s).point;
        return dist(p, x) + dist(p, y);
    }
    // g = f', gp = f''
    void derivs(double s, double& g, double& gp) const {
        BoundaryFrame fr = dom.frame(s);
        Vec2 ux = fr.point - x, uy = fr.point - y;
        double dx = norm(ux), dy = norm(uy);
        ux = ux / dx;
        uy = uy / dy;
        double tx = dot(fr.tangent, ux), ty = dot(fr.tangent, uy);
        g = tx + ty;
        gp = (1.0 - tx * tx) / dx + (1.0 - ty * ty) / dy -
             fr.curvature * dot(fr.outward_normal, ux + uy);
    }
};

Candidate refine_bracket(const Objective& obj, double a, double b, double tol_s) {
    double ga, gpa, gb, gpb;
    obj.derivs(a, ga, gpa);
    obj.derivs(b, gb, gpb);
    if (!(ga <= 0.0 && gb >= 0.0)) {
        // No sign change: golden-section on f.
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = obj.f(c1), f2 = obj.f(c2);
        while (b - a > tol_s) {
            if (f1 < f2) {
                b = c2; c2 = c1; f2 = f1;
                c1 = b - gr * (b - a); f1 = obj.f(c1);
            } else {
                a = c1; c1 = c2; f1 = f2;
                c2 = a + gr * (b - a); f2 = obj.f(c2);
            }
        }
        double s = 0.5 * (a + b);
        return {s, obj.f(s)};
    }
    // Newton on f' with bisection safeguard on the sign-change bracket.
    double s = 0.5 * (a + b);
    for (int it = 0; it < 80; ++it) {
        double g, gp;
        obj.derivs(s, g, gp);
        if (std::abs(g) < 1e-12) break;
        if (g < 0.0) a = s; else b = s;
        double step = (gp > 0.0) ? g / gp : 0.0;
        double sn = s - step;
        if (step == 0.0 || sn <= a || sn >= b) sn = 0.5 * (a + b);
        if (std::abs(sn - s) < 1e-17 * std::max(1.0, std::abs(s))) { s = sn; break; }
        s = sn;
    }
    return {s, obj.f(s)};
}

}  // namespace

ReflectedDistanceResult reflected_distance(const ConvexDomain& domain, Vec2 x, Vec2 y) {
    const double scale = std::max(domain.scale(), std::max(norm(x), norm(y)));
    auto require_interior = [&](Vec2 p, const char* name) {
        if (!domain.contains(p) || domain.boundary_distance(p) <= 1e-12 * scale) {
            throw std::invalid_argument(std::string("reflected_distance: ") + name +
                                        " must lie strictly inside the domain");
        }
    };
    require_interior(x, "x");
    require_interior(y, "y");

    ReflectedDistanceResult res;

    if (domain.kind() == DomainKind::half_plane) {
        // Mirror image across the flat boundary gives the exact answer.
        Vec2 ym{y.x, -y.y};
        res.distance = dist(x, ym);
        double t = x.y / (x.y + y.y);
        Vec2 z = x + t * (ym - x);
        res.bounce = domain.frame(z.x);
        res.d_x = dist(x, res.bounce.point);
        res.d_y = dist(y, res.bounce.point);
        Vec2 ux = normalized(x - res.bounce.point);
        res.theta = std::atan2(dot(ux, res.bounce.tangent), dot(ux, res.bounce.outward_normal));
        return res;
    }

    // Canonical argument order keeps the evaluation sequence identical for
    // (x, y) and (y, x), so the returned distance is bitwise symmetric.
    bool swapped = (y.x < x.x) || (y.x == x.x && y.y < x.y);
    Vec2 cx = swapped ? y : x;
    Vec2 cy = swapped ? x : y;

    Objective obj{domain, cx, cy};
    const double L = domain.boundary_length();
    const auto& pts = domain.coarse_points();
    const int n = static_cast<int>(pts.size());

    std::vector<double> fs(n);
    for (int i = 0; i < n; ++i) fs[i] = dist(pts[i], cx) + dist(pts[i], cy);

    std::vector<Candidate> cands;
    for (int i = 0; i < n; ++i) {
        double fp = fs[(i + n - 1) % n], fn = fs[(i + 1) % n];
        if (fs[i] <= fp && fs[i] <= fn) {
            double a = domain.coarse_params()[i] - L / n;
            double b = domain.coarse_params()[i] + L / n;
            cands.push_back(refine_bracket(obj, a, b, 1e-13 * L));
        }
    }
    if (cands.empty()) cands.push_back(refine_bracket(obj, 0.0, L, 1e-13 * L));

    const Candidate* best = &cands[0];
    for (const Candidate& c : cands) {
        if (c.f < best->f) best = &c;
    }
    for (const Candidate& c : cands) {
        if (&c == best) continue;
        double ds = std::abs(std::remainder(c.s - best->s, L));
        if (c.f <= best->f * (1.0 + 1e-9) && ds > 1e-6 * L) res.multiple_minimizers = true;
    }

    res.bounce = domain.frame(best->s);
    res.d_x = dist(x, res.bounce.point);
    res.d_y = dist(y, res.bounce.point);
    res.distance = dist(cx, res.bounce.point) + dist(cy, res.bounce.point);
    Vec2 ux = normalized(x - res.bounce.point);
    res.theta = std::atan2(dot(ux, res.bounce.tangent), dot(ux, res.bounce.outward_normal));
    return res;
}

DistanceVariations distance_variations(Vec2 x, Vec2 y, Vec2 X, Vec2 Y) {
    double d = dist(x, y);
    double scale = std::max({norm(x), norm(y), 1e-30});
    if (d <= 1e-15 * scale) {
        throw std::invalid_argument("distance_variations: x == y (diagonal)");
    }
    Vec2 w = (x - y) / d;
    double wx = dot(w, X);  // sin(alpha_x)
    double wy = dot(-w, Y); // -sin(alpha_y)
    DistanceVariations v;
    v.first_x = wx;
    v.first_y = wy;
    v.second_xx = (1.0 - wx * wx) / d;
    v.second_yy = (1.0 - wy * wy) / d;
    v.second_xy = -dot(X, Y) / d - wx * wy / d;
    return v;
}

}  // namespace fbcsf

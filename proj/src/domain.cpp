#include "fbcsf/domain.hpp"

#include <algorithm>
#include <cmath>

namespace fbcsf {

namespace {

constexpr int kCoarseSamples = 256;
constexpr int kEllipseGrid = 8192;

void check_finite(Vec2 v, const char* what) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw std::invalid_argument(std::string(what) + ": non-finite input");
    }
}

// Cyclic tridiagonal solve (Thomas + Sherman-Morrison). diag/sub/sup are the
// three bands, with sub[0] and sup[n-1] the cyclic corner entries.
std::vector<double> solve_cyclic_tridiag(std::vector<double> diag, std::vector<double> sub,
                                         std::vector<double> sup, std::vector<double> rhs) {
    const size_t n = diag.size();
    auto solve_tridiag = [](std::vector<double> a, std::vector<double> b, std::vector<double> c,
                            std::vector<double> d) {
        const size_t m = b.size();
        for (size_t i = 1; i < m; ++i) {
            double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        std::vector<double> x(m);
        x[m - 1] = d[m - 1] / b[m - 1];
        for (size_t i = m - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
        return x;
    };

    double alpha = sub[0];     // corner A(0, n-1)
    double beta = sup[n - 1];  // corner A(n-1, 0)
    double gamma = -diag[0];
    std::vector<double> b = diag;
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;

    std::vector<double> x = solve_tridiag(sub, b, sup, rhs);
    std::vector<double> z = solve_tridiag(sub, b, sup, u);
    double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
}

double ellipse_speed(double a, double b, double phi) {
    double sx = a * std::sin(phi), cy = b * std::cos(phi);
    return std::sqrt(sx * sx + cy * cy);
}

}  // namespace

ConvexDomain ConvexDomain::half_plane() {
    ConvexDomain d;
    d.kind_ = DomainKind::half_plane;
    d.boundary_length_ = kInf;
    d.scale_ = 1.0;
    return d;
}

ConvexDomain ConvexDomain::disk(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("disk: radius must be positive and finite");
    }
    ConvexDomain d;
    d.kind_ = DomainKind::disk;
    d.radius_ = radius;
    d.boundary_length_ = 2.0 * kPi * radius;
    d.scale_ = radius;
    d.build_coarse_table();
    return d;
}

ConvexDomain ConvexDomain::ellipse(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("ellipse: semi-axes must be positive and finite");
    }
    ConvexDomain d;
    d.kind_ = DomainKind::ellipse;
    d.ell_a_ = a;
    d.ell_b_ = b;
    d.scale_ = std::max(a, b);
    d.phi_step_ = 2.0 * kPi / kEllipseGrid;
    d.arc_table_.resize(kEllipseGrid + 1);
    d.arc_table_[0] = 0.0;
    for (int i = 0; i < kEllipseGrid; ++i) {
        double p0 = i * d.phi_step_;
        double pm = p0 + 0.5 * d.phi_step_;
        double p1 = p0 + d.phi_step_;
        double seg = d.phi_step_ / 6.0 *
                     (ellipse_speed(a, b, p0) + 4.0 * ellipse_speed(a, b, pm) +
                      ellipse_speed(a, b, p1));
        d.arc_table_[i + 1] = d.arc_table_[i] + seg;
    }
    d.boundary_length_ = d.arc_table_.back();
    d.build_coarse_table();
    return d;
}

ConvexDomain ConvexDomain::sampled(std::vector<Vec2> pts) {
    if (pts.size() >= 2 && dist(pts.front(), pts.back()) == 0.0) pts.pop_back();
    const size_t n = pts.size();
    if (n < 4) throw std::invalid_argument("sampled: need at least 4 distinct boundary points");
    for (const Vec2& p : pts) check_finite(p, "sampled");

    // Orient counterclockwise.
    double area2 = 0.0;
    for (size_t i = 0; i < n; ++i) area2 += cross(pts[i], pts[(i + 1) % n]);
    if (area2 < 0.0) std::reverse(pts.begin(), pts.end());
    if (std::abs(area2) == 0.0) throw std::invalid_argument("sampled: degenerate polygon");

    // Convexity: consecutive edge cross-products share one sign.
    double scale = 0.0;
    for (const Vec2& p : pts) scale = std::max(scale, norm(p));
    for (size_t i = 0; i < n; ++i) {
        Vec2 e0 = pts[(i + 1) % n] - pts[i];
        Vec2 e1 = pts[(i + 2) % n] - pts[(i + 1) % n];
        if (cross(e0, e1) < -1e-12 * scale * scale) {
            throw std::invalid_argument("sampled: boundary points are not convex");
        }
    }

    ConvexDomain d;
    d.kind_ = DomainKind::sampled;
    d.scale_ = scale;
    d.sp_pts_ = pts;

    // Chord-length knots.
    d.sp_u_.resize(n + 1);
    d.sp_u_[0] = 0.0;
    for (size_t i = 0; i < n; ++i) {
        d.sp_u_[i + 1] = d.sp_u_[i] + dist(pts[i], pts[(i + 1) % n]);
    }
    d.sp_total_u_ = d.sp_u_[n];

    // Periodic cubic spline second derivatives, per component.
    std::vector<double> diag(n), sub(n), sup(n), rx(n), ry(n);
    auto h = [&](size_t i) { return d.sp_u_[i + 1] - d.sp_u_[i]; };
    for (size_t i = 0; i < n; ++i) {
        size_t im = (i + n - 1) % n;
        double hm = h(im), hi = h(i);
        sub[i] = hm / 6.0;
        diag[i] = (hm + hi) / 3.0;
        sup[i] = hi / 6.0;
        Vec2 pm = pts[im], pi = pts[i], pp = pts[(i + 1) % n];
        rx[i] = (pp.x - pi.x) / hi - (pi.x - pm.x) / hm;
        ry[i] = (pp.y - pi.y) / hi - (pi.y - pm.y) / hm;
    }
    std::vector<double> mx = solve_cyclic_tridiag(diag, sub, sup, rx);
    std::vector<double> my = solve_cyclic_tridiag(diag, sub, sup, ry);
    d.sp_m_.resize(n + 1);
    for (size_t i = 0; i < n; ++i) d.sp_m_[i] = {mx[i], my[i]};
    d.sp_m_[n] = d.sp_m_[0];

    // Arclength lookup table on a fine u grid.
    const int fine = std::max<int>(2048, 16 * static_cast<int>(n));
    d.sp_arc_u_.resize(fine + 1);
    d.sp_arc_.resize(fine + 1);
    d.sp_arc_[0] = 0.0;
    for (int i = 0; i <= fine; ++i) d.sp_arc_u_[i] = d.sp_total_u_ * i / fine;
    auto speed = [&](double u) {
        Vec2 d1;
        d.spline_eval(u, &d1, nullptr);
        return norm(d1);
    };
    for (int i = 0; i < fine; ++i) {
        double u0 = d.sp_arc_u_[i], u1 = d.sp_arc_u_[i + 1];
        double seg = (u1 - u0) / 6.0 * (speed(u0) + 4.0 * speed(0.5 * (u0 + u1)) + speed(u1));
        d.sp_arc_[i + 1] = d.sp_arc_[i] + seg;
    }
    d.boundary_length_ = d.sp_arc_.back();
    d.build_coarse_table();
    return d;
}

void ConvexDomain::build_coarse_table() {
    coarse_pts_.resize(kCoarseSamples);
    coarse_s_.resize(kCoarseSamples);
    for (int i = 0; i < kCoarseSamples; ++i) {
        coarse_s_[i] = boundary_length_ * i / kCoarseSamples;
        coarse_pts_[i] = frame(coarse_s_[i]).point;
    }
}

Vec2 ConvexDomain::spline_eval(double u, Vec2* d1, Vec2* d2) const {
    const size_t n = sp_pts_.size();
    u = std::fmod(u, sp_total_u_);
    if (u < 0.0) u += sp_total_u_;
    size_t i = std::upper_bound(sp_u_.begin(), sp_u_.end(), u) - sp_u_.begin();
    i = std::min<size_t>(std::max<size_t>(i, 1), n) - 1;
    double hi = sp_u_[i + 1] - sp_u_[i];
    double t = u - sp_u_[i];
    Vec2 pi = sp_pts_[i], pp = sp_pts_[(i + 1) % n];
    Vec2 Mi = sp_m_[i], Mp = sp_m_[i + 1];
    double ht = hi - t;
    Vec2 val = (ht * ht * ht / (6.0 * hi)) * Mi + (t * t * t / (6.0 * hi)) * Mp +
               (ht / hi) * pi + (t / hi) * pp - (hi / 6.0) * (ht * Mi + t * Mp);
    if (d1) {
        *d1 = (-ht * ht / (2.0 * hi)) * Mi + (t * t / (2.0 * hi)) * Mp +
              (1.0 / hi) * (pp - pi) - (hi / 6.0) * (Mp - Mi);
    }
    if (d2) *d2 = (ht / hi) * Mi + (t / hi) * Mp;
    return val;
}

BoundaryFrame ConvexDomain::frame(double s) const {
    if (!std::isfinite(s)) throw std::invalid_argument("boundary_frame: non-finite parameter");
    BoundaryFrame f;
    switch (kind_) {
        case DomainKind::half_plane: {
            f.s = s;
            f.point = {s, 0.0};
            f.outward_normal = {0.0, -1.0};
            f.tangent = rot90(f.outward_normal);  // (1, 0)
            f.curvature = 0.0;
            return f;
        }
        case DomainKind::disk: {
            double L = boundary_length_;
            double sm = std::fmod(s, L);
            if (sm < 0.0) sm += L;
            double phi = sm / radius_;
            Vec2 nrm{std::cos(phi), std::sin(phi)};
            f.s = sm;
            f.point = radius_ * nrm;
            f.outward_normal = nrm;
            f.tangent = rot90(nrm);
            f.curvature = 1.0 / radius_;
            return f;
        }
        case DomainKind::ellipse:
            return frame_ellipse(s);
        case DomainKind::sampled:
            return frame_sampled(s);
    }
    throw std::logic_error("unreachable");
}

BoundaryFrame ConvexDomain::frame_ellipse(double s) const {
    double L = boundary_length_;
    double sm = std::fmod(s, L);
    if (sm < 0.0) sm += L;
    size_t k = std::upper_bound(arc_table_.begin(), arc_table_.end(), sm) - arc_table_.begin();
    k = std::min<size_t>(std::max<size_t>(k, 1), arc_table_.size() - 1) - 1;
    double phi = k * phi_step_;
    double rem = sm - arc_table_[k];
    // Newton on the local arclength from phi_k, derivative = speed.
    for (int it = 0; it < 8; ++it) {
        double pm = k * phi_step_;
        double seg = (phi - pm) / 6.0 *
                     (ellipse_speed(ell_a_, ell_b_, pm) +
                      4.0 * ellipse_speed(ell_a_, ell_b_, 0.5 * (pm + phi)) +
                      ellipse_speed(ell_a_, ell_b_, phi));
        double err = seg - rem;
        double sp = ellipse_speed(ell_a_, ell_b_, phi);
        phi -= err / sp;
        if (std::abs(err) < 1e-14 * std::max(1.0, L)) break;
    }
    Vec2 d1{-ell_a_ * std::sin(phi), ell_b_ * std::cos(phi)};
    Vec2 d2{-ell_a_ * std::cos(phi), -ell_b_ * std::sin(phi)};
    double sp = norm(d1);
    BoundaryFrame f;
    f.s = sm;
    f.point = {ell_a_ * std::cos(phi), ell_b_ * std::sin(phi)};
    f.tangent = d1 / sp;
    f.outward_normal = -rot90(f.tangent);
    f.curvature = cross(d1, d2) / (sp * sp * sp);
    return f;
}

BoundaryFrame ConvexDomain::frame_sampled(double s) const {
    double L = boundary_length_;
    double sm = std::fmod(s, L);
    if (sm < 0.0) sm += L;
    size_t k = std::upper_bound(sp_arc_.begin(), sp_arc_.end(), sm) - sp_arc_.begin();
    k = std::min<size_t>(std::max<size_t>(k, 1), sp_arc_.size() - 1) - 1;
    double du = sp_arc_u_[1] - sp_arc_u_[0];
    double u = sp_arc_u_[k] + du * (sm - sp_arc_[k]) /
                                  std::max(sp_arc_[k + 1] - sp_arc_[k], 1e-300);
    Vec2 d1;
    for (int it = 0; it < 6; ++it) {
        // Local arclength from the table knot, Simpson on [u_k, u].
        Vec2 g1;
        double u0 = sp_arc_u_[k];
        spline_eval(u0, &g1, nullptr);
        double s0 = norm(g1);
        spline_eval(0.5 * (u0 + u), &g1, nullptr);
        double s1 = norm(g1);
        spline_eval(u, &g1, nullptr);
        double s2 = norm(g1);
        double seg = (u - u0) / 6.0 * (s0 + 4.0 * s1 + s2);
        double err = seg - (sm - sp_arc_[k]);
        u -= err / std::max(s2, 1e-300);
        if (std::abs(err) < 1e-13 * std::max(1.0, L)) break;
    }
    Vec2 d2;
    Vec2 p = spline_eval(u, &d1, &d2);
    double sp = norm(d1);
    BoundaryFrame f;
    f.s = sm;
    f.point = p;
    f.tangent = d1 / sp;
    f.outward_normal = -rot90(f.tangent);
    f.curvature = cross(d1, d2) / (sp * sp * sp);
    return f;
}

ProjectionResult ConvexDomain::project(Vec2 x) const {
    check_finite(x, "project_to_boundary");
    switch (kind_) {
        case DomainKind::half_plane: {
            ProjectionResult r;
            r.frame = frame(x.x);
            r.distance = std::abs(x.y);
            return r;
        }
        case DomainKind::disk: {
            double rx = norm(x);
            ProjectionResult r;
            if (rx == 0.0) {
                r.frame = frame(0.0);
                r.distance = radius_;
                return r;
            }
            double phi = std::atan2(x.y, x.x);
            if (phi < 0.0) phi += 2.0 * kPi;
            r.frame = frame(phi * radius_);
            r.distance = std::abs(radius_ - rx);
            return r;
        }
        default:
            return project_bounded(x);
    }
}

ProjectionResult ConvexDomain::project_bounded(Vec2 x) const {
    const double L = boundary_length_;
    // Multi-start from 64 coarse samples: local minima of the sampled
    // objective, each refined by golden section then Newton.
    const int step = kCoarseSamples / 64;
    auto fval = [&](double s) { return norm_sq(frame(s).point - x); };
    double best_s = 0.0, best_f = kInf;
    for (int i = 0; i < 64; ++i) {
        double fi = norm_sq(coarse_pts_[i * step] - x);
        double fprev = norm_sq(coarse_pts_[((i + 63) % 64) * step] - x);
        double fnext = norm_sq(coarse_pts_[((i + 1) % 64) * step] - x);
        if (fi > fprev || fi > fnext) continue;
        double lo = coarse_s_[((i + 63) % 64) * step];
        double hi = lo + 2.0 * L / 64.0;
        // Golden-section bracketing.
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = fval(c1), f2 = fval(c2);
        for (int it = 0; it < 40 && (b - a) > 1e-10 * L; ++it) {
            if (f1 < f2) {
                b = c2; c2 = c1; f2 = f1;
                c1 = b - gr * (b - a); f1 = fval(c1);
            } else {
                a = c1; c1 = c2; f1 = f2;
                c2 = a + gr * (b - a); f2 = fval(c2);
            }
        }
        double s = 0.5 * (a + b);
        // Newton polish on g(s) = <zeta - x, T^S>, g' = 1 - kappa <zeta-x, N^S>.
        for (int it = 0; it < 12; ++it) {
            BoundaryFrame fr = frame(s);
            double g = dot(fr.point - x, fr.tangent);
            double gp = 1.0 - fr.curvature * dot(fr.point - x, fr.outward_normal);
            if (gp <= 0.0) break;
            double ds = g / gp;
            s -= ds;
            if (std::abs(ds) < 1e-15 * L) break;
        }
        double fs = fval(s);
        if (fs < best_f) {
            best_f = fs;
            best_s = s;
        }
    }
    ProjectionResult r;
    r.frame = frame(best_s);
    r.distance = norm(r.frame.point - x);
    return r;
}

bool ConvexDomain::contains(Vec2 x) const {
    switch (kind_) {
        case DomainKind::half_plane:
            return x.y >= 0.0;
        case DomainKind::disk:
            return norm(x) <= radius_;
        case DomainKind::ellipse: {
            double u = x.x / ell_a_, v = x.y / ell_b_;
            return u * u + v * v <= 1.0;
        }
        case DomainKind::sampled: {
            ProjectionResult r = project_bounded(x);
            return dot(x - r.frame.point, r.frame.outward_normal) <= 0.0;
        }
    }
    return false;
}

double ConvexDomain::max_boundary_curvature(double s0, double s1) const {
    switch (kind_) {
        case DomainKind::half_plane:
            return 0.0;
        case DomainKind::disk:
            return 1.0 / radius_;
        default: {
            if (s1 < s0) std::swap(s0, s1);
            double span = std::min(s1 - s0, boundary_length_);
            double worst = 0.0;
            const int n = 129;
            for (int i = 0; i < n; ++i) {
                double s = s0 + span * i / (n - 1);
                worst = std::max(worst, frame(s).curvature);
            }
            return worst;
        }
    }
}

AngleData angles_at(const ConvexDomain& domain, Vec2 x, Vec2 y, const BoundaryFrame& z,
                    Vec2 X, Vec2 Y) {
    check_finite(x, "angles_at");
    check_finite(y, "angles_at");
    if (domain.bounded()) {
        BoundaryFrame check = domain.frame(z.s);
        if (dist(check.point, z.point) > 1e-6 * std::max(1.0, domain.scale())) {
            throw std::invalid_argument("angles_at: z is not a boundary frame of this domain");
        }
    }
    Vec2 w = x - y;
    Vec2 ux = x - z.point;
    Vec2 uy = y - z.point;
    double scale = std::max({norm(x), norm(y), norm(z.point), 1e-30});
    if (norm(w) <= 1e-15 * scale) {
        throw std::invalid_argument("angles_at: x == y, alpha_x/alpha_y undefined");
    }
    if (norm(ux) <= 1e-15 * scale) {
        throw std::invalid_argument("angles_at: x == z, theta_x/beta_x undefined");
    }
    if (norm(uy) <= 1e-15 * scale) {
        throw std::invalid_argument("angles_at: y == z, theta_y/beta_y undefined");
    }
    w = normalized(w);
    ux = normalized(ux);
    uy = normalized(uy);

    AngleData a;
    a.theta_x = std::atan2(dot(ux, z.tangent), dot(ux, z.outward_normal));
    a.theta_y = std::atan2(dot(uy, z.tangent), dot(uy, z.outward_normal));
    // Frame (-JX, X): cos against -JX, sin against X.
    a.alpha_x = std::atan2(dot(w, X), dot(w, -rot90(X)));
    a.alpha_y = std::atan2(dot(w, Y), dot(w, -rot90(Y)));
    a.beta_x = std::atan2(dot(ux, X), dot(ux, -rot90(X)));
    a.beta_y = std::atan2(dot(uy, Y), dot(uy, -rot90(Y)));
    return a;
}

double angle_reconstruction_residual(const AngleData& a, Vec2 x, Vec2 y,
                                     const BoundaryFrame& z, Vec2 X, Vec2 Y) {
    Vec2 w = normalized(x - y);
    Vec2 ux = normalized(x - z.point);
    Vec2 uy = normalized(y - z.point);
    auto in_frame = [](double ang, Vec2 c, Vec2 s) {
        return std::cos(ang) * c + std::sin(ang) * s;
    };
    double r = 0.0;
    r = std::max(r, norm(in_frame(a.theta_x, z.outward_normal, z.tangent) - ux));
    r = std::max(r, norm(in_frame(a.theta_y, z.outward_normal, z.tangent) - uy));
    r = std::max(r, norm(in_frame(a.alpha_x, -rot90(X), X) - w));
    r = std::max(r, norm(in_frame(a.alpha_y, -rot90(Y), Y) - w));
    r = std::max(r, norm(in_frame(a.beta_x, -rot90(X), X) - ux));
    r = std::max(r, norm(in_frame(a.beta_y, -rot90(Y), Y) - uy));
    return r;
}

}  // namespace fbcsf

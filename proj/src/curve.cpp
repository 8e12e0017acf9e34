#include "fbcsf/curve.hpp"

#include <algorithm>
#include <cmath>

namespace fbcsf {

namespace {

bool strictly_inside(const ConvexDomain& dom, Vec2 p) {
    switch (dom.kind()) {
        case DomainKind::half_plane:
            return p.y > 0.0;
        case DomainKind::disk:
            return norm(p) < dom.disk_radius();
        case DomainKind::ellipse: {
            double u = p.x / dom.ellipse_a(), v = p.y / dom.ellipse_b();
            return u * u + v * v < 1.0;
        }
        case DomainKind::sampled: {
            ProjectionResult r = dom.project(p);
            return dot(p - r.frame.point, r.frame.outward_normal) < 0.0;
        }
    }
    return false;
}

// Lagrange polynomial through up to three nodes, evaluated at t.
double poly_extrapolate(const std::vector<double>& ts, const std::vector<double>& vals,
                        double t) {
    const size_t n = ts.size();
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double w = 1.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            w *= (t - ts[j]) / (ts[i] - ts[j]);
        }
        acc += w * vals[i];
    }
    return acc;
}

double poly_derivative(const std::vector<double>& ts, const std::vector<double>& vals,
                       double t) {
    const size_t n = ts.size();
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            double w = 1.0 / (ts[i] - ts[k]);
            for (size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                w *= (t - ts[j]) / (ts[i] - ts[j]);
            }
            sum += w;
        }
        acc += sum * vals[i];
    }
    return acc;
}

}  // namespace

DiscreteCurve::DiscreteCurve(const ConvexDomain& domain, std::vector<Vec2> vertices,
                             const CurveBuildOptions& opts)
    : domain_(&domain), v_(std::move(vertices)), flipped_(opts.flip_normal) {
    if (v_.size() < 4) {
        throw std::invalid_argument("DiscreteCurve: need at least 4 vertices");
    }
    for (const Vec2& p : v_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw std::invalid_argument("DiscreteCurve: non-finite vertex");
        }
    }
    build_tables();

    // Endpoints live on the boundary (snap small residuals).
    ProjectionResult pl = domain.project(v_.front());
    ProjectionResult pr = domain.project(v_.back());
    double tol = opts.endpoint_tol_rel * length_;
    if (pl.distance > tol || pr.distance > tol) {
        throw std::invalid_argument("DiscreteCurve: endpoint off the boundary");
    }
    // Snap onto the boundary, but leave machine-exact endpoints untouched.
    double snap = 1e-15 * std::max(1.0, domain.scale());
    if (pl.distance > snap) v_.front() = pl.frame.point;
    if (pr.distance > snap) v_.back() = pr.frame.point;
    s_left_ = pl.frame.s;
    s_right_ = pr.frame.s;
    build_tables();

    if (opts.check_interior) {
        for (int i = 1; i + 1 < static_cast<int>(v_.size()); ++i) {
            if (!strictly_inside(domain, v_[i])) {
                throw std::runtime_error("DiscreteCurve: interior vertex touches the boundary");
            }
        }
    }
    if (opts.check_embedded && polyline_self_intersects(v_)) {
        throw std::runtime_error("DiscreteCurve: polyline is not embedded");
    }

    orth_left_ = std::abs(dot(tangent(0), pl.frame.tangent));
    orth_right_ = std::abs(dot(tangent(last_index()), pr.frame.tangent));
    if (opts.tol_orth > 0.0 &&
        (orth_left_ > opts.tol_orth || orth_right_ > opts.tol_orth)) {
        throw std::runtime_error("DiscreteCurve: orthogonal contact violated");
    }

    compute_curvature();
}

void DiscreteCurve::build_tables() {
    const size_t n = v_.size();
    edge_len_.assign(n - 1, 0.0);
    cum_.assign(n, 0.0);
    length_ = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
        edge_len_[i] = dist(v_[i], v_[i + 1]);
        cum_[i + 1] = cum_[i] + edge_len_[i];
    }
    length_ = cum_.back();
    if (!(length_ > 0.0)) throw std::runtime_error("DiscreteCurve: zero length");
    h_min_ = kInf;
    h_max_ = 0.0;
    for (double h : edge_len_) {
        if (h < 1e-14 * length_) {
            throw std::runtime_error("DiscreteCurve: mesh error (degenerate edge)");
        }
        h_min_ = std::min(h_min_, h);
        h_max_ = std::max(h_max_, h);
    }
}

void DiscreteCurve::compute_curvature() {
    const int n = static_cast<int>(v_.size());
    kappa_.assign(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        Vec2 e0 = v_[i] - v_[i - 1];
        Vec2 e1 = v_[i + 1] - v_[i];
        double turn = std::atan2(cross(e0, e1), dot(e0, e1));
        kappa_[i] = 2.0 * turn / (edge_len_[i - 1] + edge_len_[i]);
    }
    // Endpoint values by quadratic extrapolation of interior samples. The
    // vertex adjacent to a boundary foot carries an O(1) turning-angle
    // artifact from the discrete orthogonality construction, so the fit
    // starts one vertex further in when the mesh allows it.
    int first = (n >= 8) ? 2 : 1;
    int avail = std::min(3, n - 2 * first);
    avail = std::max(avail, 1);
    std::vector<double> ts(avail), vals(avail);
    for (int k = 0; k < avail; ++k) {
        ts[k] = cum_[first + k];
        vals[k] = kappa_[first + k];
    }
    kappa_[0] = poly_extrapolate(ts, vals, 0.0);
    for (int k = 0; k < avail; ++k) {
        ts[k] = cum_[n - 1 - first - k];
        vals[k] = kappa_[n - 1 - first - k];
    }
    kappa_[n - 1] = poly_extrapolate(ts, vals, length_);
    if (flipped_) {
        for (double& k : kappa_) k = -k;
    }
}

double DiscreteCurve::arclength(int i, int j) const { return std::abs(cum_[i] - cum_[j]); }

double DiscreteCurve::chordlength(int i, int j) const { return dist(v_[i], v_[j]); }

double DiscreteCurve::reflected_arclength(int i, int j) const {
    return std::min(cum_[i] + cum_[j], 2.0 * length_ - cum_[i] - cum_[j]);
}

double DiscreteCurve::reflected_arclength_via(int i, int j, int end) const {
    return end == 0 ? cum_[i] + cum_[j] : 2.0 * length_ - cum_[i] - cum_[j];
}

Vec2 DiscreteCurve::tangent(int i) const {
    const int n = static_cast<int>(v_.size());
    Vec2 d;
    if (i == 0) {
        d = v_[1] - v_[0];
    } else if (i == n - 1) {
        d = v_[n - 1] - v_[n - 2];
    } else {
        d = v_[i + 1] - v_[i - 1];
    }
    return normalized(d);
}

double DiscreteCurve::endpoint_curvature_derivative(int end) const {
    const int n = static_cast<int>(v_.size());
    int first = (n >= 8) ? 2 : 1;
    int avail = std::max(std::min(3, n - 2 * first), 1);
    std::vector<double> ts(avail), vals(avail);
    if (end == 0) {
        for (int k = 0; k < avail; ++k) {
            ts[k] = cum_[first + k];
            vals[k] = kappa_[first + k];
        }
        return poly_derivative(ts, vals, 0.0);
    }
    for (int k = 0; k < avail; ++k) {
        ts[k] = cum_[n - 1 - first - k];
        vals[k] = kappa_[n - 1 - first - k];
    }
    return poly_derivative(ts, vals, length_);
}

double DiscreteCurve::integral_kappa_sq() const {
    const int n = static_cast<int>(v_.size());
    double acc = kappa_[0] * kappa_[0] * 0.5 * edge_len_[0] +
                 kappa_[n - 1] * kappa_[n - 1] * 0.5 * edge_len_[n - 2];
    for (int i = 1; i + 1 < n; ++i) {
        acc += kappa_[i] * kappa_[i] * 0.5 * (edge_len_[i - 1] + edge_len_[i]);
    }
    return acc;
}

double DiscreteCurve::max_abs_kappa() const {
    double m = 0.0;
    for (double k : kappa_) m = std::max(m, std::abs(k));
    return m;
}

DiscreteCurve::TotalCurvature DiscreteCurve::total_curvature() const {
    const int n = static_cast<int>(v_.size());
    TotalCurvature out;
    out.K = std::abs(kappa_[0]) * 0.5 * edge_len_[0] +
            std::abs(kappa_[n - 1]) * 0.5 * edge_len_[n - 2];
    for (int i = 1; i + 1 < n; ++i) {
        out.K += std::abs(kappa_[i]) * 0.5 * (edge_len_[i - 1] + edge_len_[i]);
    }
    // Sign changes with a dead band: mesh noise around zero must not read as
    // inflections.
    double band = 1e-3 * max_abs_kappa() + 1e-14 / length_;
    auto count_sign_changes = [band](const std::vector<double>& vals) {
        int changes = 0;
        int last = 0;
        for (double v : vals) {
            int s = (v > band) ? 1 : (v < -band ? -1 : 0);
            if (s == 0) continue;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    };
    out.inflection_count = count_sign_changes(kappa_);
    std::vector<double> dk(n - 1);
    for (int i = 0; i + 1 < n; ++i) dk[i] = kappa_[i + 1] - kappa_[i];
    out.vertex_count = count_sign_changes(dk);
    return out;
}

DoubledIndex DoubledCurve::element(int k) const {
    const int N = curve_->last_index();
    if (k <= N) return {k, +1};
    return {k - N, -1};  // interior indices 1..N-1 on the minus copy
}

DoubledIndex DoubledCurve::canonical(DoubledIndex a) const {
    if (is_endpoint(a)) return {a.i, +1};
    return a;
}

double DoubledCurve::arclen(DoubledIndex a, DoubledIndex b) const {
    a = canonical(a);
    b = canonical(b);
    bool same = (a.sign == b.sign) || is_endpoint(a) || is_endpoint(b);
    return same ? curve_->arclength(a.i, b.i) : curve_->reflected_arclength(a.i, b.i);
}

double DoubledCurve::chord(DoubledIndex a, DoubledIndex b) const {
    a = canonical(a);
    b = canonical(b);
    bool same = (a.sign == b.sign) || is_endpoint(a) || is_endpoint(b);
    if (same) return curve_->chordlength(a.i, b.i);
    return reflected_distance(*domain_, point(a), point(b)).distance;
}

std::optional<ReflectedDistanceResult> DoubledCurve::snell(DoubledIndex a,
                                                           DoubledIndex b) const {
    a = canonical(a);
    b = canonical(b);
    if (a.sign == b.sign || is_endpoint(a) || is_endpoint(b)) return std::nullopt;
    return reflected_distance(*domain_, point(a), point(b));
}

}  // namespace fbcsf

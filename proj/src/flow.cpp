#include "fbcsf/flow.hpp"

#include <algorithm>
#include <cmath>

#include "fbcsf/initial_curves.hpp"

namespace fbcsf {

const char* to_string(Classification c) {
    switch (c) {
        case Classification::chord_converged: return "chord_converged";
        case Classification::extinction_suspected: return "extinction_suspected";
        case Classification::budget_exhausted: return "budget_exhausted";
        case Classification::singularity_suspected: return "singularity_suspected";
    }
    return "unknown";
}

DiscreteCurve step(const DiscreteCurve& curve, const ConvexDomain& domain, double dt,
                   double dt_safety, double tol_orth) {
    if (!(dt > 0.0) || !(dt_safety > 0.0) || dt_safety > 0.5) {
        throw std::invalid_argument("step: need dt > 0 and dt_safety in (0, 0.5]");
    }
    double h_min = curve.min_edge();
    if (dt > dt_safety * h_min * h_min * (1.0 + 1e-12)) {
        throw std::invalid_argument("step: dt exceeds the CFL bound dt_safety * h_min^2");
    }

    const std::vector<Vec2>& v = curve.vertices();
    const std::vector<double>& h = curve.edge_lengths();
    const int n = static_cast<int>(v.size());
    std::vector<Vec2> w(v);
    // Interior update by the discrete curvature vector: -kappa N = gamma_ss.
    // Dual lengths are Voronoi cells on the formal double: an end segment is
    // half of a doubled edge, so it counts fully at the adjacent vertex.
    // (The uniform (h0+h1)/2 weight there costs one order of accuracy.)
    for (int i = 1; i + 1 < n; ++i) {
        Vec2 e0 = (v[i] - v[i - 1]) / h[i - 1];
        Vec2 e1 = (v[i + 1] - v[i]) / h[i];
        double dual = (i == 1 ? h[0] : 0.5 * h[i - 1]) +
                      (i == n - 2 ? h[n - 2] : 0.5 * h[i]);
        w[i] += dt / dual * (e1 - e0);
    }
    double sl = solve_orthogonal_endpoint(domain, w[1], curve.s_left());
    double sr = solve_orthogonal_endpoint(domain, w[n - 2], curve.s_right());
    w[0] = domain.frame(sl).point;
    w[n - 1] = domain.frame(sr).point;

    CurveBuildOptions opts;
    opts.tol_orth = tol_orth;
    return DiscreteCurve(domain, std::move(w), opts);
}

DiscreteCurve remesh(const DiscreteCurve& curve, const ConvexDomain& domain, int m,
                     double tol_orth) {
    const std::vector<Vec2>& v = curve.vertices();
    const std::vector<double>& s = curve.cumulative_arclength();
    const int n = static_cast<int>(v.size());
    if (m < 4) throw std::invalid_argument("remesh: need at least 4 edges");

    // Clamped cubic splines x(s), y(s); end slopes from 4-point one-sided
    // differences keep the interpolation O(h^4) up to the ends (a natural
    // spline would leak O(h^2) errors into every remesh).
    auto end_slope = [&](auto comp, bool left) {
        int n_fit = std::min(4, n);
        double t = left ? s.front() : s.back();
        double acc = 0.0;
        for (int i = 0; i < n_fit; ++i) {
            int ii = left ? i : n - 1 - i;
            double sum = 0.0;
            for (int k = 0; k < n_fit; ++k) {
                if (k == i) continue;
                int kk = left ? k : n - 1 - k;
                double w = 1.0 / (s[ii] - s[kk]);
                for (int j = 0; j < n_fit; ++j) {
                    if (j == i || j == k) continue;
                    int jj = left ? j : n - 1 - j;
                    w *= (t - s[jj]) / (s[ii] - s[jj]);
                }
                sum += w;
            }
            acc += sum * comp(v[ii]);
        }
        return acc;
    };
    auto spline_m = [&](auto comp) {
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0), mm(n, 0.0);
        double h0 = s[1] - s[0], hl = s[n - 1] - s[n - 2];
        b[0] = h0 / 3.0;
        c[0] = h0 / 6.0;
        d[0] = (comp(v[1]) - comp(v[0])) / h0 - end_slope(comp, true);
        a[n - 1] = hl / 6.0;
        b[n - 1] = hl / 3.0;
        d[n - 1] = end_slope(comp, false) - (comp(v[n - 1]) - comp(v[n - 2])) / hl;
        for (int i = 1; i + 1 < n; ++i) {
            double hm = s[i] - s[i - 1], hi = s[i + 1] - s[i];
            a[i] = hm / 6.0;
            b[i] = (hm + hi) / 3.0;
            c[i] = hi / 6.0;
            d[i] = (comp(v[i + 1]) - comp(v[i])) / hi - (comp(v[i]) - comp(v[i - 1])) / hm;
        }
        for (int i = 1; i < n; ++i) {
            double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        mm[n - 1] = d[n - 1] / b[n - 1];
        for (int i = n - 1; i-- > 0;) mm[i] = (d[i] - c[i] * mm[i + 1]) / b[i];
        return mm;
    };
    std::vector<double> mx = spline_m([](Vec2 p) { return p.x; });
    std::vector<double> my = spline_m([](Vec2 p) { return p.y; });

    auto eval = [&](double t) -> Vec2 {
        int i = static_cast<int>(std::upper_bound(s.begin(), s.end(), t) - s.begin());
        i = std::clamp(i, 1, n - 1) - 1;
        double hi = s[i + 1] - s[i], dt_ = t - s[i], ht = hi - dt_;
        auto comp = [&](double mi, double mp, double vi, double vp) {
            return mi * ht * ht * ht / (6.0 * hi) + mp * dt_ * dt_ * dt_ / (6.0 * hi) +
                   (vi / hi - mi * hi / 6.0) * ht + (vp / hi - mp * hi / 6.0) * dt_;
        };
        return {comp(mx[i], mx[i + 1], v[i].x, v[i + 1].x),
                comp(my[i], my[i + 1], v[i].y, v[i + 1].y)};
    };

    std::vector<Vec2> w(m + 1);
    w[0] = v.front();
    w[m] = v.back();
    double L = curve.length();
    for (int k = 1; k < m; ++k) w[k] = eval(L * k / m);

    // Interior nodes may overshoot a convex boundary by the spline error;
    // pull any such node back inside.
    for (int k = 1; k < m; ++k) {
        if (!domain.contains(w[k])) {
            ProjectionResult pr = domain.project(w[k]);
            w[k] = pr.frame.point - (1e-12 * L) * pr.frame.outward_normal;
        }
    }
    align_endpoints(domain, w, curve.s_left(), curve.s_right());

    CurveBuildOptions opts;
    opts.tol_orth = tol_orth;
    return DiscreteCurve(domain, std::move(w), opts);
}

SnapshotDiagnostics compute_diagnostics(const DiscreteCurve& curve, const ConvexDomain& domain,
                                        const ComparisonFunction* phi) {
    SnapshotDiagnostics d;
    d.length = curve.length();
    d.int_kappa_sq = curve.integral_kappa_sq();
    DiscreteCurve::TotalCurvature tc = curve.total_curvature();
    d.total_curvature_K = tc.K;
    d.inflection_count = tc.inflection_count;
    d.curvature_vertex_count = tc.vertex_count;
    d.max_abs_kappa = curve.max_abs_kappa();
    d.s_left = curve.s_left();
    d.s_right = curve.s_right();
    d.orth_left = curve.orth_residual_left();
    d.orth_right = curve.orth_residual_right();
    d.h_min = curve.min_edge();
    d.h_max = curve.max_edge();
    d.min_boundary_distance = kInf;
    for (int i = 1; i + 1 < curve.vertex_count(); ++i) {
        d.min_boundary_distance =
            std::min(d.min_boundary_distance, domain.boundary_distance(curve.vertices()[i]));
    }
    if (phi) {
        DoubledCurve dc(curve, domain);
        d.min_z = min_Z(dc, *phi).value;
    }
    return d;
}

namespace {

double boundary_travel_increment(const ConvexDomain& domain, double s0, double s1) {
    double ds;
    if (domain.bounded()) {
        ds = std::remainder(s1 - s0, domain.boundary_length());
    } else {
        ds = s1 - s0;
    }
    double k0 = domain.frame(s0).curvature;
    double k1 = domain.frame(s1).curvature;
    return std::abs(ds) * 0.5 * (k0 + k1);
}

}  // namespace

FlowTrace run(const DiscreteCurve& initial, const ConvexDomain& domain,
              const FlowConfig& config, const ComparisonFunction* phi) {
    if (!(config.dt_safety > 0.0) || config.dt_safety > 0.5) {
        throw std::invalid_argument("run: dt_safety must be in (0, 0.5]");
    }
    if (!(config.output_interval > 0.0)) {
        throw std::invalid_argument("run: output_interval must be positive");
    }
    FlowTrace trace;
    trace.domain = &domain;

    DiscreteCurve curve = initial;
    const double L0 = curve.length();
    double t = 0.0;
    long steps = 0;
    int remesh_count = 0;
    double travel = 0.0;
    double step_rate = kNaN;

    auto emit = [&](const DiscreteCurve& c) {
        SnapshotDiagnostics d = compute_diagnostics(c, domain, phi);
        d.dL_dt_step = step_rate;
        d.boundary_travel = travel;
        d.step_index = steps;
        d.remesh_count = remesh_count;
        trace.snapshots.push_back({t, c, d});
    };
    emit(curve);
    double next_output = config.output_interval;

    const int target = config.target_edge_count > 0 ? config.target_edge_count
                                                    : curve.last_index();
    bool done = false;
    while (!done) {
        // Stop rules, checked against the current state.
        const SnapshotDiagnostics& last = trace.snapshots.back().diag;
        if (config.stop.length_below > 0.0 && curve.length() < config.stop.length_below) {
            trace.classification = Classification::extinction_suspected;
            trace.stop_reason = "length below threshold";
            break;
        }
        if (curve.length() < 50.0 * std::numeric_limits<double>::epsilon() * L0 ||
            curve.min_edge() < 1e-6 * L0) {
            trace.classification = Classification::extinction_suspected;
            trace.stop_reason = "mesh collapsed near extinction";
            break;
        }
        if (curve.max_abs_kappa() < 1e-4 / curve.length() &&
            curve.orth_residual_left() <= config.tol_orth &&
            curve.orth_residual_right() <= config.tol_orth) {
            trace.classification = Classification::chord_converged;
            trace.stop_reason = "curvature below chord threshold";
            break;
        }
        if (config.stop.min_z_negative && phi && last.min_z < 0.0) {
            trace.classification = Classification::budget_exhausted;
            trace.stop_reason = "min Z went negative";
            break;
        }
        if (steps >= config.stop.max_steps) {
            trace.classification = Classification::budget_exhausted;
            trace.stop_reason = "max steps reached";
            break;
        }
        if (t >= config.stop.time_at - 1e-15 * std::max(1.0, config.stop.time_at)) {
            trace.classification = Classification::budget_exhausted;
            trace.stop_reason = "time horizon reached";
            break;
        }

        double dt = config.dt_safety * curve.min_edge() * curve.min_edge();
        if (t + dt > config.stop.time_at) dt = config.stop.time_at - t;
        if (t < next_output && t + dt > next_output) dt = next_output - t;

        // Attempt the step; on geometric failure halve dt and retry.
        bool accepted = false;
        for (int attempt = 0; attempt < 20; ++attempt) {
            try {
                DiscreteCurve next = step(curve, domain, dt, 0.5, config.tol_orth);
                travel += boundary_travel_increment(domain, curve.s_left(), next.s_left());
                travel += boundary_travel_increment(domain, curve.s_right(), next.s_right());
                step_rate = (next.length() - curve.length()) / dt;
                curve = std::move(next);
                accepted = true;
                break;
            } catch (const std::runtime_error&) {
                dt *= 0.5;
            }
        }
        if (!accepted) {
            trace.classification = Classification::singularity_suspected;
            trace.stop_reason = "step rejected 20 times";
            break;
        }
        t += dt;
        ++steps;

        if (config.remesh_every > 0 && steps % config.remesh_every == 0) {
            double sl = curve.s_left(), sr = curve.s_right();
            curve = remesh(curve, domain, target, config.tol_orth);
            travel += boundary_travel_increment(domain, sl, curve.s_left());
            travel += boundary_travel_increment(domain, sr, curve.s_right());
            ++remesh_count;
        }

        if (t >= next_output - 1e-15 * std::max(1.0, next_output)) {
            emit(curve);
            while (next_output <= t + 1e-15 * std::max(1.0, next_output)) {
                next_output += config.output_interval;
            }
        }
    }
    trace.total_steps = steps;
    if (trace.snapshots.back().t < t) emit(curve);
    return trace;
}

ExtinctionEstimate extinction_estimate(const FlowTrace& trace) {
    if (trace.classification != Classification::extinction_suspected) {
        throw std::invalid_argument("extinction_estimate: trace is not an extinction run");
    }
    const auto& snaps = trace.snapshots;
    size_t n = snaps.size();
    size_t first = n - std::max<size_t>(n / 5, 2);  // final 20%
    size_t count = n - first;
    if (count < 10) {
        throw std::runtime_error("extinction_estimate: fewer than 10 snapshots in fit window");
    }
    // Least squares L^2 = q + m t.
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (size_t i = first; i < n; ++i) {
        double x = snaps[i].t, y = snaps[i].diag.length * snaps[i].diag.length;
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
    }
    double m = (count * sty - st * sy) / (count * stt - st * st);
    double q = (sy - m * st) / count;
    if (!(m < 0.0)) {
        throw std::runtime_error("extinction_estimate: L^2 is not decreasing in the window");
    }
    ExtinctionEstimate est;
    est.T = -q / m;
    const DiscreteCurve& last = snaps.back().curve;
    Vec2 mid = 0.5 * (last.vertices().front() + last.vertices().back());
    est.z = trace.domain->project(mid).frame.point;
    return est;
}

double hausdorff_to_unit_semicircle(const std::vector<Vec2>& pts, Vec2 n) {
    n = normalized(n);
    Vec2 tdir = rot90(n);
    // Distance from a point to the arc {|p| = 1, <p, n> <= 0}.
    auto dist_to_arc = [&](Vec2 p) {
        double r = norm(p);
        if (r > 0.0 && dot(p / r, n) <= 0.0) return std::abs(1.0 - r);
        return std::min(dist(p, tdir), dist(p, -tdir));
    };
    double d1 = 0.0;
    for (const Vec2& p : pts) d1 = std::max(d1, dist_to_arc(p));
    double d2 = 0.0;
    const int m = 512;
    for (int k = 0; k <= m; ++k) {
        double psi = -0.5 * kPi + kPi * k / m;
        Vec2 q = std::sin(psi) * tdir - std::cos(psi) * n;
        double best = kInf;
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            best = std::min(best, point_segment_distance(q, pts[i], pts[i + 1]));
        }
        d2 = std::max(d2, best);
    }
    return std::max(d1, d2);
}

RescaledCurve rescale(const DiscreteCurve& curve, const ConvexDomain& domain, Vec2 z,
                      double T, double t) {
    if (!(t < T)) throw std::invalid_argument("rescale: need t < T");
    double factor = 1.0 / std::sqrt(2.0 * (T - t));
    RescaledCurve out;
    out.vertices.reserve(curve.vertices().size());
    for (const Vec2& v : curve.vertices()) out.vertices.push_back(factor * (v - z));
    Vec2 n = domain.project(z).frame.outward_normal;
    out.hausdorff_to_unit_semicircle = hausdorff_to_unit_semicircle(out.vertices, n);
    return out;
}

}  // namespace fbcsf

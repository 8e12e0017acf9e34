#include "fbcsf/chord_arc.hpp"

#include <algorithm>
#include <cmath>

namespace fbcsf {

namespace {

// Natural cubic spline on a uniform grid over [0,1].
std::vector<double> natural_spline_m(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    double h = 1.0 / (n - 1);
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0), m(n, 0.0);
    b[0] = b[n - 1] = 1.0;
    for (int i = 1; i + 1 < n; ++i) {
        a[i] = h / 6.0;
        b[i] = 2.0 * h / 3.0;
        c[i] = h / 6.0;
        d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h;
    }
    for (int i = 1; i < n; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 1; i-- > 0;) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
    return m;
}

}  // namespace

ComparisonFunction ComparisonFunction::barrier(double c, double eps) {
    if (!(c > 0.0) || !(eps > 0.0) || !(eps < kPi)) {
        throw std::invalid_argument("barrier: need c > 0 and eps in (0, pi)");
    }
    ComparisonFunction f;
    f.kind_ = "barrier";
    f.c_ = c;
    f.eps_ = eps;
    f.verify_admissible();
    return f;
}

ComparisonFunction ComparisonFunction::scaled_sine(double c, double tau) {
    if (!(c > 0.0) || tau < 0.0) {
        throw std::invalid_argument("scaled_sine: need c > 0 and tau >= 0");
    }
    ComparisonFunction f;
    f.kind_ = "scaled_sine";
    f.c_ = c;
    f.tau_ = tau;
    f.verify_admissible();
    return f;
}

ComparisonFunction ComparisonFunction::tabulated(std::vector<double> values) {
    if (values.size() < 8) throw std::invalid_argument("tabulated: need at least 8 values");
    ComparisonFunction f;
    f.kind_ = "tabulated";
    f.tab_ = std::move(values);
    f.tab_m_ = natural_spline_m(f.tab_);
    f.verify_admissible();
    return f;
}

double ComparisonFunction::value(double z) const {
    if (kind_ == "barrier") {
        return c_ * (std::sin((kPi - eps_) * z + 0.5 * eps_) - std::sin(0.5 * eps_));
    }
    if (kind_ == "scaled_sine") {
        return c_ * std::exp(-4.0 * kPi * kPi * tau_) * std::sin(kPi * z);
    }
    const int n = static_cast<int>(tab_.size());
    double h = 1.0 / (n - 1);
    double zc = std::clamp(z, 0.0, 1.0);
    int i = std::min(static_cast<int>(zc / h), n - 2);
    double t = zc - i * h, ht = h - t;
    return tab_m_[i] * ht * ht * ht / (6.0 * h) + tab_m_[i + 1] * t * t * t / (6.0 * h) +
           (tab_[i] / h - tab_m_[i] * h / 6.0) * ht + (tab_[i + 1] / h - tab_m_[i + 1] * h / 6.0) * t;
}

double ComparisonFunction::deriv(double z) const {
    if (kind_ == "barrier") {
        return c_ * (kPi - eps_) * std::cos((kPi - eps_) * z + 0.5 * eps_);
    }
    if (kind_ == "scaled_sine") {
        return c_ * std::exp(-4.0 * kPi * kPi * tau_) * kPi * std::cos(kPi * z);
    }
    const int n = static_cast<int>(tab_.size());
    double h = 1.0 / (n - 1);
    double zc = std::clamp(z, 0.0, 1.0);
    int i = std::min(static_cast<int>(zc / h), n - 2);
    double t = zc - i * h, ht = h - t;
    return -tab_m_[i] * ht * ht / (2.0 * h) + tab_m_[i + 1] * t * t / (2.0 * h) +
           (tab_[i + 1] - tab_[i]) / h - (tab_m_[i + 1] - tab_m_[i]) * h / 6.0;
}

double ComparisonFunction::second_deriv(double z) const {
    if (kind_ == "barrier") {
        double w = kPi - eps_;
        return -c_ * w * w * std::sin(w * z + 0.5 * eps_);
    }
    if (kind_ == "scaled_sine") {
        return -c_ * std::exp(-4.0 * kPi * kPi * tau_) * kPi * kPi * std::sin(kPi * z);
    }
    const int n = static_cast<int>(tab_.size());
    double h = 1.0 / (n - 1);
    double zc = std::clamp(z, 0.0, 1.0);
    int i = std::min(static_cast<int>(zc / h), n - 2);
    double t = zc - i * h, ht = h - t;
    return tab_m_[i] * ht / h + tab_m_[i + 1] * t / h;
}

void ComparisonFunction::verify_admissible() const {
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        double z = (k + 0.5) / n;
        double v = value(z), vp = deriv(z);
        if (std::abs(value(1.0 - z) - v) > 1e-10 * std::max(1.0, std::abs(v))) {
            throw std::invalid_argument("comparison function: phi(1-z) != phi(z)");
        }
        if (!(std::abs(vp) < 1.0)) {
            throw std::invalid_argument("comparison function: |phi'| >= 1");
        }
        if (kind_ != "tabulated" && !(second_deriv(z) < 0.0)) {
            throw std::invalid_argument("comparison function: phi not strictly concave");
        }
        if (z < 0.5) {
            if (!(vp > 0.0) || !(v - z * vp > 0.0)) {
                throw std::invalid_argument(
                    "comparison function: phi' > 0 or phi - z phi' > 0 fails on [0, 1/2)");
            }
        }
    }
    if (kind_ == "tabulated") {
        for (size_t i = 1; i + 1 < tab_.size(); ++i) {
            if (!(tab_[i - 1] + tab_[i + 1] - 2.0 * tab_[i] < 0.0)) {
                throw std::invalid_argument("comparison function: table not strictly concave");
            }
        }
    }
}

double evaluate_Z(const DoubledCurve& dc, const ComparisonFunction& phi, DoubledIndex a,
                  DoubledIndex b) {
    double L = dc.doubled_length();
    return dc.chord(a, b) - L * phi.value(dc.arclen(a, b) / L);
}

ProfileReport extended_profile(const DoubledCurve& dc, int n_bins,
                               const ComparisonFunction* phi) {
    const DiscreteCurve& base = dc.base();
    if (base.vertex_count() < 8) {
        throw std::invalid_argument("extended_profile: need at least 8 vertices");
    }
    if (n_bins < 16) throw std::invalid_argument("extended_profile: need n_bins >= 16");

    ProfileReport rep;
    const double L = dc.doubled_length();
    rep.doubled_length = L;
    rep.bins.assign(n_bins, ProfileBin{});
    rep.has_z = (phi != nullptr);

    const int m = dc.element_count();
    const double half = 0.5 * L;
    for (int k1 = 0; k1 + 1 < m; ++k1) {
        DoubledIndex a = dc.element(k1);
        for (int k2 = k1 + 1; k2 < m; ++k2) {
            DoubledIndex b = dc.element(k2);
            double l = dc.arclen(a, b);
            if (l <= 0.0) continue;  // identified endpoint copies
            double d = dc.chord(a, b);
            bool same = (a.sign == b.sign) || dc.is_endpoint(a) || dc.is_endpoint(b);
            int bin = std::min(static_cast<int>(l / half * n_bins), n_bins - 1);
            if (d < rep.bins[bin].psi) {
                rep.bins[bin] = {l, d, same ? ProfileBranch::classical : ProfileBranch::reflected,
                                 a, b};
            }
            if (phi) {
                double z = d - L * phi->value(l / L);
                if (!(z >= rep.min_z)) {  // first assignment via NaN comparison
                    rep.min_z = z;
                    rep.argmin_a = a;
                    rep.argmin_b = b;
                    rep.argmin_l = l;
                    rep.argmin_d = d;
                    rep.argmin_branch =
                        same ? ProfileBranch::classical : ProfileBranch::reflected;
                }
            }
        }
    }

    if (phi && std::isfinite(rep.min_z)) {
        const ConvexDomain& dom = dc.domain();
        Vec2 x = dc.point(rep.argmin_a), y = dc.point(rep.argmin_b);
        Vec2 X = base.tangent(rep.argmin_a.i), Y = base.tangent(rep.argmin_b.i);
        BoundaryFrame z;
        if (rep.argmin_branch == ProfileBranch::reflected) {
            rep.snell_data = dc.snell(rep.argmin_a, rep.argmin_b);
            z = rep.snell_data->bounce;
        } else {
            // alpha angles are the meaningful ones on this branch; any
            // non-coincident boundary point anchors theta/beta.
            z = dom.project(0.5 * (x + y)).frame;
        }
        try {
            rep.angle_check = angles_at(dom, x, y, z, X, Y);
            rep.angle_residual = angle_reconstruction_residual(*rep.angle_check, x, y, z, X, Y);
        } catch (const std::invalid_argument&) {
            rep.angle_check.reset();  // degenerate argmin configuration
        }
    }
    return rep;
}

MinZResult min_Z(const DoubledCurve& dc, const ComparisonFunction& phi) {
    MinZResult out;
    const double L = dc.doubled_length();
    const int m = dc.element_count();
    for (int k1 = 0; k1 + 1 < m; ++k1) {
        DoubledIndex a = dc.element(k1);
        for (int k2 = k1 + 1; k2 < m; ++k2) {
            DoubledIndex b = dc.element(k2);
            double l = dc.arclen(a, b);
            if (l <= 0.0) continue;
            double d = dc.chord(a, b);
            double z = d - L * phi.value(l / L);
            if (z < out.value) out = {z, a, b, l, d};
        }
    }
    return out;
}

double min_chord_arc_ratio(const DoubledCurve& dc) {
    double best = kInf;
    const int m = dc.element_count();
    for (int k1 = 0; k1 + 1 < m; ++k1) {
        DoubledIndex a = dc.element(k1);
        for (int k2 = k1 + 1; k2 < m; ++k2) {
            DoubledIndex b = dc.element(k2);
            double l = dc.arclen(a, b);
            if (l <= 0.0) continue;
            best = std::min(best, dc.chord(a, b) / l);
        }
    }
    return best;
}

MinimumConditionReport check_minimum_conditions(const DoubledCurve& dc,
                                                const ComparisonFunction& phi,
                                                const ProfileReport& report) {
    if (!report.has_z || !std::isfinite(report.min_z)) {
        throw std::invalid_argument("check_minimum_conditions: report lacks Z data");
    }
    const DiscreteCurve& base = dc.base();
    const double L = dc.doubled_length();
    MinimumConditionReport out;
    out.h = base.max_edge();
    out.tol_angle = 10.0 * out.h;
    out.tol_ineq = 10.0 * out.h / (L * L);

    if (std::abs(report.min_z) > 1e-6 * L) {
        out.outcome = MinimumConditionReport::Outcome::inconclusive_min_not_zero;
        return out;
    }
    if (report.argmin_l <= 2.0 * out.h) {
        out.outcome = MinimumConditionReport::Outcome::inconclusive_diagonal;
        return out;
    }

    DoubledIndex a = report.argmin_a, b = report.argmin_b;
    bool case_a = (report.argmin_branch == ProfileBranch::classical);
    if (!case_a && std::abs(report.argmin_l - 0.5 * L) <= out.h) {
        // min(.) kink of the reflected arclength; the continuum argument uses
        // the symmetry of phi there, which discretisation breaks.
        out.outcome = MinimumConditionReport::Outcome::skipped_crossover;
        return out;
    }

    const ConvexDomain& dom = dc.domain();
    Vec2 x = dc.point(a), y = dc.point(b);
    Vec2 X = base.tangent(a.i), Y = base.tangent(b.i);
    double kx = base.curvature()[a.i], ky = base.curvature()[b.i];
    double zeta = report.argmin_l / L;

    if (case_a) {
        // Only the alpha angles enter case (a); no boundary point is needed.
        Vec2 w = normalized(x - y);
        out.angles.alpha_x = decompose_angle(w, -rot90(X), X);
        out.angles.alpha_y = decompose_angle(w, -rot90(Y), Y);
        out.outcome = MinimumConditionReport::Outcome::case_a;
        out.alpha_sum_residual =
            std::abs(wrap_angle(out.angles.alpha_x + out.angles.alpha_y - kPi));
        out.second_variation_a = -4.0 * phi.second_deriv(zeta) / L -
                                 kx * std::cos(out.angles.alpha_x) +
                                 ky * std::cos(out.angles.alpha_y);
        out.pass = out.alpha_sum_residual <= out.tol_angle &&
                   out.second_variation_a >= -out.tol_ineq;
        return out;
    }

    ReflectedDistanceResult sn =
        report.snell_data ? *report.snell_data : *dc.snell(a, b);
    // beta and theta stay defined when x == y (the argmin pair may be the
    // same curve point on opposite copies), so assemble them directly.
    Vec2 ux = normalized(x - sn.bounce.point);
    Vec2 uy = normalized(y - sn.bounce.point);
    out.angles.theta_x = decompose_angle(ux, sn.bounce.outward_normal, sn.bounce.tangent);
    out.angles.theta_y = decompose_angle(uy, sn.bounce.outward_normal, sn.bounce.tangent);
    out.angles.beta_x = decompose_angle(ux, -rot90(X), X);
    out.angles.beta_y = decompose_angle(uy, -rot90(Y), Y);
    if (dist(x, y) > 1e-15 * std::max(1.0, dom.scale())) {
        Vec2 w = normalized(x - y);
        out.angles.alpha_x = decompose_angle(w, -rot90(X), X);
        out.angles.alpha_y = decompose_angle(w, -rot90(Y), Y);
    } else {
        out.angles.alpha_x = out.angles.alpha_y = kNaN;
    }
    out.outcome = MinimumConditionReport::Outcome::case_b;
    out.beta_residual = std::abs(wrap_angle(out.angles.beta_x - out.angles.beta_y));
    out.theta_residual = std::abs(wrap_angle(out.angles.theta_x + out.angles.theta_y));
    double inv = 1.0 / sn.d_x + 1.0 / sn.d_y;
    double ks = sn.bounce.curvature;
    double ct = std::cos(out.angles.theta_x);
    out.sign_condition = inv * ct + 2.0 * ks;
    double vp = phi.deriv(zeta);
    out.second_variation_b = -kx * std::cos(out.angles.beta_x) -
                             ky * std::cos(out.angles.beta_y) +
                             inv * (2.0 * ks / out.sign_condition) * (1.0 - vp * vp) -
                             4.0 * phi.second_deriv(zeta) / L;
    out.pass = out.beta_residual <= out.tol_angle && out.theta_residual <= out.tol_angle &&
               out.sign_condition < 0.0 && out.second_variation_b >= -out.tol_ineq;
    return out;
}

}  // namespace fbcsf

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fbcsf/initial_curves.hpp"
#include "fbcsf/verification.hpp"

using namespace fbcsf;

TEST_CASE("barrier check rejects parameters outside the stated ranges") {
    CHECK_THROWS_AS(BarrierCheckConfig(0.02, 0.05, true), std::invalid_argument);
    CHECK_THROWS_AS(BarrierCheckConfig(0.005, 0.2, true), std::invalid_argument);
    CHECK_NOTHROW(BarrierCheckConfig(0.005, 0.05, true));
}

TEST_CASE("barrier preservation holds on the shrinking semicircle") {
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve c = make_boundary_arc(hp, 0.0, 1.0, 200);
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    FlowConfig cfg;
    cfg.stop.time_at = 0.05;
    cfg.output_interval = 0.01;
    FlowTrace tr = run(c, hp, cfg, &phi);
    BarrierCheckConfig bc(0.005, 0.05, true);
    CheckReport rep = check_barrier_preservation(tr, bc);
    CHECK(rep.applicable);
    CHECK(rep.pass);
    CHECK(rep.hypothesis_held);
    CHECK(rep.hypothesis_mode == "scale_invariance_flat_boundary");
}

TEST_CASE("barrier preservation reports an initial violation as no-claim") {
    // Thin tall hairpin: the feet pair forces min Z well below -10 h L for a
    // barrier constant near the top of the admissible range.
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve st = make_stadium(hp, 0.0, 0.012, 1.0, 4000);
    FlowConfig cfg;
    cfg.stop.max_steps = 0;
    FlowTrace tr = run(st, hp, cfg);
    BarrierCheckConfig bc(0.0099, 0.05, false);
    CheckReport rep = check_barrier_preservation(tr, bc);
    CHECK_FALSE(rep.applicable);
    CHECK(rep.notes.find("t = 0") != std::string::npos);
    CHECK(rep.residuals.at("min_Z_t0") < 0.0);
}

TEST_CASE("barrier hypothesis on a curved domain is reported as empirical") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 64, true);
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    FlowConfig cfg;
    cfg.stop.max_steps = 5;
    cfg.output_interval = 1.0;
    FlowTrace tr = run(c, d, cfg, &phi);
    CheckReport strict = check_barrier_preservation(tr, BarrierCheckConfig(0.005, 0.05, true));
    CHECK_FALSE(strict.applicable);  // L(0)(1 + C) far above eps/1000
    CHECK_FALSE(strict.hypothesis_held);
    CheckReport lax = check_barrier_preservation(tr, BarrierCheckConfig(0.005, 0.05, false));
    CHECK(lax.applicable);
    CHECK(lax.hypothesis_mode.find("empirical") != std::string::npos);
}

TEST_CASE("crude bound: short runs hold, extinction runs are inapplicable") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 100, true);

    FlowConfig short_cfg;
    short_cfg.stop.time_at = 0.05;
    short_cfg.output_interval = 0.025;
    FlowTrace short_tr = run(c, d, short_cfg);
    CheckReport rep = check_crude_bound(short_tr);
    CHECK(rep.applicable);
    CHECK(rep.pass);
    CHECK(rep.residuals.at("worst_margin") > 0.0);

    FlowConfig zero_cfg;
    zero_cfg.stop.max_steps = 0;
    FlowTrace zero_tr = run(c, d, zero_cfg);
    CheckReport rep0 = check_crude_bound(zero_tr);
    CHECK(rep0.applicable);
    CHECK(rep0.pass);  // reduces to the fitted initial inequality

    DiscreteCurve arc = make_boundary_arc(d, 0.0, 0.15, 100);
    FlowConfig ext_cfg;
    ext_cfg.output_interval = 0.0005;
    ext_cfg.stop.length_below = 0.1 * arc.length();
    FlowTrace ext_tr = run(arc, d, ext_cfg);
    CheckReport repx = check_crude_bound(ext_tr);
    CHECK_FALSE(repx.applicable);
}

TEST_CASE("dichotomy is indeterminate when the budget runs out") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 64, true);
    FlowConfig cfg;
    cfg.stop.max_steps = 10;
    FlowTrace tr = run(c, d, cfg);
    CHECK(tr.classification == Classification::budget_exhausted);
    CheckReport rep = check_grayson_dichotomy(tr);
    CHECK_FALSE(rep.applicable);
    CHECK(rep.notes.find("indeterminate") != std::string::npos);
}

TEST_CASE("a one-bump perturbed diameter slides off and dies at the boundary") {
    // Critical chords of strictly convex domains are unstable under sliding
    // (the length second variation of a uniform normal shift is
    // -kappa^S(z0) - kappa^S(z1) < 0), so the nonzero-mean bump escapes and
    // the run realises dichotomy case (b), not case (a).
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 100, false);
    FlowConfig cfg;
    cfg.output_interval = 0.05;
    cfg.stop.length_below = 0.1;
    FlowTrace tr = run(c, d, cfg);
    CHECK(tr.classification == Classification::extinction_suspected);
    ExtinctionEstimate est = extinction_estimate(tr);
    CHECK(est.z.y > 0.9);  // the bump pointed upward
    CHECK(d.boundary_distance(est.z) < 1e-9);

    // The long pre-asymptotic phase biases the 20%-window T fit, so the
    // quantitative half-point comparison runs on a restarted tail, where the
    // window sits inside the self-similar regime.
    const DiscreteCurve& tail0 = tr.snapshots.back().curve;
    double r_end = tail0.length() / kPi;
    FlowConfig tail_cfg;
    tail_cfg.output_interval = r_end * r_end / 120.0;
    tail_cfg.stop.length_below = 0.3 * tail0.length();
    FlowTrace tail = run(tail0, d, tail_cfg);
    CheckReport rep = check_grayson_dichotomy(tail);
    CHECK(rep.applicable);
    CHECK(rep.pass);
    CHECK(rep.residuals.at("rescaled_hausdorff") < 0.05);
}

TEST_CASE("critical chord fit lands on a diameter of the disk") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    CriticalChord cc = fit_critical_chord(d, kPi + 0.3, -0.2);
    CHECK(cc.converged);
    CHECK(norm(cc.p0 + cc.p1) < 1e-9);           // endpoints antipodal
    CHECK(norm(cc.p0) == doctest::Approx(1.0));  // on the boundary
}

TEST_CASE("boundary avoidance on the protected diameter run") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 100, true);
    FlowConfig cfg;
    cfg.stop.time_at = 0.3;
    cfg.output_interval = 0.05;
    FlowTrace tr = run(c, d, cfg);
    CheckReport rep = check_boundary_avoidance(tr, 0.9);
    CHECK(rep.pass);
    CHECK(rep.residuals.at("c_hat") > 0.5);
}

TEST_CASE("Altschuler identity: dK/dt balances boundary and inflection terms") {
    // The odd perturbation keeps a persistent inflection at the midpoint
    // while it decays; the total-curvature derivative should match
    // sum_boundary |k| k^S - 2 sum_inflections |grad k| to leading order.
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 200, true);
    FlowConfig cfg;
    cfg.stop.time_at = 0.06;
    cfg.output_interval = 0.004;
    FlowTrace tr = run(c, d, cfg);
    REQUIRE(tr.snapshots.size() >= 10);
    int checked = 0;
    for (size_t i = 3; i + 3 < tr.snapshots.size(); ++i) {
        const Snapshot& s0 = tr.snapshots[i - 1];
        const Snapshot& s1 = tr.snapshots[i + 1];
        const Snapshot& sm = tr.snapshots[i];
        if (sm.diag.inflection_count < 1) continue;
        double lhs = (s1.diag.total_curvature_K - s0.diag.total_curvature_K) / (s1.t - s0.t);
        const DiscreteCurve& cur = sm.curve;
        const auto& kap = cur.curvature();
        int n = cur.vertex_count();
        double ks_left = tr.domain->frame(cur.s_left()).curvature;
        double ks_right = tr.domain->frame(cur.s_right()).curvature;
        double rhs = std::abs(kap[0]) * ks_left + std::abs(kap[n - 1]) * ks_right;
        // Crossings located as in the inflection counter (the zero may sit
        // exactly on a vertex); |grad kappa| from a stencil spanning the gap.
        const auto& cum = cur.cumulative_arclength();
        double band = 1e-3 * sm.diag.max_abs_kappa;
        int last = 0, last_idx = -1;
        for (int j = 0; j < n; ++j) {
            int sgn = (kap[j] > band) ? 1 : (kap[j] < -band ? -1 : 0);
            if (sgn == 0) continue;
            if (last != 0 && sgn != last) {
                int lo = std::max(last_idx - 1, 0), hi = std::min(j + 1, n - 1);
                rhs -= 2.0 * std::abs((kap[hi] - kap[lo]) / (cum[hi] - cum[lo]));
            }
            last = sgn;
            last_idx = j;
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(0.25));
        ++checked;
    }
    CHECK(checked >= 3);
}

TEST_CASE("Neumann curvature identity stays within 10h along a disk run") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve c = make_perturbed_chord(d, kPi, 0.0, 0.05, 1, 200, true);
    FlowConfig cfg;
    cfg.stop.time_at = 0.2;
    cfg.output_interval = 0.02;
    FlowTrace tr = run(c, d, cfg);
    for (size_t i = 2; i < tr.snapshots.size(); ++i) {
        const DiscreteCurve& cur = tr.snapshots[i].curve;
        double h = cur.max_edge();
        for (int end : {0, 1}) {
            int idx = end == 0 ? 0 : cur.last_index();
            BoundaryFrame f = d.frame(end == 0 ? cur.s_left() : cur.s_right());
            double lhs = cur.endpoint_curvature_derivative(end) *
                         dot(cur.tangent(idx), f.outward_normal);
            double rhs = f.curvature * cur.curvature()[idx];
            CHECK(std::abs(lhs - rhs) <= 10.0 * h);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fbcsf/chord_arc.hpp"
#include "fbcsf/initial_curves.hpp"

using namespace fbcsf;

namespace {

DiscreteCurve semicircle(const ConvexDomain& hp, double r, int n) {
    return make_boundary_arc(hp, 0.0, r, n);
}

// Largest c for which min Z >= 0 with the barrier shape: Z is linear in c, so
// the zero-min tuning is a single pair scan of d / (L * phi_hat(l / L)).
double tune_barrier_c(const DoubledCurve& dc, double eps) {
    ComparisonFunction unit = ComparisonFunction::barrier(1e-3, eps);
    const double L = dc.doubled_length();
    double best = kInf;
    for (int k1 = 0; k1 + 1 < dc.element_count(); ++k1) {
        for (int k2 = k1 + 1; k2 < dc.element_count(); ++k2) {
            DoubledIndex a = dc.element(k1), b = dc.element(k2);
            double l = dc.arclen(a, b);
            if (l <= 0.0) continue;
            double ph = unit.value(l / L) / 1e-3;
            if (ph <= 0.0) continue;
            best = std::min(best, dc.chord(a, b) / (L * ph));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("comparison function admissibility") {
    CHECK_NOTHROW(ComparisonFunction::barrier(0.005, 0.05));
    CHECK_NOTHROW(ComparisonFunction::scaled_sine(0.25, 0.0));
    // |phi'| = c pi >= 1 is rejected.
    CHECK_THROWS_AS(ComparisonFunction::scaled_sine(0.4, 0.0), std::invalid_argument);

    // A concave symmetric table is accepted; an asymmetric one is not.
    std::vector<double> ok(101), bad(101);
    for (int i = 0; i <= 100; ++i) {
        double z = i / 100.0;
        ok[i] = 0.5 * z * (1.0 - z);
        bad[i] = std::sin(0.5 * kPi * z);
    }
    CHECK_NOTHROW(ComparisonFunction::tabulated(ok));
    CHECK_THROWS_AS(ComparisonFunction::tabulated(bad), std::invalid_argument);
}

TEST_CASE("barrier stays below the identity, so chords have positive Z") {
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    for (int k = 0; k < 10000; ++k) {
        double z = (k + 0.5) / 10000.0;
        CHECK(phi.value(z) < z);
    }
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve chord = make_chord(d, kPi, 0.0, 64);
    DoubledCurve dc(chord, d);
    // Same-sign pairs on a straight chord: d = l, so Z = l - L phi(l/L) > 0.
    for (int i = 0; i <= 64; i += 7) {
        for (int j = i + 1; j <= 64; j += 5) {
            double z = evaluate_Z(dc, phi, {i, +1}, {j, +1});
            CHECK(z > 0.0);
        }
    }
}

TEST_CASE("Z vanishes at the identified diagonal for the barrier") {
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve c = semicircle(hp, 1.0, 32);
    DoubledCurve dc(c, hp);
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    CHECK(evaluate_Z(dc, phi, {5, +1}, {5, +1}) == doctest::Approx(0.0));
}

TEST_CASE("semicircle with the paper's barrier keeps min Z nonnegative") {
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve c = semicircle(hp, 1.0, 200);
    DoubledCurve dc(c, hp);
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    MinZResult mz = min_Z(dc, phi);
    CHECK(mz.value >= 0.0);
}

TEST_CASE("extended profile of the semicircle is the circle profile") {
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve c = semicircle(hp, 1.0, 400);
    DoubledCurve dc(c, hp);
    ProfileReport rep = extended_profile(dc, 64);
    CHECK(rep.doubled_length == doctest::Approx(2.0 * kPi).epsilon(1e-4));
    int nonempty = 0;
    for (const ProfileBin& bin : rep.bins) {
        if (bin.branch == ProfileBranch::empty) continue;
        ++nonempty;
        CHECK(bin.psi == doctest::Approx(2.0 * std::sin(0.5 * bin.delta)).epsilon(1e-3));
    }
    CHECK(nonempty == 64);
    // Near-diagonal bin: chord approaches arc.
    CHECK(rep.bins[0].psi == doctest::Approx(rep.bins[0].delta).epsilon(1e-3));
}

TEST_CASE("profile of the disk diameter is the identity") {
    // On a diameter every same-sign pair has d = l, and reflected routes
    // through an endpoint are straight as well, so Psi(delta) = delta.
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve chord = make_chord(d, kPi, 0.0, 100);
    DoubledCurve dc(chord, d);
    ProfileReport rep = extended_profile(dc, 50);
    for (const ProfileBin& bin : rep.bins) {
        if (bin.branch == ProfileBranch::empty) continue;
        CHECK(bin.psi == doctest::Approx(bin.delta).epsilon(1e-9));
    }
    // Psi at delta = L: the pair at arclength 1 from an endpoint on opposite
    // copies, i.e. the centre against itself; d~ doubles the inradius there.
    DoubledIndex mid_plus{50, +1}, mid_minus{50, -1};
    CHECK(dc.arclen(mid_plus, mid_minus) == doctest::Approx(2.0));
    double dtilde = dc.chord(mid_plus, mid_minus);
    CHECK(dtilde == doctest::Approx(2.0).epsilon(1e-9));
    // Dense boundary-sample oracle for the same quantity.
    Vec2 x = chord.vertices()[50];
    double best = kInf;
    for (int i = 0; i < 100000; ++i) {
        Vec2 z = d.frame(d.boundary_length() * i / 100000).point;
        best = std::min(best, 2.0 * dist(x, z));
    }
    CHECK(dtilde == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("profile is monotone under refinement") {
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve c1 = semicircle(hp, 1.0, 100);
    DiscreteCurve c2 = semicircle(hp, 1.0, 200);
    ProfileReport r1 = extended_profile(DoubledCurve(c1, hp), 32);
    ProfileReport r2 = extended_profile(DoubledCurve(c2, hp), 32);
    double h = c1.max_edge();
    for (int b = 0; b < 32; ++b) {
        if (r1.bins[b].branch == ProfileBranch::empty ||
            r2.bins[b].branch == ProfileBranch::empty) {
            continue;
        }
        CHECK(r2.bins[b].psi <= r1.bins[b].psi + 2.0 * h);
    }
}

TEST_CASE("scale invariance of the normalised profile and Z") {
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    for (double lambda : {0.1, 10.0}) {
        ConvexDomain d1 = ConvexDomain::disk(1.0);
        ConvexDomain d2 = ConvexDomain::disk(lambda);
        DiscreteCurve c1 = make_boundary_arc(d1, 0.0, 0.4, 64);
        DiscreteCurve c2 = make_boundary_arc(d2, 0.0, 0.4 * lambda, 64);
        DoubledCurve dc1(c1, d1), dc2(c2, d2);
        double L1 = dc1.doubled_length(), L2 = dc2.doubled_length();
        CHECK(L2 == doctest::Approx(lambda * L1).epsilon(1e-9));
        for (int k1 = 0; k1 < dc1.element_count(); k1 += 11) {
            for (int k2 = k1 + 1; k2 < dc1.element_count(); k2 += 13) {
                DoubledIndex a = dc1.element(k1), b = dc1.element(k2);
                double z1 = evaluate_Z(dc1, phi, a, b) / L1;
                double z2 = evaluate_Z(dc2, phi, a, b) / L2;
                CHECK(z1 == doctest::Approx(z2).epsilon(1e-8));
            }
        }
        ProfileReport r1 = extended_profile(dc1, 32);
        ProfileReport r2 = extended_profile(dc2, 32);
        for (int b = 0; b < 32; ++b) {
            if (r1.bins[b].branch == ProfileBranch::empty) continue;
            CHECK(r2.bins[b].psi / L2 == doctest::Approx(r1.bins[b].psi / L1).epsilon(1e-8));
        }
    }
}

TEST_CASE("minimum conditions: positive minimum is inconclusive") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    DiscreteCurve chord = make_chord(d, kPi, 0.0, 64);
    DoubledCurve dc(chord, d);
    ComparisonFunction phi = ComparisonFunction::barrier(0.005, 0.05);
    ProfileReport rep = extended_profile(dc, 32, &phi);
    MinimumConditionReport mc = check_minimum_conditions(dc, phi, rep);
    CHECK(mc.outcome == MinimumConditionReport::Outcome::inconclusive_min_not_zero);
}

TEST_CASE("minimum conditions case (a): stadium tuned to a zero minimum") {
    // Two parallel legs joined by a cap; the zero minimum sits at the pair of
    // feet, where the legs are anti-parallel and alpha_x + alpha_y = pi.
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve st = make_stadium(hp, 0.0, 0.03, 1.0, 600);
    DoubledCurve dc(st, hp);
    const double eps = 0.05;
    double c_star = tune_barrier_c(dc, eps);
    CHECK(c_star > 0.006);
    CHECK(c_star < 0.009);
    ComparisonFunction phi = ComparisonFunction::barrier(c_star, eps);
    ProfileReport rep = extended_profile(dc, 32, &phi);
    CHECK(std::abs(rep.min_z) < 1e-9 * dc.doubled_length());
    MinimumConditionReport mc = check_minimum_conditions(dc, phi, rep);
    CHECK(mc.outcome == MinimumConditionReport::Outcome::case_a);
    CHECK(mc.pass);
    CHECK(mc.alpha_sum_residual < 10.0 * st.max_edge());
    CHECK(mc.second_variation_a > 0.0);
}

TEST_CASE("minimum conditions case (b): bulged curve in the disk") {
    // Chord near the boundary bowed outward with an asymmetric bump, so the
    // reflected branch attains the zero minimum away from the l = L/2
    // crossover; at the minimiser Snell's law and beta_x = beta_y hold and
    // (1/dx + 1/dy) cos(theta) + 2 kappa^S < 0.
    ConvexDomain d = ConvexDomain::disk(1.0);
    const int n = 400;
    Vec2 a = d.frame(-0.5).point, b = d.frame(0.5).point;
    std::vector<Vec2> v(n + 1);
    for (int k = 0; k <= n; ++k) {
        double u = static_cast<double>(k) / n;
        double arg = (u - 0.35) / 0.16;
        double bump = 0.085 * std::exp(-arg * arg);
        v[k] = a + u * (b - a) + bump * Vec2{1.0, 0.0};  // outward, toward (1,0)
    }
    align_endpoints(d, v, -0.5, 0.5);
    DiscreteCurve curve(d, std::move(v));
    DoubledCurve dc(curve, d);

    const double eps = 0.05;
    double c_star = tune_barrier_c(dc, eps);
    ComparisonFunction phi = ComparisonFunction::barrier(c_star, eps);
    ProfileReport rep = extended_profile(dc, 32, &phi);
    CHECK(std::abs(rep.min_z) < 1e-9 * dc.doubled_length());
    CHECK(rep.argmin_branch == ProfileBranch::reflected);
    MinimumConditionReport mc = check_minimum_conditions(dc, phi, rep);
    CHECK(mc.outcome == MinimumConditionReport::Outcome::case_b);
    CHECK(mc.pass);
    CHECK(mc.beta_residual < 10.0 * curve.max_edge());
    CHECK(mc.theta_residual < 1e-6);
    CHECK(mc.sign_condition < 0.0);
    CHECK(mc.second_variation_b >= -mc.tol_ineq);
}

TEST_CASE("branch bookkeeping matches the sign rule") {
    ConvexDomain hp = ConvexDomain::half_plane();
    DiscreteCurve c = semicircle(hp, 1.0, 24);
    DoubledCurve dc(c, hp);
    ProfileReport rep = extended_profile(dc, 16);
    for (const ProfileBin& bin : rep.bins) {
        if (bin.branch == ProfileBranch::empty) continue;
        bool same = (bin.a.sign == bin.b.sign) || dc.is_endpoint(bin.a) || dc.is_endpoint(bin.b);
        CHECK(((bin.branch == ProfileBranch::classical) == same));
    }
}

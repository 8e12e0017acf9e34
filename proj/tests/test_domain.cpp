#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fbcsf/domain.hpp"

using namespace fbcsf;

TEST_CASE("disk frame at s=0") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    BoundaryFrame f = d.frame(0.0);
    CHECK(f.point.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.point.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.outward_normal.x == doctest::Approx(1.0));
    CHECK(f.tangent.y == doctest::Approx(1.0));
    CHECK(f.curvature == doctest::Approx(1.0));
    CHECK(d.boundary_length() == doctest::Approx(2.0 * kPi));
}

TEST_CASE("half-plane frame is flat") {
    ConvexDomain d = ConvexDomain::half_plane();
    BoundaryFrame f = d.frame(2.0);
    CHECK(f.point.x == doctest::Approx(2.0));
    CHECK(f.point.y == doctest::Approx(0.0));
    CHECK(f.outward_normal.y == doctest::Approx(-1.0));
    CHECK(f.curvature == 0.0);
    CHECK(d.boundary_length() == kInf);
    CHECK_THROWS_AS(d.frame(kNaN), std::invalid_argument);
}

TEST_CASE("ellipse curvature at the wide vertex is a/b^2") {
    ConvexDomain d = ConvexDomain::ellipse(2.0, 1.0);
    BoundaryFrame f = d.frame(0.0);
    CHECK(f.point.x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.curvature == doctest::Approx(2.0).epsilon(1e-10));

    // Finite differences of the boundary embedding confirm the closed form.
    double ds = 1e-4;
    Vec2 pm = d.frame(-ds).point, p0 = f.point, pp = d.frame(ds).point;
    Vec2 dd = (pm - 2.0 * p0 + pp) / (ds * ds);
    CHECK(norm(dd) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("frames are orthonormal with T = J N") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ConvexDomain> doms;
    doms.push_back(ConvexDomain::disk(0.7));
    doms.push_back(ConvexDomain::ellipse(2.0, 0.8));
    doms.push_back(ConvexDomain::half_plane());
    for (const auto& d : doms) {
        double L = d.bounded() ? d.boundary_length() : 10.0;
        for (int k = 0; k < 200; ++k) {
            double s = (u(rng) - 0.2) * 1.4 * L;
            BoundaryFrame f = d.frame(s);
            CHECK(std::abs(norm(f.tangent) - 1.0) < 1e-12);
            CHECK(std::abs(norm(f.outward_normal) - 1.0) < 1e-12);
            CHECK(std::abs(dot(f.tangent, f.outward_normal)) < 1e-12);
            CHECK(norm(f.tangent - rot90(f.outward_normal)) < 1e-12);
            CHECK(f.curvature >= 0.0);
        }
    }
}

TEST_CASE("sampled circle reproduces analytic frames") {
    std::vector<Vec2> pts;
    const int n = 64;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * kPi * i / n;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    ConvexDomain d = ConvexDomain::sampled(pts);
    CHECK(d.boundary_length() == doctest::Approx(2.0 * kPi).epsilon(1e-5));
    for (double s : {0.1, 1.0, 2.5, 4.0, 6.0}) {
        BoundaryFrame f = d.frame(s);
        CHECK(norm(f.point) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(std::abs(dot(f.tangent, f.outward_normal)) < 1e-8);
        CHECK(norm(f.tangent - rot90(f.outward_normal)) < 1e-8);
        CHECK(f.curvature == doctest::Approx(1.0).epsilon(1e-3));
        // Outward normal points away from the centre.
        CHECK(dot(f.outward_normal, f.point) > 0.9);
    }
}

TEST_CASE("sampled rejects non-convex input") {
    std::vector<Vec2> pts = {{1, 0}, {0, 1}, {-1, 0}, {0.1, 0.1}, {0, -1}};
    CHECK_THROWS_AS(ConvexDomain::sampled(pts), std::invalid_argument);
}

TEST_CASE("projection: disk and half-plane closed forms") {
    ConvexDomain disk = ConvexDomain::disk(1.0);
    ProjectionResult r = disk.project({0.5, 0.0});
    CHECK(r.frame.s == doctest::Approx(0.0));
    CHECK(r.distance == doctest::Approx(0.5));

    ConvexDomain hp = ConvexDomain::half_plane();
    ProjectionResult r2 = hp.project({3.0, 2.0});
    CHECK(r2.frame.point.x == doctest::Approx(3.0));
    CHECK(r2.frame.point.y == doctest::Approx(0.0));
    CHECK(r2.distance == doctest::Approx(2.0));
}

TEST_CASE("projection matches dense boundary scan on the ellipse") {
    ConvexDomain d = ConvexDomain::ellipse(2.0, 1.0);
    const double L = d.boundary_length();

    auto brute = [&](Vec2 x) {
        const int n = 100000;
        double best_s = 0.0, best_f = kInf;
        for (int i = 0; i < n; ++i) {
            double s = L * i / n;
            double f = norm_sq(d.frame(s).point - x);
            if (f < best_f) {
                best_f = f;
                best_s = s;
            }
        }
        return best_s;
    };

    Vec2 x{1.9, 0.3};
    ProjectionResult r = d.project(x);
    double sb = brute(x);
    CHECK(std::abs(std::remainder(r.frame.s - sb, L)) < 1e-4);  // brute grid ~ 1e-4
    // Newton sits at a genuine stationary point of the distance.
    CHECK(std::abs(dot(r.frame.point - x, r.frame.tangent)) < 1e-10);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(-1.9, 1.9), uy(-0.95, 0.95);
    for (int k = 0; k < 5; ++k) {
        Vec2 p{ux(rng), uy(rng)};
        if (!d.contains(p)) continue;
        ProjectionResult rr = d.project(p);
        CHECK(std::abs(dot(rr.frame.point - p, rr.frame.tangent)) < 1e-9);
    }
}

TEST_CASE("projection idempotence") {
    std::vector<ConvexDomain> doms;
    doms.push_back(ConvexDomain::disk(1.3));
    doms.push_back(ConvexDomain::ellipse(2.0, 1.0));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (const auto& d : doms) {
        for (int k = 0; k < 20; ++k) {
            Vec2 p{u(rng), u(rng)};
            ProjectionResult r1 = d.project(p);
            ProjectionResult r2 = d.project(r1.frame.point);
            double L = d.boundary_length();
            CHECK(std::abs(std::remainder(r1.frame.s - r2.frame.s, L)) < 1e-10);
        }
    }
}

TEST_CASE("angles: ray anti-parallel to the outward normal") {
    ConvexDomain hp = ConvexDomain::half_plane();
    BoundaryFrame z = hp.frame(0.0);
    AngleData a = angles_at(hp, {0.0, 1.0}, {1.0, 1.0}, z, {0.0, 1.0}, {0.0, 1.0});
    CHECK(std::abs(std::remainder(a.theta_x - kPi, 2.0 * kPi)) < 1e-12);
    CHECK(std::cos(a.theta_x) == doctest::Approx(-1.0));
}

TEST_CASE("angles: chord decomposition in the (-JX, X) frame") {
    // x=(1,1), y=(0,0), X=(1,0): chord direction (s2/2, s2/2); sin(alpha)=s2/2
    // and cos(alpha) = <w, -JX> = -s2/2, hence alpha = 3pi/4.
    ConvexDomain hp = ConvexDomain::half_plane();
    BoundaryFrame z = hp.frame(0.0);
    Vec2 x{1.0, 1.0}, y{0.0, 0.5};
    AngleData a = angles_at(hp, x, y, z, {1.0, 0.0}, {1.0, 0.0});
    Vec2 w = normalized(x - y);
    CHECK(std::sin(a.alpha_x) == doctest::Approx(dot(w, Vec2{1.0, 0.0})).epsilon(1e-12));
    AngleData a2 = angles_at(hp, {1.0, 1.0}, {1e-9, 1e-9}, z, {1.0, 0.0}, {1.0, 0.0});
    CHECK(a2.alpha_x == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-6));
    CHECK(angle_reconstruction_residual(a2, {1.0, 1.0}, {1e-9, 1e-9}, z, {1.0, 0.0},
                                        {1.0, 0.0}) < 1e-10);
}

TEST_CASE("angles: X == Y forces alpha_x == alpha_y") {
    ConvexDomain d = ConvexDomain::disk(2.0);
    BoundaryFrame z = d.frame(1.0);
    Vec2 X = normalized({0.3, 0.9});
    AngleData a = angles_at(d, {0.5, 0.1}, {-0.4, 0.6}, z, X, X);
    CHECK(std::abs(std::remainder(a.alpha_x - a.alpha_y, 2.0 * kPi)) < 1e-12);
}

TEST_CASE("angles: degenerate configurations throw with a name") {
    ConvexDomain d = ConvexDomain::disk(1.0);
    BoundaryFrame z = d.frame(0.0);
    CHECK_THROWS_WITH_AS(angles_at(d, {0.5, 0.0}, {0.5, 0.0}, z, {1, 0}, {1, 0}),
                         doctest::Contains("alpha"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(angles_at(d, {1.0, 0.0}, {0.5, 0.0}, z, {1, 0}, {1, 0}),
                         doctest::Contains("theta_x"), std::invalid_argument);
}

TEST_CASE("angle reconstruction residual below 1e-10 on random configurations") {
    ConvexDomain d = ConvexDomain::ellipse(1.5, 1.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    while (tested < 200) {
        Vec2 x{1.4 * u(rng), 0.9 * u(rng)};
        Vec2 y{1.4 * u(rng), 0.9 * u(rng)};
        if (!d.contains(x) || !d.contains(y) || dist(x, y) < 1e-3) continue;
        BoundaryFrame z = d.frame(u(rng) * d.boundary_length());
        double ax = u(rng) * kPi, ay = u(rng) * kPi;
        Vec2 X{std::cos(ax), std::sin(ax)}, Y{std::cos(ay), std::sin(ay)};
        AngleData a = angles_at(d, x, y, z, X, Y);
        CHECK(angle_reconstruction_residual(a, x, y, z, X, Y) < 1e-10);
        // <X, Y> = cos(alpha_x - alpha_y)
        CHECK(dot(X, Y) == doctest::Approx(std::cos(a.alpha_x - a.alpha_y)).epsilon(1e-10));
        ++tested;
    }
}

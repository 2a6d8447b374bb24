#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pplab/geometry.hpp"
#include "pplab/rng.hpp"

using namespace pplab;

TEST_CASE("build_window produces exact cubes") {
    const Window w2 = build_window(16.0, 2);
    CHECK(w2.side == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(w2.contains(Point(2.0, 0.0)));
    CHECK(!w2.contains(Point(2.0001, 0.0)));

    const Window w3 = build_window(1.0, 3);
    CHECK(w3.side == doctest::Approx(1.0).epsilon(1e-12));
    const Window w8 = build_window(8.0, 3);
    CHECK(w8.side == doctest::Approx(2.0).epsilon(1e-12));
    // volume reproduced to 1e-12 relative
    CHECK(std::abs(std::pow(w8.side, 3) - 8.0) <= 8.0 * 1e-12);

    CHECK_THROWS_AS(build_window(0.0, 2), invalid_argument_error);
    CHECK_THROWS_AS(build_window(-1.0, 2), invalid_argument_error);
    CHECK_THROWS_AS(build_window(1.0, 4), invalid_argument_error);
}

TEST_CASE("neighbors_within matches the quadratic scan") {
    const std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}};
    SpatialIndex idx(pts, 1.0);
    CHECK(idx.neighbors_within(pts[0], 1.0, 0) == std::vector<int>{1});
    CHECK(idx.neighbors_within(pts[0], 0.5, 0).empty());
    CHECK(idx.neighbors_within(pts[0], 3.0, 0) == std::vector<int>{1, 2});

    RngStream rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> cloud;
        const int n = 2 + static_cast<int>(rng.uniform() * 60);
        for (int i = 0; i < n; ++i)
            cloud.push_back(oracle::random_point_2d(rng, 3.0));
        SpatialIndex index(cloud, 0.7);
        const Point q = oracle::random_point_2d(rng, 3.0);
        const double r = rng.uniform(0.0, 2.5);
        auto got = index.neighbors_within(q, r);
        auto want = oracle::neighbors_bruteforce(cloud, q, r, -1);
        CHECK(got == want);
    }
}

TEST_CASE("miniball on the named fixtures") {
    {
        const std::vector<Point> pts{{0.0, 0.0}, {2.0, 0.0}};
        const Ball b = miniball(pts);
        CHECK(b.center[0] == doctest::Approx(1.0));
        CHECK(b.center[1] == doctest::Approx(0.0));
        CHECK(b.radius == doctest::Approx(1.0));
    }
    {
        const std::vector<Point> pts{{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}};
        const Ball b = miniball(pts);
        CHECK(b.center[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(b.center[1] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(b.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    }
    {
        const std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.866}};
        const Ball b = miniball(pts);
        CHECK(b.radius == doctest::Approx(0.5774).epsilon(1e-3));
    }
    CHECK_THROWS_AS(miniball(std::vector<Point>{}), invalid_argument_error);
}

TEST_CASE("miniball equals the exhaustive oracle on random inputs") {
    RngStream rng(29, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform() * 3);
        const int n = 1 + static_cast<int>(rng.uniform() * 7);
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) {
            Point p;
            p.dim = d;
            for (int c = 0; c < d; ++c) p[c] = rng.uniform(-1.0, 1.0);
            pts.push_back(p);
        }
        const Ball got = miniball(pts);
        const Ball want = oracle::miniball_bruteforce(pts);
        CHECK(got.radius == doctest::Approx(want.radius).epsilon(1e-9));
        for (const auto& p : pts) CHECK(dist(got.center, p) <= got.radius + 1e-9);
    }
}

TEST_CASE("circumsphere fixtures and degeneracy") {
    {
        const std::vector<Point> pts{{0.0, 0.0}, {2.0, 0.0}};
        const Ball b = circumsphere(pts);
        CHECK(b.center[0] == doctest::Approx(1.0));
        CHECK(b.radius == doctest::Approx(1.0));
    }
    {
        const std::vector<Point> pts{{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}};
        const Ball b = circumsphere(pts);
        CHECK(b.center[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(b.center[1] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-9));
    }
    {
        const std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
        const Ball b = circumsphere(pts);
        CHECK(b.center[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(b.center[1] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(b.radius == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
    }
    const std::vector<Point> collinear{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(circumsphere(collinear), degeneracy_error);
}

TEST_CASE("circumsphere equidistance on random nondegenerate inputs") {
    RngStream rng(31, 0);
    int done = 0;
    while (done < 300) {
        const int d = 2 + static_cast<int>(rng.uniform() * 2);
        const int k = 1 + static_cast<int>(rng.uniform() * d);
        std::vector<Point> pts;
        for (int i = 0; i <= k; ++i) {
            Point p;
            p.dim = d;
            for (int c = 0; c < d; ++c) p[c] = rng.uniform(-1.0, 1.0);
            pts.push_back(p);
        }
        try {
            const Ball b = circumsphere(pts);
            for (const auto& p : pts)
                CHECK(std::abs(dist(b.center, p) - b.radius) <=
                      1e-9 * std::max(1.0, b.radius));
            ++done;
        } catch (const degeneracy_error&) {
            // near-degenerate draw, try again
        }
    }
}

TEST_CASE("in_open_convex_hull fixtures") {
    const std::vector<Point> seg{{0.0, 0.0}, {2.0, 0.0}};
    CHECK(in_open_convex_hull(Point(1.0, 0.0), seg));
    CHECK(!in_open_convex_hull(Point(2.0, 0.0), seg));

    const std::vector<Point> tri{{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}};
    CHECK(!in_open_convex_hull(Point(1.0, 0.0), tri));  // on a boundary edge
    CHECK(in_open_convex_hull(Point(1.0, 0.3), tri));
    CHECK(!in_open_convex_hull(Point(1.0, -0.2), tri));

    const std::vector<Point> degen{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(in_open_convex_hull(Point(1.0, 0.0), degen),
                    degeneracy_error);
}

TEST_CASE("boundary overlap for the cube") {
    const Window w = build_window(1.0, 2);
    CHECK(boundary_overlap(w, Point(0.5, 0.0)) == doctest::Approx(0.5));
    CHECK(boundary_overlap(w, Point(0.0, 0.0)) == doctest::Approx(0.0));

    // limit gamma(y) = |y1| + |y2| from inclusion-exclusion over growing cubes
    const Point y(0.3, -0.7);
    for (double n : {1e4, 1e6, 1e8}) {
        const Window big = build_window(n, 2);
        const double scaled = boundary_overlap(big, y) / std::sqrt(n);
        CHECK(scaled == doctest::Approx(boundary_overlap_limit(y))
                            .epsilon(10.0 / std::sqrt(n)));
    }

    SUBCASE("symmetry and monotonicity") {
        RngStream rng(17, 0);
        const Window cube = build_window(9.0, 2);
        for (int t = 0; t < 200; ++t) {
            const Point y = oracle::random_point_2d(rng, 2.0);
            const Point neg(-y[0], -y[1]);
            CHECK(boundary_overlap(cube, y) ==
                  doctest::Approx(boundary_overlap(cube, neg)).epsilon(1e-12));
            const Point grown(y[0] * 1.2, y[1]);
            CHECK(boundary_overlap(cube, grown) >=
                  boundary_overlap(cube, y) - 1e-12);
        }
    }
}

TEST_CASE("angular average coefficient of the cube limit") {
    // c_d = E |u_1| * d over the unit sphere, checked by quadrature
    const double c2 = boundary_overlap_angular_coeff(2);
    const double quad2 = oracle::radial_quadrature(
        [](double t) {
            const double th = 2.0 * std::numbers::pi * t;
            return std::abs(std::cos(th)) + std::abs(std::sin(th));
        },
        1.0, 100000);
    CHECK(c2 == doctest::Approx(quad2).epsilon(1e-6));
    CHECK(boundary_overlap_angular_coeff(1) == doctest::Approx(1.0));
    // d = 3: 3 E|u1| with u uniform on S^2; E|u1| = 1/2
    CHECK(boundary_overlap_angular_coeff(3) == doctest::Approx(1.5));
}

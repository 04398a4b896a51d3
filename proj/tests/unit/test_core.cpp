#include <doctest.h>

#include <cmath>
#include <set>

#include "arc/core.hpp"
#include "support.hpp"

using namespace arc;

TEST_CASE("eps_stabs examples") {
    const EpsParams p(0.2);
    const Point q{0, 0};
    CHECK(eps_stabs(q, Point{0.9, 0}, Point{1.3, 0}, p));
    CHECK_FALSE(eps_stabs(q, Point{1.05, 0}, Point{1.15, 0}, p));
    CHECK_FALSE(eps_stabs(q, Point{0.5, 0}, Point{0.5, 0}, p));
    // closed ball and closed outer shell
    CHECK(eps_stabs(q, Point{1.0, 0}, Point{0, 1.5}, EpsParams(0.5)));
    CHECK_THROWS_AS(eps_stabs(q, Point{1.0}, Point{0, 1}, p), ContractViolation);
}

TEST_CASE("eps_stabs is symmetric and forces separation") {
    Rng rng(Seed{17});
    const EpsParams p(0.3);
    for (int t = 0; t < 100000; ++t) {
        const Point q = testing::random_point(3, rng, -1.5, 1.5);
        const Point x = testing::random_point(3, rng, -1.5, 1.5);
        const Point y = testing::random_point(3, rng, -1.5, 1.5);
        const bool s = eps_stabs(q, x, y, p);
        REQUIRE(s == eps_stabs(q, y, x, p));
        if (s) REQUIRE(distance(x, y) >= p.eps * p.radius - 1e-12);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(EpsParams(0.0), ContractViolation);
    CHECK_THROWS_AS(EpsParams(1.0), ContractViolation);
    CHECK_THROWS_AS(EpsParams(0.5, 0.0), ContractViolation);
    CHECK_THROWS_AS(GridSpec(0.0), ContractViolation);
    CHECK_THROWS_AS(WeightedPointSet(2, {}, {}), ContractViolation);
    CHECK_THROWS_AS(WeightedPointSet(2, {1, 2, 3}, {1}), ContractViolation);
    CHECK_THROWS_AS(WeightedPointSet(1, {NAN}, {1}), ContractViolation);
    CHECK_NOTHROW(WeightedPointSet(1, {0.0}, {-2.0}));
}

TEST_CASE("snap_to_grid") {
    const GridSpec g(0.5);
    CHECK(snap_to_grid(Point{0.26, -0.26}, g) == Point{0.5, -0.5});
    CHECK(snap_to_grid(Point{1.5, -2.0}, g) == Point{1.5, -2.0});
    CHECK(snap_to_grid(Point{0.24999, 0}, g) == Point{0.0, 0.0});
    CHECK(snap_to_grid(Point{0.25}, g) == Point{0.5});

    Rng rng(Seed{3});
    const GridSpec fine(0.07);
    for (int t = 0; t < 10000; ++t) {
        const Point p = testing::random_point(4, rng, -10, 10);
        const Point s = snap_to_grid(p, fine);
        REQUIRE(snap_to_grid(s, fine) == s);
        for (std::size_t j = 0; j < p.size(); ++j) REQUIRE(std::abs(s[j] - p[j]) <= fine.side / 2 + 1e-12);
    }
}

TEST_CASE("rng streams") {
    Rng a(Seed{1}), b(Seed{1}), c(Seed{2});
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    CHECK(derive(Seed{5}, 1) != derive(Seed{5}, 2));
    CHECK(derive(Seed{5}, 1) == derive(Seed{5}, 1));
    CHECK(derive(Seed{5}, 1, 2) != derive(Seed{5}, 2, 1));

    Rng r(Seed{9});
    double sum = 0.0, sq = 0.0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double z = r.normal();
        sum += z;
        sq += z * z;
        REQUIRE(r.below(7) < 7);
    }
    CHECK(std::abs(sum / m) < 0.01);
    CHECK(std::abs(sq / m - 1.0) < 0.02);
}

TEST_CASE("gaussian projection") {
    const auto pts = testing::random_points(20, 5, 1);
    const auto id = GaussianProjection::identity(5).apply(pts);
    CHECK(id == pts);

    const GaussianProjection g(6, 3, Seed{4});
    CHECK(g.apply(Point(6, 0.0)) == Point(3, 0.0));
    CHECK(gaussian_project(pts, 3, Seed{8}) == gaussian_project(pts, 3, Seed{8}));
    CHECK(gaussian_project(pts, 3, Seed{8}).weights() == pts.weights());

    // Norm distortion above 50% for 500 vectors in d=128 -> k=40, over 20 seeds.
    Rng rng(Seed{21});
    std::vector<Point> vs;
    for (int i = 0; i < 500; ++i) vs.push_back(testing::random_point(128, rng, -1, 1));
    const auto set = WeightedPointSet::from_points(vs, std::vector<double>(500, 1.0));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto img = gaussian_project(set, 40, Seed{s});
        int bad = 0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            const double ratio = std::sqrt(squared_distance(img.point(i), Point(40, 0.0)) /
                                           squared_distance(set.point(i), Point(128, 0.0)));
            if (ratio < 0.5 || ratio > 1.5) ++bad;
        }
        CHECK(bad < 50);
    }
}

TEST_CASE("digest and hashing") {
    const auto a = testing::random_points(10, 3, 1);
    const auto b = testing::random_points(10, 3, 2);
    CHECK(digest(a) == digest(testing::random_points(10, 3, 1)));
    CHECK(digest(a) != digest(b));
    CHECK(digest(a).size() == 16);
    CHECK(point_hash(a.point(0)) != point_hash(a.point(1)));
    std::vector<std::uint32_t> idx{3, 1};
    const auto sel = a.select(idx);
    CHECK(sel.size() == 2);
    CHECK(sel.weight(0) == a.weight(3));
}

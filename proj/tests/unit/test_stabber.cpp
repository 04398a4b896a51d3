#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "arc/stabber.hpp"
#include "support.hpp"

using namespace arc;

TEST_CASE("scan cap") {
    CHECK(scan_cap_for(1000, 0.5, {}) == 1000);
    CHECK(scan_cap_for(1, 0.5, {}) == 1);
    ScanOptions tight;
    tight.cap_factor = 0.01;
    CHECK(scan_cap_for(1000, 0.5, tight) == 10);
}

TEST_CASE("index structure") {
    const auto pts = testing::random_points(300, 5, 1, 2.0);
    const auto idx = build_stab_index(pts, EpsParams(0.5), Seed{2});
    std::multiset<std::uint32_t> seen;
    for (std::size_t b = 0; b < idx.buckets().size(); ++b) {
        if (b > 0) CHECK(idx.buckets()[b - 1].first < idx.buckets()[b].first);
        for (auto i : idx.buckets()[b].second) seen.insert(i);
    }
    CHECK(seen.size() == 300);
    for (std::uint32_t i = 0; i < 300; ++i) CHECK(seen.count(i) == 1);

    const WeightedPointSet one(2, {0.3, 0.4}, {1.0});
    const auto single = build_stab_index(one, EpsParams(0.5), Seed{3});
    CHECK(single.bucket_count() == 1);

    const WeightedPointSet dup(2, {0.3, 0.4, 0.3, 0.4}, {1.0, 2.0});
    const auto twin = build_stab_index(dup, EpsParams(0.5), Seed{3});
    REQUIRE(twin.bucket_count() == 1);
    CHECK(twin.buckets()[0].second.size() == 2);
}

TEST_CASE("witnesses are exact") {
    const auto pts = testing::random_points(200, 4, 4, 1.5);
    const EpsParams params(0.5);
    Rng rng(Seed{5});
    for (int t = 0; t < 200; ++t) {
        const auto idx = build_stab_index(pts, params, Seed{static_cast<std::uint64_t>(t)});
        const Point q = testing::random_point(4, rng, -0.5, 2.0);
        const auto w = idx.witnesses(q);
        if (w.near) CHECK(distance(q, pts.point(*w.near)) <= params.outer_radius());
        if (w.far) CHECK(distance(q, pts.point(*w.far)) >= params.radius);
        // exhaustive scan: a witness exists whenever a qualifying point does
        bool any_near = false, any_far = false;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            any_near = any_near || within(q, pts.point(i), params.outer_radius());
            any_far = any_far || beyond(q, pts.point(i), params.radius);
        }
        CHECK(w.near.has_value() == any_near);
        CHECK(w.far.has_value() == any_far);
    }
}

TEST_CASE("planted pair gives both witnesses") {
    const WeightedPointSet pts = WeightedPointSet::from_points({{0.5, 0.0}, {2.0, 0.0}}, {1.0, 1.0});
    const auto idx = build_stab_index(pts, EpsParams(0.5), Seed{7});
    const auto w = idx.witnesses(Point{0.0, 0.0});
    REQUIRE(w.near);
    REQUIRE(w.far);
    CHECK(*w.near == 0);
    CHECK(*w.far == 1);
}

TEST_CASE("binding cap limits inspected points") {
    const auto pts = testing::random_points(400, 3, 8, 10.0);
    ScanOptions opt;
    opt.cap_factor = 0.05;
    const auto idx = build_stab_index(pts, EpsParams(0.5), Seed{9}, opt);
    CHECK(idx.scan_cap() == 20);
    const auto w = idx.witnesses(Point{100.0, 100.0, 100.0});
    CHECK_FALSE(w.near);
    CHECK(w.inspected_near == 20);
}

TEST_CASE("strict bands stay inside their bands") {
    const auto pts = testing::random_points(300, 4, 10, 2.0);
    ScanOptions opt;
    opt.strict_bands = true;
    const auto idx = build_stab_index(pts, EpsParams(0.5), Seed{11}, opt);
    const Point q{1, 1, 1, 1};
    const auto w = idx.witnesses(q);
    const BitCode fq = idx.embedding().embed(q);
    std::size_t in_near_band = 0;
    for (const auto& [code, members] : idx.buckets()) {
        if (static_cast<double>(hamming_distance(fq, code)) <= idx.embedding().theta()) in_near_band += members.size();
    }
    CHECK(w.inspected_near <= in_near_band);
}

TEST_CASE("mandatory verdicts") {
    const EpsParams params(0.5);
    Rng rng(Seed{12});
    const Point q{0, 0, 0};
    std::vector<Point> inside, outside;
    for (int i = 0; i < 40; ++i) {
        inside.push_back(testing::at_distance(q, rng.uniform(0.0, 1.0), rng));
        outside.push_back(testing::at_distance(q, rng.uniform(1.5, 4.0), rng));
    }
    const auto in = WeightedPointSet::from_points(inside, std::vector<double>(40, 1.0));
    const auto out = WeightedPointSet::from_points(outside, std::vector<double>(40, 1.0));
    const std::size_t reps = default_repetitions(40);
    CHECK(reps == 16);
    CHECK(build_classifier(in, params, reps, Seed{1}).classify(q) == Verdict::Covered);
    CHECK(build_classifier(out, params, reps, Seed{1}).classify(q) == Verdict::Disjoint);

    auto mixed = inside;
    mixed.push_back(testing::at_distance(q, 1.6, rng));
    const auto mix = WeightedPointSet::from_points(mixed, std::vector<double>(41, 1.0));
    CHECK(build_classifier(mix, params, 1, Seed{1}).classify(q) == Verdict::Stabbed);
}

TEST_CASE("classifier determinism and sizes") {
    const auto pts = testing::random_points(100, 3, 13, 2.0);
    const auto a = build_classifier(pts, EpsParams(0.4), 5, Seed{14});
    const auto b = build_classifier(pts, EpsParams(0.4), 5, Seed{14});
    CHECK(a.repetitions() == 5);
    CHECK(a.entry_count() == 500);
    Rng rng(Seed{15});
    for (int t = 0; t < 300; ++t) {
        const Point q = testing::random_point(3, rng, -1, 3);
        CHECK(a.classify(q) == b.classify(q));
    }
    CHECK(default_repetitions(1) == 1);
    CHECK(default_repetitions(2) == 3);
    CHECK(to_string(Verdict::Covered) == "covered");
    CHECK_THROWS_AS(build_classifier(pts, EpsParams(0.4), 0, Seed{1}), ContractViolation);
}
